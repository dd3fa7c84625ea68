use crate::affectance::{AffectanceModel, SignalStrength, Violation};
use crate::error::{invalid, Error, Result};
use crate::instance::{Instance, Mode};
use crate::power::PowerAssignment;
use crate::scalar::{within, Scalar};

struct Group<T> {
    members: Vec<usize>,
    incoming: Vec<T>,
}

/// Splits a `tau`-signal set into `delta`-signal groups by first-fit in
/// non-decreasing length order. A link joins the first group that remains a
/// `delta`-signal set with it; otherwise it opens a new group. Groups are
/// returned largest first.
///
/// Fails when `set` is not `tau`-signal, or when the group count exceeds
/// `ceil(4 delta/tau)` (unidirectional) or `ceil(8 delta/tau)`
/// (bidirectional).
pub fn signal_strengthen<T: Scalar>(
    inst: &Instance<T>,
    set: &[usize],
    power: &PowerAssignment<T>,
    tau: SignalStrength<T>,
    delta: SignalStrength<T>,
) -> Result<Vec<Vec<usize>>> {
    if tau.value() > delta.value() {
        return Err(invalid(format!(
            "target strength {} is below the input strength {}",
            delta.value(),
            tau.value()
        )));
    }
    let model = AffectanceModel::new(inst, power)?;
    let report = model.feasibility(set, tau)?;
    match report.violation {
        Some(Violation::WeakLink(link)) => return Err(Error::WeakLink { link }),
        Some(Violation::DegenerateDistance { from, to }) => return Err(Error::DegenerateDistance { from, to }),
        None => {}
    }
    if !report.feasible {
        let (link, sum) = report.worst.expect("infeasible report names a link");
        return Err(Error::NotSignalSet {
            link,
            affectance: sum.as_f64(),
            bound: tau.budget().as_f64(),
        });
    }

    let budget = delta.budget();
    let mut groups: Vec<Group<T>> = Vec::new();
    for v in inst.sort_by_length(set) {
        let fits = |g: &Group<T>| {
            let own: T = g.members.iter().map(|&u| model.affectance_or_inf(u, v)).sum();
            within(own, budget)
                && g.members
                    .iter()
                    .zip(&g.incoming)
                    .all(|(&u, &inc)| within(inc + model.affectance_or_inf(v, u), budget))
        };
        match groups.iter().position(fits) {
            Some(i) => {
                let g = &mut groups[i];
                let own = g.members.iter().map(|&u| model.affectance_or_inf(u, v)).sum();
                for (&u, inc) in g.members.iter().zip(g.incoming.iter_mut()) {
                    *inc = *inc + model.affectance_or_inf(v, u);
                }
                g.members.push(v);
                g.incoming.push(own);
            }
            None => groups.push(Group {
                members: vec![v],
                incoming: vec![T::zero()],
            }),
        }
    }

    let factor = match inst.mode() {
        Mode::Unidirectional => 4.0,
        Mode::Bidirectional => 8.0,
    };
    let bound = (factor * delta.value().as_f64() / tau.value().as_f64()).ceil() as usize;
    if groups.len() > bound {
        return Err(Error::StrengtheningBound {
            groups: groups.len(),
            bound,
        });
    }
    let mut out: Vec<Vec<usize>> = groups.into_iter().map(|g| g.members).collect();
    out.sort_by(|a, b| b.len().cmp(&a.len()));
    Ok(out)
}
