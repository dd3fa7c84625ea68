//! Partitioning link sets into feasible slots.

use serde::{Deserialize, Serialize};

use crate::affectance::AffectanceModel;
use crate::capacity::{algorithm_c, algorithm_pc, bidirectional_pc_capacity, AlgCConfig};
use crate::error::{invalid, Error, Result};
use crate::instance::{Instance, Mode};
use crate::power::{scale_power_for_noise, PowerAssignment};
use crate::scalar::{within, Scalar};

/// Power regime of a scheduling run.
#[derive(Debug, Clone, PartialEq)]
pub enum Regime<T> {
    Fixed(PowerAssignment<T>),
    /// Unidirectional power control through the mean assignment.
    PcUni,
    /// Bidirectional power control through the mean assignment.
    PcBi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleMethod {
    RepeatedCapacity,
    FirstFit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Slot<T> {
    pub links: Vec<usize>,
    pub power: PowerAssignment<T>,
    /// Resolved power of each slot member, in `links` order.
    pub powers: Vec<T>,
    /// Largest incoming affectance inside the slot.
    pub max_affectance: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Schedule<T> {
    pub method: ScheduleMethod,
    pub slots: Vec<Slot<T>>,
    /// Links that cannot be scheduled at all under the regime's power.
    pub weak: Vec<usize>,
}

impl<T: Scalar> Schedule<T> {
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Recomputes every slot's feasibility from scratch.
    pub fn verify(&self, inst: &Instance<T>) -> Result<bool> {
        for slot in &self.slots {
            let model = AffectanceModel::new(inst, &slot.power)?;
            if !model.feasibility(&slot.links, crate::affectance::SignalStrength::feasible())?.feasible {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn make_slot<T: Scalar>(model: &AffectanceModel<'_, T>, links: Vec<usize>) -> Slot<T> {
    let max_affectance = links
        .iter()
        .map(|&v| model.in_sum_or_inf(v, &links))
        .fold(T::zero(), T::max);
    Slot {
        powers: links.iter().map(|&v| model.powers()[v]).collect(),
        power: model.power().clone(),
        links,
        max_affectance,
    }
}

/// Repeatedly runs the regime's capacity algorithm on the residual links and
/// emits each output as a slot. Residual order is preserved between rounds.
pub fn schedule_repeated_capacity<T: Scalar>(
    inst: &Instance<T>,
    links: &[usize],
    regime: &Regime<T>,
) -> Result<Schedule<T>> {
    inst.check_set(links)?;
    let power = match regime {
        Regime::Fixed(p) => p.clone(),
        Regime::PcUni | Regime::PcBi => scale_power_for_noise(&PowerAssignment::mean(), inst)?,
    };
    match (regime, inst.mode()) {
        (Regime::PcUni, Mode::Bidirectional) => return Err(invalid("pc_uni regime needs a unidirectional instance")),
        (Regime::PcBi, Mode::Unidirectional) => return Err(invalid("pc_bi regime needs a bidirectional instance")),
        _ => {}
    }
    let model = AffectanceModel::new(inst, &power)?;
    let (mut residual, weak) = model.partition_weak(links);
    let cfg = AlgCConfig::default();
    let mut slots = Vec::new();
    while !residual.is_empty() {
        let r = match regime {
            Regime::Fixed(p) => algorithm_c(inst, &residual, p, &cfg)?,
            Regime::PcUni => algorithm_pc(inst, &residual, &cfg)?,
            Regime::PcBi => bidirectional_pc_capacity(inst, &residual, &cfg)?,
        };
        if r.output.is_empty() {
            return Err(Error::Stuck { residual });
        }
        residual.retain(|v| !r.output.contains(v));
        slots.push(make_slot(&model, r.output));
    }
    Ok(Schedule {
        method: ScheduleMethod::RepeatedCapacity,
        slots,
        weak,
    })
}

/// Scans links in input order and places each into the first slot that
/// stays feasible with it, opening a new slot otherwise.
pub fn schedule_first_fit<T: Scalar>(
    inst: &Instance<T>,
    links: &[usize],
    power: &PowerAssignment<T>,
) -> Result<Schedule<T>> {
    inst.check_set(links)?;
    let model = AffectanceModel::new(inst, power)?;
    let (usable, weak) = model.partition_weak(links);
    let one = T::one();
    // per slot: members and their current incoming affectance
    let mut slots: Vec<(Vec<usize>, Vec<T>)> = Vec::new();
    for v in usable {
        let fits = |(members, incoming): &(Vec<usize>, Vec<T>)| {
            let own: T = members.iter().map(|&u| model.affectance_or_inf(u, v)).sum();
            within(own, one)
                && members
                    .iter()
                    .zip(incoming)
                    .all(|(&u, &inc)| within(inc + model.affectance_or_inf(v, u), one))
        };
        match slots.iter().position(fits) {
            Some(i) => {
                let (members, incoming) = &mut slots[i];
                let own = members.iter().map(|&u| model.affectance_or_inf(u, v)).sum();
                for (&u, inc) in members.iter().zip(incoming.iter_mut()) {
                    *inc = *inc + model.affectance_or_inf(v, u);
                }
                members.push(v);
                incoming.push(own);
            }
            None => slots.push((vec![v], vec![T::zero()])),
        }
    }
    Ok(Schedule {
        method: ScheduleMethod::FirstFit,
        slots: slots.into_iter().map(|(m, _)| make_slot(&model, m)).collect(),
        weak,
    })
}
