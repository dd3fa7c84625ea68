//! Capacity maximization: greedy selection for a fixed power assignment and
//! power control through the mean (square-root) assignment.

mod levels;
mod strengthen;

pub use levels::{algorithm_pc, build_level_partition, length_classes, LevelPartition};
pub use strengthen::signal_strengthen;

use serde::{Deserialize, Serialize};

use crate::affectance::AffectanceModel;
use crate::error::{invalid, Result};
use crate::instance::{Instance, Mode};
use crate::power::{monotone_sublinear_violation, scale_power_for_noise, PowerAssignment};
use crate::scalar::Scalar;

/// Acceptance threshold of the greedy pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgCConfig<T> {
    pub gamma: T,
}

impl<T: Scalar> AlgCConfig<T> {
    pub fn new(gamma: T) -> Result<Self> {
        if gamma > T::zero() && gamma < T::one() {
            Ok(AlgCConfig { gamma })
        } else {
            Err(invalid(format!("gamma must lie in (0, 1), got {gamma}")))
        }
    }
}

impl<T: Scalar> Default for AlgCConfig<T> {
    fn default() -> Self {
        AlgCConfig { gamma: T::lit(0.5) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct LinkDiagnostic<T> {
    pub link: usize,
    /// Affectance received from the rest of the output set.
    pub in_affectance: T,
    /// Affectance caused on the rest of the output set.
    pub out_affectance: T,
}

/// Outcome of a capacity run. `output` is feasible under `power`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CapacityResult<T> {
    pub algorithm: String,
    /// Greedy set before the final filter, in selection order.
    pub selected: Vec<usize>,
    /// Final feasible set.
    pub output: Vec<usize>,
    pub power: PowerAssignment<T>,
    /// Resolved power of every output link, in `output` order.
    pub powers: Vec<T>,
    pub diagnostics: Vec<LinkDiagnostic<T>>,
    /// Input links excluded because they cannot meet SINR even alone.
    pub weak: Vec<usize>,
    pub gamma: T,
    /// False when the power assignment broke length-monotonicity or
    /// sub-linearity on the input (the approximation guarantee is void).
    pub power_class_ok: bool,
}

impl<T: Scalar> CapacityResult<T> {
    pub fn size(&self) -> usize {
        self.output.len()
    }

    fn empty(algorithm: &str, power: PowerAssignment<T>, gamma: T) -> Self {
        CapacityResult {
            algorithm: algorithm.into(),
            selected: Vec::new(),
            output: Vec::new(),
            power,
            powers: Vec::new(),
            diagnostics: Vec::new(),
            weak: Vec::new(),
            gamma,
            power_class_ok: true,
        }
    }
}

/// Greedy pass over `order`: a link joins when its incoming plus outgoing
/// affectance against the current selection is below `gamma` and `admit`
/// accepts it.
pub(crate) fn greedy<T: Scalar>(
    model: &AffectanceModel<'_, T>,
    order: &[usize],
    gamma: T,
    mut admit: impl FnMut(usize) -> bool,
) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for &v in order {
        let load = model.in_sum_or_inf(v, &chosen) + model.out_sum_or_inf(v, &chosen);
        if load < gamma && admit(v) {
            chosen.push(v);
        }
    }
    chosen
}

/// Keeps the members of `selected` whose incoming affectance from
/// `selected` is at most 1.
pub(crate) fn final_filter<T: Scalar>(model: &AffectanceModel<'_, T>, selected: &[usize]) -> Vec<usize> {
    selected
        .iter()
        .copied()
        .filter(|&v| model.in_sum_or_inf(v, selected) <= T::one())
        .collect()
}

pub(crate) fn assemble<T: Scalar>(
    algorithm: &str,
    model: &AffectanceModel<'_, T>,
    selected: Vec<usize>,
    output: Vec<usize>,
    weak: Vec<usize>,
    gamma: T,
    power_class_ok: bool,
) -> CapacityResult<T> {
    let diagnostics = output
        .iter()
        .map(|&v| LinkDiagnostic {
            link: v,
            in_affectance: model.in_sum_or_inf(v, &output),
            out_affectance: model.out_sum_or_inf(v, &output),
        })
        .collect();
    CapacityResult {
        algorithm: algorithm.into(),
        powers: output.iter().map(|&v| model.powers()[v]).collect(),
        selected,
        output,
        power: model.power().clone(),
        diagnostics,
        weak,
        gamma,
        power_class_ok,
    }
}

/// Greedy capacity for a fixed power assignment. Links are processed by
/// non-decreasing length (ties by id); a link is kept when
/// `a_S(v) + a_v(S) < gamma`, and the output is `{v in S : a_S(v) <= 1}`.
/// Works in both directionality modes.
pub fn algorithm_c<T: Scalar>(
    inst: &Instance<T>,
    links: &[usize],
    power: &PowerAssignment<T>,
    cfg: &AlgCConfig<T>,
) -> Result<CapacityResult<T>> {
    inst.check_set(links)?;
    let model = AffectanceModel::new(inst, power)?;
    Ok(algorithm_c_with(&model, links, cfg, "algorithm_c"))
}

pub(crate) fn algorithm_c_with<T: Scalar>(
    model: &AffectanceModel<'_, T>,
    links: &[usize],
    cfg: &AlgCConfig<T>,
    name: &str,
) -> CapacityResult<T> {
    let inst = model.instance();
    let (usable, weak) = model.partition_weak(links);
    let power_class_ok = monotone_sublinear_violation(model.powers(), inst, &usable).is_none();
    let order = inst.sort_by_length(&usable);
    let selected = greedy(model, &order, cfg.gamma, |_| true);
    let output = final_filter(model, &selected);
    assemble(name, model, selected, output, weak, cfg.gamma, power_class_ok)
}

/// Runs [`algorithm_c`] separately on each factor-2 length class and
/// returns the largest output (ties: shortest class).
pub fn equilength_capacity<T: Scalar>(
    inst: &Instance<T>,
    links: &[usize],
    power: &PowerAssignment<T>,
    cfg: &AlgCConfig<T>,
) -> Result<CapacityResult<T>> {
    inst.check_set(links)?;
    let model = AffectanceModel::new(inst, power)?;
    let (usable, weak) = model.partition_weak(links);
    let mut best: Option<CapacityResult<T>> = None;
    for class in length_classes(inst, &usable) {
        let r = algorithm_c_with(&model, &class, cfg, "equilength");
        if best.as_ref().is_none_or(|b| r.size() > b.size()) {
            best = Some(r);
        }
    }
    let mut best = best.unwrap_or_else(|| CapacityResult::empty("equilength", power.clone(), cfg.gamma));
    best.weak = weak;
    Ok(best)
}

/// Bidirectional capacity with power control: the greedy pass under the
/// noise-scaled mean assignment.
pub fn bidirectional_pc_capacity<T: Scalar>(
    inst: &Instance<T>,
    links: &[usize],
    cfg: &AlgCConfig<T>,
) -> Result<CapacityResult<T>> {
    if inst.mode() != Mode::Bidirectional {
        return Err(invalid("bidirectional power control needs a bidirectional instance"));
    }
    inst.check_set(links)?;
    let power = scale_power_for_noise(&PowerAssignment::mean(), inst)?;
    let model = AffectanceModel::new(inst, &power)?;
    Ok(algorithm_c_with(&model, links, cfg, "bidirectional_pc"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affectance::{is_feasible, SignalStrength};
    use crate::instance::PhysicalParams;
    use crate::metric::MetricSpace;

    /// `n` unit links where every sender is at distance 1 from every
    /// receiver (all points pairwise at distance 1).
    pub(crate) fn blocking(n: usize) -> Instance<f64> {
        let pts = 2 * n;
        let rows = (0..pts)
            .map(|i| (0..pts).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
            .collect();
        let ends: Vec<_> = (0..n).map(|i| (2 * i, 2 * i + 1)).collect();
        Instance::new(
            MetricSpace::explicit(rows).unwrap(),
            &ends,
            PhysicalParams::new(2.0, 1.0, 0.0).unwrap(),
            Mode::Unidirectional,
        )
        .unwrap()
    }

    pub(crate) fn spread(lengths: &[f64], gap: f64, mode: Mode) -> Instance<f64> {
        let mut coords = Vec::new();
        let mut ends = Vec::new();
        for (i, &l) in lengths.iter().enumerate() {
            let x = gap * i as f64;
            coords.push(vec![x, 0.0]);
            coords.push(vec![x, l]);
            ends.push((2 * i, 2 * i + 1));
        }
        Instance::new(
            MetricSpace::euclidean(2, coords).unwrap(),
            &ends,
            PhysicalParams::new(2.0, 1.0, 0.0).unwrap(),
            mode,
        )
        .unwrap()
    }

    #[test]
    fn single_link() {
        let inst = spread(&[1.0], 10.0, Mode::Unidirectional);
        let r = algorithm_c(&inst, &[0], &PowerAssignment::uniform(), &AlgCConfig::default()).unwrap();
        assert_eq!(r.selected, vec![0]);
        assert_eq!(r.output, vec![0]);
    }

    #[test]
    fn empty_input() {
        let inst = spread(&[1.0], 10.0, Mode::Unidirectional);
        let r = algorithm_c(&inst, &[], &PowerAssignment::uniform(), &AlgCConfig::default()).unwrap();
        assert!(r.output.is_empty() && r.selected.is_empty());
    }

    #[test]
    fn three_blocking_links_keep_first() {
        // second candidate sees a_S + a_v = 1 + 1 = 2 >= 1/2
        let inst = blocking(3);
        let r = algorithm_c(&inst, &[0, 1, 2], &PowerAssignment::uniform(), &AlgCConfig::default()).unwrap();
        assert_eq!(r.selected, vec![0]);
        assert_eq!(r.output, vec![0]);
    }

    #[test]
    fn processes_by_length_then_id() {
        let inst = spread(&[3.0, 1.0, 1.0], 1000.0, Mode::Unidirectional);
        let r = algorithm_c(&inst, &[0, 1, 2], &PowerAssignment::uniform(), &AlgCConfig::default()).unwrap();
        assert_eq!(r.selected, vec![1, 2, 0]);
        let again = algorithm_c(&inst, &[2, 0, 1], &PowerAssignment::uniform(), &AlgCConfig::default()).unwrap();
        assert_eq!(again, r);
    }

    #[test]
    fn explicit_power_class_flag() {
        let inst = spread(&[1.0, 2.0], 1000.0, Mode::Unidirectional);
        let r = algorithm_c(&inst, &[0, 1], &PowerAssignment::explicit(vec![5.0, 1.0]), &AlgCConfig::default())
            .unwrap();
        assert!(!r.power_class_ok);
        let r = algorithm_c(&inst, &[0, 1], &PowerAssignment::mean(), &AlgCConfig::default()).unwrap();
        assert!(r.power_class_ok);
    }

    #[test]
    fn weak_links_are_reported() {
        let inst = spread(&[1.0, 5.0], 1000.0, Mode::Unidirectional)
            .with_params(PhysicalParams::new(2.0, 1.0, 0.1).unwrap())
            .unwrap();
        // uniform P=1: beta N l^2 = 0.1 for l=1, 2.5 for l=5 (weak)
        let r = algorithm_c(&inst, &[0, 1], &PowerAssignment::uniform(), &AlgCConfig::default()).unwrap();
        assert_eq!(r.weak, vec![1]);
        assert_eq!(r.output, vec![0]);
    }

    #[test]
    fn equilength_examples() {
        let same = spread(&[1.0, 1.0, 1.0, 1.0], 3.0, Mode::Unidirectional);
        let p = PowerAssignment::uniform();
        let cfg = AlgCConfig::default();
        let a = algorithm_c(&same, &same.ids(), &p, &cfg).unwrap();
        let b = equilength_capacity(&same, &same.ids(), &p, &cfg).unwrap();
        assert_eq!(a.output, b.output);
        assert_eq!(length_classes(&same, &same.ids()).len(), 1);

        let mixed = spread(&[1.0, 100.0, 1.0, 100.0, 100.0], 50.0, Mode::Unidirectional);
        let short = algorithm_c(&mixed, &[0, 2], &p, &cfg).unwrap();
        let long = algorithm_c(&mixed, &[1, 3, 4], &p, &cfg).unwrap();
        let best = equilength_capacity(&mixed, &mixed.ids(), &p, &cfg).unwrap();
        assert_eq!(best.size(), short.size().max(long.size()));
        let expected = if long.size() > short.size() { long.output } else { short.output };
        assert_eq!(best.output, expected);
    }

    #[test]
    fn bidirectional_pair_far_apart() {
        let inst = spread(&[1.0, 1.0], 100.0, Mode::Bidirectional);
        let r = bidirectional_pc_capacity(&inst, &inst.ids(), &AlgCConfig::default()).unwrap();
        assert_eq!(r.output, vec![0, 1]);
        let one = spread(&[1.0], 100.0, Mode::Bidirectional);
        assert_eq!(bidirectional_pc_capacity(&one, &[0], &AlgCConfig::default()).unwrap().output, vec![0]);
        let uni = spread(&[1.0], 100.0, Mode::Unidirectional);
        assert!(bidirectional_pc_capacity(&uni, &[0], &AlgCConfig::default()).is_err());
    }

    #[test]
    fn output_is_feasible_and_meets_filter_bound() {
        let inst = spread(&[1.0, 2.0, 1.5, 3.0, 1.0, 2.5, 1.2, 1.7], 2.0, Mode::Unidirectional);
        for p in [PowerAssignment::uniform(), PowerAssignment::mean(), PowerAssignment::linear()] {
            let r = algorithm_c(&inst, &inst.ids(), &p, &AlgCConfig::default()).unwrap();
            assert!(is_feasible(&r.output, &p, &inst, SignalStrength::feasible()).unwrap().feasible);
            assert!(r.output.len() as f64 >= 0.5 * r.selected.len() as f64);
        }
    }

    #[test]
    fn gamma_validation() {
        assert!(AlgCConfig::new(0.0).is_err());
        assert!(AlgCConfig::new(1.0).is_err());
        assert_eq!(AlgCConfig::<f64>::default().gamma, 0.5);
    }
}
