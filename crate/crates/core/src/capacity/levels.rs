use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{assemble, final_filter, greedy, AlgCConfig, CapacityResult};
use crate::affectance::AffectanceModel;
use crate::error::{invalid, Result};
use crate::instance::{Instance, Mode};
use crate::power::{scale_power_for_noise, PowerAssignment};
use crate::scalar::Scalar;

/// Geometric bucketing of links by length: level `k` holds lengths in
/// `[l_min * D^k, l_min * D^(k+1))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct LevelPartition<T> {
    pub width: T,
    pub levels: BTreeMap<usize, Vec<usize>>,
    /// Union of the odd levels.
    pub odd: Vec<usize>,
    /// Union of the even levels.
    pub even: Vec<usize>,
}

/// Index `k` with `base * ratio^k <= x < base * ratio^(k+1)`, for `x >= base`.
/// The logarithm gives a first guess; the loops correct rounding at the
/// boundaries.
fn bucket<T: Scalar>(x: T, base: T, ratio: T) -> usize {
    let guess = ((x / base).ln() / ratio.ln()).floor();
    let mut k = guess.to_i32().unwrap_or(0).max(0);
    while k > 0 && x < base * ratio.powi(k) {
        k -= 1;
    }
    while x >= base * ratio.powi(k + 1) {
        k += 1;
    }
    k as usize
}

fn bucketize<T: Scalar>(ids: &[usize], length: impl Fn(usize) -> T, ratio: T) -> BTreeMap<usize, Vec<usize>> {
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let Some(min) = ids.iter().map(|&i| length(i)).reduce(T::min) else {
        return out;
    };
    let mut sorted = ids.to_vec();
    sorted.sort_by(|&a, &b| length(a).partial_cmp(&length(b)).unwrap().then(a.cmp(&b)));
    for v in sorted {
        out.entry(bucket(length(v), min, ratio)).or_default().push(v);
    }
    out
}

impl<T: Scalar> LevelPartition<T> {
    /// Partition of indices `0..lengths.len()` by the given lengths.
    pub fn from_lengths(lengths: &[T], alpha: T) -> Result<Self> {
        if lengths.is_empty() {
            return Err(invalid("level partition of an empty link set"));
        }
        if lengths.iter().any(|&l| !(l.is_finite() && l > T::zero())) {
            return Err(invalid("link lengths must be positive and finite"));
        }
        let n = T::from_usize(lengths.len()).unwrap();
        let width = T::lit(8.0) * n.powf(T::lit(2.0) / alpha);
        let ids: Vec<usize> = (0..lengths.len()).collect();
        let levels = bucketize(&ids, |i| lengths[i], width);
        let mut odd = Vec::new();
        let mut even = Vec::new();
        for (k, members) in &levels {
            if k % 2 == 0 { &mut even } else { &mut odd }.extend(members);
        }
        Ok(LevelPartition { width, levels, odd, even })
    }

    pub fn level_of(&self, id: usize) -> Option<usize> {
        self.levels.iter().find(|(_, m)| m.contains(&id)).map(|(&k, _)| k)
    }

    fn relabel(mut self, ids: &[usize]) -> Self {
        let map = |v: &mut Vec<usize>| v.iter_mut().for_each(|x| *x = ids[*x]);
        self.levels.values_mut().for_each(map);
        map(&mut self.odd);
        map(&mut self.even);
        self
    }
}

/// Level partition of `ids` with width `D = 8 n^(2/alpha)`, `n = |ids|`.
pub fn build_level_partition<T: Scalar>(inst: &Instance<T>, ids: &[usize]) -> Result<LevelPartition<T>> {
    inst.check_set(ids)?;
    let lengths: Vec<T> = ids.iter().map(|&i| inst.length(i)).collect();
    Ok(LevelPartition::from_lengths(&lengths, inst.alpha())?.relabel(ids))
}

/// Splits `ids` into classes whose lengths lie within a factor 2 of each
/// other, measured from the shortest link. Classes come shortest first,
/// each sorted by length then id.
pub fn length_classes<T: Scalar>(inst: &Instance<T>, ids: &[usize]) -> Vec<Vec<usize>> {
    bucketize(ids, |i| inst.length(i), T::lit(2.0)).into_values().collect()
}

/// Power control for unidirectional instances through the mean assignment.
///
/// Each parity class of the level partition is processed on its own. Inside
/// a level every factor-2 group is built greedily; a candidate must pass the
/// `gamma` threshold within its group and have mean-power affectance below
/// `1/(2n)` in both directions with every link taken from earlier levels.
/// The largest group per level is kept (lowest index on ties). The better of
/// the two classes is returned, the even one on ties.
pub fn algorithm_pc<T: Scalar>(inst: &Instance<T>, links: &[usize], cfg: &AlgCConfig<T>) -> Result<CapacityResult<T>> {
    if inst.mode() != Mode::Unidirectional {
        return Err(invalid("algorithm_pc needs a unidirectional instance"));
    }
    inst.check_set(links)?;
    let power = scale_power_for_noise(&PowerAssignment::mean(), inst)?;
    let model = AffectanceModel::new(inst, &power)?;
    let (usable, weak) = model.partition_weak(links);
    if usable.is_empty() {
        return Ok(assemble("algorithm_pc", &model, Vec::new(), Vec::new(), weak, cfg.gamma, true));
    }
    let part = build_level_partition(inst, &usable)?;
    let cross = T::one() / (T::lit(2.0) * T::from_usize(usable.len()).unwrap());

    let run_class = |parity: usize| {
        let mut s: Vec<usize> = Vec::new();
        for (_, level) in part.levels.iter().filter(|(k, _)| *k % 2 == parity) {
            let prev = s.clone();
            let mut best: Vec<usize> = Vec::new();
            for group in length_classes(inst, level) {
                let sp = greedy(&model, &group, cfg.gamma, |v| {
                    prev.iter().all(|&w| {
                        model.affectance_or_inf(v, w).max(model.affectance_or_inf(w, v)) < cross
                    })
                });
                if sp.len() > best.len() {
                    best = sp;
                }
            }
            s.extend(best);
        }
        let x = final_filter(&model, &s);
        (s, x)
    };
    let (s_even, x_even) = run_class(0);
    let (s_odd, x_odd) = run_class(1);
    let (s, x) = if x_odd.len() > x_even.len() { (s_odd, x_odd) } else { (s_even, x_even) };
    Ok(assemble("algorithm_pc", &model, s, x, weak, cfg.gamma, true))
}

#[cfg(test)]
mod tests {
    use super::super::equilength_capacity;
    use super::super::tests::spread;
    use super::*;
    use crate::affectance::{is_feasible, SignalStrength};
    use proptest::prelude::*;

    #[test]
    fn single_level_when_lengths_close() {
        let p = LevelPartition::from_lengths(&[1.0, 3.0, 20.0], 2.0).unwrap();
        // D = 8 * 3 = 24
        assert_eq!(p.width, 24.0);
        assert_eq!(p.levels.len(), 1);
        assert_eq!(p.levels[&0], vec![0, 1, 2]);
        assert_eq!(p.even, vec![0, 1, 2]);
        assert!(p.odd.is_empty());
    }

    #[test]
    fn powers_of_width_land_on_consecutive_levels() {
        let d = 24.0f64;
        let p = LevelPartition::from_lengths(&[1.0, d, d * d], 2.0).unwrap();
        assert_eq!(p.width, d);
        assert_eq!(p.levels.keys().copied().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(p.level_of(1), Some(1));
        assert_eq!(p.even, vec![0, 2]);
        assert_eq!(p.odd, vec![1]);
        // just below a boundary stays on the lower level
        let q = LevelPartition::from_lengths(&[1.0, d * (1.0 - 1e-12), d * d], 2.0).unwrap();
        assert_eq!(q.level_of(1), Some(0));
    }

    #[test]
    fn empty_partition_is_rejected() {
        assert!(LevelPartition::<f64>::from_lengths(&[], 2.0).is_err());
    }

    #[test]
    fn length_classes_split_at_factor_two() {
        let inst = spread(&[1.0, 1.9, 2.0, 4.5, 1.0], 100.0, Mode::Unidirectional);
        assert_eq!(length_classes(&inst, &inst.ids()), vec![vec![0, 4, 1], vec![2], vec![3]]);
    }

    #[test]
    fn pc_singleton_and_mode() {
        let inst = spread(&[2.0], 10.0, Mode::Unidirectional);
        assert_eq!(algorithm_pc(&inst, &[0], &AlgCConfig::default()).unwrap().output, vec![0]);
        let bi = spread(&[2.0], 10.0, Mode::Bidirectional);
        assert!(algorithm_pc(&bi, &[0], &AlgCConfig::default()).is_err());
    }

    #[test]
    fn pc_single_level_matches_equilength_under_mean() {
        let inst = spread(&[1.0, 1.5, 3.0, 2.2, 1.1, 5.0, 1.3], 2.5, Mode::Unidirectional);
        let cfg = AlgCConfig::default();
        let pc = algorithm_pc(&inst, &inst.ids(), &cfg).unwrap();
        let m = scale_power_for_noise(&PowerAssignment::mean(), &inst).unwrap();
        let eq = equilength_capacity(&inst, &inst.ids(), &m, &cfg).unwrap();
        assert_eq!(build_level_partition(&inst, &inst.ids()).unwrap().levels.len(), 1);
        assert_eq!(pc.output, eq.output);
    }

    proptest! {
        #[test]
        fn partition_covers_disjointly(
            lengths in prop::collection::vec(0.01f64..1e6, 1..30),
            alpha in 1.0f64..6.0,
        ) {
            let p = LevelPartition::from_lengths(&lengths, alpha).unwrap();
            let min = lengths.iter().copied().fold(f64::INFINITY, f64::min);
            let mut seen = vec![0usize; lengths.len()];
            for (&k, members) in &p.levels {
                for &v in members {
                    seen[v] += 1;
                    prop_assert!(lengths[v] >= min * p.width.powi(k as i32));
                    prop_assert!(lengths[v] < min * p.width.powi(k as i32 + 1));
                }
            }
            prop_assert!(seen.iter().all(|&c| c == 1));
            let mut both: Vec<usize> = p.odd.iter().chain(&p.even).copied().collect();
            both.sort();
            prop_assert_eq!(both, (0..lengths.len()).collect::<Vec<_>>());
        }

        #[test]
        fn pc_output_feasible_under_mean(
            lengths in prop::collection::vec(0.1f64..500.0, 1..10),
            gap in 0.5f64..30.0,
        ) {
            let inst = spread(&lengths, gap, Mode::Unidirectional);
            let r = algorithm_pc(&inst, &inst.ids(), &AlgCConfig::default()).unwrap();
            prop_assert!(!r.output.is_empty());
            prop_assert!(is_feasible(&r.output, &r.power, &inst, SignalStrength::feasible()).unwrap().feasible);
        }
    }
}
