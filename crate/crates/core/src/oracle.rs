//! Exhaustive ground truth for small instances.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::affectance::{AffectanceModel, SignalStrength};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::matrix::PowerCertificate;
use crate::power::PowerAssignment;
use crate::scalar::{within, Scalar};
use crate::spectral::pc_feasible_oracle;

/// Largest link count accepted by the subset searches.
pub const SUBSET_CAP: usize = 16;
/// Largest link count accepted by [`min_schedule`].
pub const SCHEDULE_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct OracleResult<T> {
    pub opt_size: usize,
    /// Lexicographically smallest maximum subset.
    pub witness: Vec<usize>,
    /// Power vector for `witness` in power-control searches.
    pub certificate: Option<PowerCertificate<T>>,
    /// Power and signal strength of fixed-power searches.
    pub power: Option<PowerAssignment<T>>,
    pub delta: Option<T>,
    /// Distinct subsets whose feasibility was evaluated.
    pub explored: usize,
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::CapExceeded { n, cap })
    } else {
        Ok(())
    }
}

/// Maximum-cardinality subset of `pool` accepted by `feasible`, which must
/// be hereditary. Sizes are tried from largest down; within a size,
/// combinations are generated in lexicographic order and partial sets that
/// fail are pruned, so the first hit is the lexicographically smallest.
fn search(pool: &[usize], mut feasible: impl FnMut(&[usize]) -> Result<bool>) -> Result<(Vec<usize>, usize)> {
    let mut memo: HashMap<u32, bool> = HashMap::new();
    let mut check = |set: &[usize], mask: u32| -> Result<bool> {
        if let Some(&ok) = memo.get(&mask) {
            return Ok(ok);
        }
        let ok = feasible(set)?;
        memo.insert(mask, ok);
        Ok(ok)
    };

    fn dfs(
        pool: &[usize],
        start: usize,
        k: usize,
        chosen: &mut Vec<usize>,
        mask: u32,
        check: &mut dyn FnMut(&[usize], u32) -> Result<bool>,
    ) -> Result<bool> {
        if chosen.len() == k {
            return Ok(true);
        }
        let need = k - chosen.len();
        for i in start..=pool.len() - need {
            chosen.push(pool[i]);
            let m = mask | (1 << i);
            if check(chosen, m)? && dfs(pool, i + 1, k, chosen, m, check)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }

    let mut chosen = Vec::new();
    for k in (1..=pool.len()).rev() {
        chosen.clear();
        if dfs(pool, 0, k, &mut chosen, 0, &mut check)? {
            return Ok((chosen, memo.len()));
        }
    }
    Ok((Vec::new(), memo.len()))
}

fn sorted_pool<T: Scalar>(inst: &Instance<T>, links: &[usize], cap: usize) -> Result<Vec<usize>> {
    inst.check_set(links)?;
    check_cap(links.len(), cap)?;
    let mut pool = links.to_vec();
    pool.sort_unstable();
    Ok(pool)
}

/// Maximum `delta`-signal subset of `links` under `power`.
pub fn opt_fixed<T: Scalar>(
    inst: &Instance<T>,
    links: &[usize],
    power: &PowerAssignment<T>,
    delta: SignalStrength<T>,
) -> Result<OracleResult<T>> {
    opt_fixed_capped(inst, links, power, delta, SUBSET_CAP)
}

pub fn opt_fixed_capped<T: Scalar>(
    inst: &Instance<T>,
    links: &[usize],
    power: &PowerAssignment<T>,
    delta: SignalStrength<T>,
    cap: usize,
) -> Result<OracleResult<T>> {
    let pool = sorted_pool(inst, links, cap.min(31))?;
    let model = AffectanceModel::new(inst, power)?;
    let (pool, _) = model.partition_weak(&pool);
    let budget = delta.budget();
    let (witness, explored) = search(&pool, |set| {
        Ok(set
            .iter()
            .all(|&v| within(model.in_sum_or_inf(v, set), budget)))
    })?;
    Ok(OracleResult {
        opt_size: witness.len(),
        witness,
        certificate: None,
        power: Some(power.clone()),
        delta: Some(delta.value()),
        explored,
    })
}

/// Maximum subset of `links` feasible under some power assignment, with
/// noise ignored. The witness carries a certifying power vector.
pub fn opt_pc<T: Scalar>(inst: &Instance<T>, links: &[usize]) -> Result<OracleResult<T>> {
    opt_pc_capped(inst, links, SUBSET_CAP)
}

pub fn opt_pc_capped<T: Scalar>(inst: &Instance<T>, links: &[usize], cap: usize) -> Result<OracleResult<T>> {
    let pool = sorted_pool(inst, links, cap.min(31))?;
    let (witness, explored) = search(&pool, |set| Ok(pc_feasible_oracle(set, inst)?.feasible))?;
    let certificate = pc_feasible_oracle(&witness, inst)?.certificate;
    Ok(OracleResult {
        opt_size: witness.len(),
        witness,
        certificate,
        power: None,
        delta: None,
        explored,
    })
}

/// Fewest feasible slots covering `links` under `power`, weak links
/// excluded. Exact, by dynamic programming over subsets.
pub fn min_schedule<T: Scalar>(inst: &Instance<T>, links: &[usize], power: &PowerAssignment<T>) -> Result<usize> {
    let pool = sorted_pool(inst, links, SCHEDULE_CAP)?;
    let model = AffectanceModel::new(inst, power)?;
    let (pool, _) = model.partition_weak(&pool);
    let n = pool.len();
    let full = (1usize << n) - 1;
    let members = |mask: usize| -> Vec<usize> { (0..n).filter(|i| mask >> i & 1 == 1).map(|i| pool[i]).collect() };
    let feasible: Vec<bool> = (0..=full)
        .map(|mask| {
            let set = members(mask);
            set.iter().all(|&v| within(model.in_sum_or_inf(v, &set), T::one()))
        })
        .collect();
    let mut best = vec![usize::MAX; full + 1];
    best[0] = 0;
    for mask in 1..=full {
        // the slot holding the lowest remaining link ranges over the
        // feasible subsets of `mask` that contain it
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut sub = rest;
        loop {
            let slot = sub | low;
            if feasible[slot] && best[mask ^ slot] != usize::MAX {
                best[mask] = best[mask].min(best[mask ^ slot] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    Ok(best[full])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affectance::is_feasible;
    use crate::instance::{Mode, PhysicalParams};
    use crate::metric::MetricSpace;

    fn blocking(n: usize, dist: f64) -> Instance<f64> {
        let pts = 2 * n;
        let rows = (0..pts)
            .map(|i| (0..pts).map(|j| if i == j { 0.0 } else if i / 2 == j / 2 { 1.0 } else { dist }).collect())
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

    #[test]
    fn blocking_links() {
        // all cross distances 1: pairwise affectance 1, any pair sums to 1
        let inst = blocking(3, 1.0);
        let p = PowerAssignment::uniform();
        let one = SignalStrength::feasible();
        // a pair is feasible at exactly 1, the triple is not
        assert_eq!(opt_fixed(&inst, &inst.ids(), &p, one).unwrap().opt_size, 2);
        assert_eq!(opt_fixed(&inst, &inst.ids(), &p, SignalStrength::new(1.5).unwrap()).unwrap().opt_size, 1);
        // cross distance 0.9 gives affectance above 1: truly blocking
        let tight = blocking(3, 0.9);
        let r = opt_fixed(&tight, &tight.ids(), &p, one).unwrap();
        assert_eq!((r.opt_size, r.witness.clone()), (1, vec![0]));
        assert_eq!(min_schedule(&tight, &tight.ids(), &p).unwrap(), 3);
        assert_eq!(opt_pc(&tight, &tight.ids()).unwrap().opt_size, 1);
    }

    #[test]
    fn compatible_links() {
        let inst = blocking(4, 10.0);
        let p = PowerAssignment::uniform();
        let r = opt_fixed(&inst, &inst.ids(), &p, SignalStrength::feasible()).unwrap();
        assert_eq!(r.witness, vec![0, 1, 2, 3]);
        assert_eq!(min_schedule(&inst, &inst.ids(), &p).unwrap(), 1);
        let pc = opt_pc(&inst, &inst.ids()).unwrap();
        assert_eq!(pc.opt_size, 4);
        assert_eq!(pc.certificate.unwrap().len(), 4);
        assert_eq!(opt_fixed(&inst, &[2], &p, SignalStrength::feasible()).unwrap().opt_size, 1);
    }

    #[test]
    fn witness_is_lexicographically_smallest() {
        // links 0 and 1 clash; 2 is free: maximum sets {0,2} and {1,2}
        let mut rows = vec![vec![5.0; 6]; 6];
        for i in 0..6 {
            rows[i][i] = 0.0;
        }
        for (a, b) in [(0, 1), (2, 3), (4, 5)] {
            rows[a][b] = 1.0;
            rows[b][a] = 1.0;
        }
        for (a, b) in [(0, 3), (2, 1), (0, 2), (1, 3)] {
            rows[a][b] = 0.5;
            rows[b][a] = 0.5;
        }
        let inst = Instance::new(
            MetricSpace::explicit(rows).unwrap(),
            &[(0, 1), (2, 3), (4, 5)],
            PhysicalParams::new(2.0, 1.0, 0.0).unwrap(),
            Mode::Unidirectional,
        )
        .unwrap();
        let p = PowerAssignment::uniform();
        let r = opt_fixed(&inst, &[2, 1, 0], &p, SignalStrength::feasible()).unwrap();
        assert_eq!(r.witness, vec![0, 2]);
        assert!(is_feasible(&r.witness, &p, &inst, SignalStrength::feasible()).unwrap().feasible);
    }

    #[test]
    fn caps_are_enforced() {
        let inst = blocking(11, 10.0);
        let p = PowerAssignment::uniform();
        assert!(matches!(
            min_schedule(&inst, &inst.ids(), &p),
            Err(Error::CapExceeded { n: 11, cap: 10 })
        ));
        let big = blocking(17, 10.0);
        assert!(matches!(
            opt_fixed(&big, &big.ids(), &p, SignalStrength::feasible()),
            Err(Error::CapExceeded { n: 17, cap: 16 })
        ));
        assert!(opt_pc(&big, &big.ids()).is_err());
    }

    #[test]
    fn empty_and_weak() {
        let inst = blocking(2, 10.0).with_params(PhysicalParams::new(2.0, 1.0, 5.0).unwrap()).unwrap();
        let p = PowerAssignment::uniform();
        let r = opt_fixed(&inst, &inst.ids(), &p, SignalStrength::feasible()).unwrap();
        assert_eq!(r.opt_size, 0);
        assert_eq!(min_schedule(&inst, &inst.ids(), &p).unwrap(), 0);
        assert_eq!(opt_fixed(&inst, &[], &p, SignalStrength::feasible()).unwrap().opt_size, 0);
    }
}
