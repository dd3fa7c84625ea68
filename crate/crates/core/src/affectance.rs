//! Affectance and SINR feasibility.
//!
//! The affectance of link `w` on link `v` under power `P` is
//! `c_v * (P_w / P_v) * (l_v / d_wv)^alpha` with the noise factor
//! `c_v = beta / (1 - beta * N * l_v^alpha / P_v)`. A set is feasible iff the
//! incoming affectance of each member is at most 1, and a `delta`-signal set
//! iff it is at most `1 / delta`.

use crate::error::{invalid, Error, Result};
use crate::instance::Instance;
use crate::power::PowerAssignment;
use crate::scalar::{within, Scalar};

/// Signal-strength requirement `delta >= 1` (1 is plain feasibility).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SignalStrength<T>(T);

impl<T: Scalar> SignalStrength<T> {
    pub fn new(delta: T) -> Result<Self> {
        if delta.is_finite() && delta >= T::one() {
            Ok(SignalStrength(delta))
        } else {
            Err(invalid(format!("signal strength must be at least 1, got {delta}")))
        }
    }

    pub fn feasible() -> Self {
        SignalStrength(T::one())
    }

    pub fn value(self) -> T {
        self.0
    }

    /// Largest admissible incoming affectance, `1 / delta`.
    pub fn budget(self) -> T {
        self.0.recip()
    }
}

/// Why a set failed a feasibility check without a finite affectance sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    WeakLink(usize),
    DegenerateDistance { from: usize, to: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport<T> {
    pub feasible: bool,
    /// Link with the largest incoming affectance and that affectance.
    pub worst: Option<(usize, T)>,
    pub violation: Option<Violation>,
}

/// Affectances of one instance under one power assignment, with resolved
/// powers and noise factors cached.
#[derive(Debug, Clone)]
pub struct AffectanceModel<'a, T> {
    inst: &'a Instance<T>,
    power: PowerAssignment<T>,
    powers: Vec<T>,
    /// `None` marks a weak link.
    factors: Vec<Option<T>>,
}

impl<'a, T: Scalar> AffectanceModel<'a, T> {
    pub fn new(inst: &'a Instance<T>, power: &PowerAssignment<T>) -> Result<Self> {
        let powers = power.resolve(inst)?;
        let factors = inst
            .links()
            .iter()
            .zip(&powers)
            .map(|(l, &p)| {
                let drain = inst.beta() * inst.noise() * l.length.powf(inst.alpha()) / p;
                if drain < T::one() {
                    Some(inst.beta() / (T::one() - drain))
                } else {
                    None
                }
            })
            .collect();
        Ok(AffectanceModel {
            inst,
            power: power.clone(),
            powers,
            factors,
        })
    }

    pub fn instance(&self) -> &'a Instance<T> {
        self.inst
    }

    pub fn power(&self) -> &PowerAssignment<T> {
        &self.power
    }

    pub fn powers(&self) -> &[T] {
        &self.powers
    }

    /// `c_v`, or a weak-link error.
    pub fn noise_factor(&self, v: usize) -> Result<T> {
        self.inst.link(v)?;
        self.factors[v].ok_or(Error::WeakLink { link: v })
    }

    pub fn is_weak(&self, v: usize) -> bool {
        self.factors[v].is_none()
    }

    /// Splits `ids` into (usable, weak), preserving order.
    pub fn partition_weak(&self, ids: &[usize]) -> (Vec<usize>, Vec<usize>) {
        ids.iter().partition(|&&v| !self.is_weak(v))
    }

    /// `a_w(v)`: affectance of `w` on `v`; zero when `w == v`.
    pub fn affectance(&self, w: usize, v: usize) -> Result<T> {
        self.inst.link(w)?;
        let c = self.noise_factor(v)?;
        if w == v {
            return Ok(T::zero());
        }
        let d = self.inst.link_distance_unchecked(w, v);
        if d == T::zero() {
            return Err(Error::DegenerateDistance { from: w, to: v });
        }
        Ok(self.raw(c, w, v, d))
    }

    #[inline]
    fn raw(&self, c: T, w: usize, v: usize, d: T) -> T {
        c * (self.powers[w] / self.powers[v]) * (self.inst.length(v) / d).powf(self.inst.alpha())
    }

    /// Affectance with weak receivers and coincident endpoints mapped to
    /// `+inf`; used by the selection loops, which must simply reject them.
    pub(crate) fn affectance_or_inf(&self, w: usize, v: usize) -> T {
        if w == v {
            return T::zero();
        }
        let Some(c) = self.factors[v] else {
            return T::infinity();
        };
        let d = self.inst.link_distance_unchecked(w, v);
        if d == T::zero() {
            return T::infinity();
        }
        self.raw(c, w, v, d)
    }

    /// `a_S(v)`: total affectance of `set` on `v`.
    pub fn in_sum(&self, v: usize, set: &[usize]) -> Result<T> {
        set.iter().try_fold(T::zero(), |acc, &w| Ok(acc + self.affectance(w, v)?))
    }

    /// `a_v(S)`: total affectance of `v` on the members of `set`.
    pub fn out_sum(&self, v: usize, set: &[usize]) -> Result<T> {
        set.iter().try_fold(T::zero(), |acc, &w| Ok(acc + self.affectance(v, w)?))
    }

    pub(crate) fn in_sum_or_inf(&self, v: usize, set: &[usize]) -> T {
        set.iter().map(|&w| self.affectance_or_inf(w, v)).sum()
    }

    pub(crate) fn out_sum_or_inf(&self, v: usize, set: &[usize]) -> T {
        set.iter().map(|&w| self.affectance_or_inf(v, w)).sum()
    }

    /// Checks that every member of `set` has incoming affectance at most
    /// `1/delta` (with relative slack). Weak links and coincident endpoints
    /// make the set infeasible with a reason instead of an error.
    pub fn feasibility(&self, set: &[usize], delta: SignalStrength<T>) -> Result<FeasibilityReport<T>> {
        self.inst.check_set(set)?;
        let mut worst: Option<(usize, T)> = None;
        for &v in set {
            let sum = match self.in_sum(v, set) {
                Ok(s) => s,
                Err(Error::WeakLink { link }) => {
                    return Ok(FeasibilityReport {
                        feasible: false,
                        worst: Some((link, T::infinity())),
                        violation: Some(Violation::WeakLink(link)),
                    })
                }
                Err(Error::DegenerateDistance { from, to }) => {
                    return Ok(FeasibilityReport {
                        feasible: false,
                        worst: Some((to, T::infinity())),
                        violation: Some(Violation::DegenerateDistance { from, to }),
                    })
                }
                Err(e) => return Err(e),
            };
            if worst.is_none_or(|(_, s)| sum > s) {
                worst = Some((v, sum));
            }
        }
        let feasible = worst.is_none_or(|(_, s)| within(s, delta.budget()));
        Ok(FeasibilityReport {
            feasible,
            worst,
            violation: None,
        })
    }
}

/// `a_w(v)` under `power`.
pub fn affectance<T: Scalar>(w: usize, v: usize, power: &PowerAssignment<T>, inst: &Instance<T>) -> Result<T> {
    AffectanceModel::new(inst, power)?.affectance(w, v)
}

/// `a_S(v)`.
pub fn in_affectance_sum<T: Scalar>(
    v: usize,
    set: &[usize],
    power: &PowerAssignment<T>,
    inst: &Instance<T>,
) -> Result<T> {
    AffectanceModel::new(inst, power)?.in_sum(v, set)
}

/// `a_v(S)`.
pub fn out_affectance_sum<T: Scalar>(
    v: usize,
    set: &[usize],
    power: &PowerAssignment<T>,
    inst: &Instance<T>,
) -> Result<T> {
    AffectanceModel::new(inst, power)?.out_sum(v, set)
}

pub fn is_feasible<T: Scalar>(
    set: &[usize],
    power: &PowerAssignment<T>,
    inst: &Instance<T>,
    delta: SignalStrength<T>,
) -> Result<FeasibilityReport<T>> {
    AffectanceModel::new(inst, power)?.feasibility(set, delta)
}
