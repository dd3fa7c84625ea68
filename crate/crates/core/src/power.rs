//! Transmit power assignments.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::instance::Instance;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum PowerKind<T> {
    /// Same power for every link.
    Uniform,
    /// `P_v = l_v^(alpha/2)`, the square-root assignment.
    Mean,
    /// `P_v = l_v^alpha`.
    Linear,
    /// One power per link id.
    Explicit(Vec<T>),
}

/// A power family together with a global multiplier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    bound = "T: Scalar",
    try_from = "crate::io::PowerDoc<T>",
    into = "crate::io::PowerDoc<T>"
)]
pub struct PowerAssignment<T> {
    pub kind: PowerKind<T>,
    pub scale: T,
}

impl<T: Scalar> PowerAssignment<T> {
    pub fn uniform() -> Self {
        Self::of(PowerKind::Uniform)
    }

    pub fn mean() -> Self {
        Self::of(PowerKind::Mean)
    }

    pub fn linear() -> Self {
        Self::of(PowerKind::Linear)
    }

    pub fn explicit(powers: Vec<T>) -> Self {
        Self::of(PowerKind::Explicit(powers))
    }

    fn of(kind: PowerKind<T>) -> Self {
        PowerAssignment { kind, scale: T::one() }
    }

    pub fn with_scale(mut self, scale: T) -> Self {
        self.scale = scale;
        self
    }

    /// Power depends only on the link's own length.
    pub fn is_oblivious(&self) -> bool {
        !matches!(self.kind, PowerKind::Explicit(_))
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            PowerKind::Uniform => "uniform",
            PowerKind::Mean => "mean",
            PowerKind::Linear => "linear",
            PowerKind::Explicit(_) => "explicit",
        }
    }

    /// Unscaled power of one link.
    fn base(&self, inst: &Instance<T>, id: usize) -> T {
        let l = inst.length(id);
        match &self.kind {
            PowerKind::Uniform => T::one(),
            PowerKind::Mean => l.powf(inst.alpha() / T::lit(2.0)),
            PowerKind::Linear => l.powf(inst.alpha()),
            PowerKind::Explicit(p) => p[id],
        }
    }

    /// Powers for every link of `inst`, indexed by link id.
    pub fn resolve(&self, inst: &Instance<T>) -> Result<Vec<T>> {
        if !(self.scale.is_finite() && self.scale > T::zero()) {
            return Err(invalid(format!("power scale must be positive, got {}", self.scale)));
        }
        if let PowerKind::Explicit(p) = &self.kind {
            if p.len() != inst.len() {
                return Err(invalid(format!(
                    "explicit power vector has {} entries for {} links",
                    p.len(),
                    inst.len()
                )));
            }
        }
        (0..inst.len())
            .map(|id| {
                let p = self.base(inst, id) * self.scale;
                if p.is_finite() && p > T::zero() {
                    Ok(p)
                } else {
                    Err(invalid(format!("link {id} resolves to power {p}")))
                }
            })
            .collect()
    }
}

/// First pair `(v, w)` among `ids` with `l_v >= l_w` that violates
/// length-monotonicity (`P_v >= P_w`) or sub-linearity
/// (`P_v / l_v^alpha <= P_w / l_w^alpha`), if any.
pub fn monotone_sublinear_violation<T: Scalar>(
    powers: &[T],
    inst: &Instance<T>,
    ids: &[usize],
) -> Option<(usize, usize)> {
    let a = inst.alpha();
    for &v in ids {
        for &w in ids {
            if v == w || inst.length(v) < inst.length(w) {
                continue;
            }
            let monotone = crate::scalar::within(powers[w], powers[v]);
            let received_v = powers[v] / inst.length(v).powf(a);
            let received_w = powers[w] / inst.length(w).powf(a);
            let sublinear = crate::scalar::within(received_v, received_w);
            if !(monotone && sublinear) {
                return Some((v, w));
            }
        }
    }
    None
}

/// Scales an assignment so that `beta * N * l_v^alpha / P_v <= 1/2` for
/// every link, which caps every noise factor `c_v` at `2 beta`. The scale is
/// the smallest one meeting the condition; with zero noise it is 1.
pub fn scale_power_for_noise<T: Scalar>(
    power: &PowerAssignment<T>,
    inst: &Instance<T>,
) -> Result<PowerAssignment<T>> {
    let base = power.clone().with_scale(T::one());
    if inst.noise() == T::zero() || inst.is_empty() {
        return Ok(base);
    }
    let powers = base.resolve(inst)?;
    let two = T::lit(2.0);
    let scale = powers
        .iter()
        .zip(inst.links())
        .map(|(&p, l)| two * inst.beta() * inst.noise() * l.length.powf(inst.alpha()) / p)
        .fold(T::zero(), T::max);
    Ok(base.with_scale(scale))
}
