//! Power-control feasibility via the Perron root.
//!
//! With zero noise, a set is feasible under *some* power assignment iff a
//! positive `p` with `A p <= p` exists, where `a_uv = beta (l_u / d_vu)^alpha`
//! is the uniform-power affectance matrix. The decision always rests on an
//! explicitly checked certificate (feasible) or on a Collatz-Wielandt lower
//! bound above 1 (infeasible); the eigenvalue estimate is only reported.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::matrix::{certificate_holds, PowerCertificate, SquareMatrix};
use crate::scalar::Scalar;

pub const PERRON_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct PerronEstimate<T> {
    /// Collatz-Wielandt bounds on the spectral radius.
    pub rho_lower: T,
    pub rho_upper: T,
    /// Positive iterate, max-normalized.
    pub vector: Vec<T>,
    pub iterations: usize,
    pub converged: bool,
}

impl<T: Scalar> PerronEstimate<T> {
    pub fn rho(&self) -> T {
        self.rho_upper
    }
}

/// Max and min of `(A x)_i / x_i`; the min is taken over the support of `x`
/// after dropping entries below `1e-12 * max(x)`, which keeps it a valid lower
/// bound for reducible matrices.
fn ratio_bounds<T: Scalar>(a: &SquareMatrix<T>, x: &[T], ax: &[T]) -> (T, T) {
    let upper = ax
        .iter()
        .zip(x)
        .map(|(&y, &xi)| y / xi)
        .fold(T::zero(), T::max);
    let cut = T::lit(1e-12) * x.iter().copied().fold(T::zero(), T::max);
    let trimmed: Vec<T> = x.iter().map(|&v| if v >= cut { v } else { T::zero() }).collect();
    let at = a.mul_vec(&trimmed);
    let lower = at
        .iter()
        .zip(&trimmed)
        .filter(|(_, &t)| t > T::zero())
        .map(|(&y, &t)| y / t)
        .fold(T::infinity(), T::min);
    (upper, if lower.is_finite() { lower } else { T::zero() })
}

/// Power iteration on `A + I` from the all-ones vector. Stops once the
/// Collatz-Wielandt bounds are within `tol` (relative), or after `budget`
/// iterations, or as soon as `stop` accepts the current bounds.
pub fn perron_iterate<T: Scalar>(
    a: &SquareMatrix<T>,
    tol: T,
    budget: usize,
    mut stop: impl FnMut(T, T, &[T]) -> bool,
) -> PerronEstimate<T> {
    let n = a.n();
    let mut x = vec![T::one(); n];
    if n == 0 {
        return PerronEstimate {
            rho_lower: T::zero(),
            rho_upper: T::zero(),
            vector: x,
            iterations: 0,
            converged: true,
        };
    }
    let mut last = (T::zero(), T::infinity());
    for it in 0..=budget {
        let ax = a.mul_vec(&x);
        let (upper, lower) = ratio_bounds(a, &x, &ax);
        last = (lower, upper);
        let converged = upper - lower <= tol * upper.max(T::one());
        if converged || stop(lower, upper, &x) || it == budget {
            return PerronEstimate {
                rho_lower: lower,
                rho_upper: upper,
                vector: x,
                iterations: it,
                converged,
            };
        }
        // shift by the identity to avoid periodic oscillation
        let norm = ax
            .iter()
            .zip(&x)
            .map(|(&y, &xi)| y + xi)
            .fold(T::zero(), T::max);
        for (xi, &y) in x.iter_mut().zip(&ax) {
            *xi = (*xi + y) / norm;
        }
    }
    PerronEstimate {
        rho_lower: last.0,
        rho_upper: last.1,
        vector: x,
        iterations: budget,
        converged: false,
    }
}

/// Perron root estimate with the default tolerance and budget.
pub fn perron_root<T: Scalar>(a: &SquareMatrix<T>) -> PerronEstimate<T> {
    perron_iterate(a, T::spectral_tol(), PERRON_BUDGET, |_, _, _| false)
}

/// Zero-noise, uniform-power affectance matrix of `set`:
/// `a_uv = beta (l_u / d_vu)^alpha`, `+inf` for coincident endpoints.
pub fn zero_noise_matrix<T: Scalar>(set: &[usize], inst: &Instance<T>) -> Result<SquareMatrix<T>> {
    inst.check_set(set)?;
    Ok(SquareMatrix::from_fn(set.len(), |i, j| {
        if i == j {
            return T::zero();
        }
        let (u, v) = (set[i], set[j]);
        let d = inst.link_distance_unchecked(v, u);
        if d == T::zero() {
            T::infinity()
        } else {
            inst.beta() * (inst.length(u) / d).powf(inst.alpha())
        }
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcFeasibility<T> {
    pub feasible: bool,
    /// Upper estimate of the spectral radius.
    pub rho: T,
    pub certificate: Option<PowerCertificate<T>>,
    pub iterations: usize,
}

/// Decides whether a positive `p` with `A p <= p` exists.
pub fn pc_feasible_matrix<T: Scalar>(a: &SquareMatrix<T>) -> Result<PcFeasibility<T>> {
    let n = a.n();
    if n == 0 {
        return Ok(PcFeasibility {
            feasible: true,
            rho: T::zero(),
            certificate: Some(PowerCertificate::new(Vec::new())?),
            iterations: 0,
        });
    }
    if (0..n).any(|i| (0..n).any(|j| !a.get(i, j).is_finite())) {
        return Ok(PcFeasibility {
            feasible: false,
            rho: T::infinity(),
            certificate: None,
            iterations: 0,
        });
    }
    let one = T::one();
    let mut witness = false;
    let est = perron_iterate(a, T::spectral_tol(), PERRON_BUDGET, |lower, _, x| {
        witness = certificate_holds(a, x, one).unwrap_or(false);
        witness || lower > one * (one + T::feasibility_tol())
    });
    if witness || certificate_holds(a, &est.vector, one)? {
        return Ok(PcFeasibility {
            feasible: true,
            rho: est.rho_upper,
            certificate: Some(PowerCertificate::new(est.vector)?),
            iterations: est.iterations,
        });
    }
    if est.rho_lower > one || est.converged {
        return Ok(PcFeasibility {
            feasible: false,
            rho: est.rho_upper,
            certificate: None,
            iterations: est.iterations,
        });
    }
    // Budget exhausted without a decision: try p = (I - A)^-1 1, which is
    // positive with A p = p - 1 whenever rho(A) < 1.
    if let Some(p) = neumann_certificate(a) {
        if certificate_holds(a, &p, one)? {
            return Ok(PcFeasibility {
                feasible: true,
                rho: est.rho_upper,
                certificate: Some(PowerCertificate::new(p)?),
                iterations: est.iterations,
            });
        }
    }
    Err(Error::OracleInconclusive {
        iterations: est.iterations,
    })
}

/// Solves `(I - A) p = 1` by Gaussian elimination with partial pivoting;
/// `None` unless the solution is strictly positive.
pub fn neumann_certificate<T: Scalar>(a: &SquareMatrix<T>) -> Option<Vec<T>> {
    let n = a.n();
    let mut m: Vec<Vec<T>> = (0..n)
        .map(|i| {
            let mut row: Vec<T> = (0..n)
                .map(|j| if i == j { T::one() - a.get(i, j) } else { -a.get(i, j) })
                .collect();
            row.push(T::one());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].abs().partial_cmp(&m[y][col].abs()).unwrap())?;
        if m[piv][col].abs() <= T::epsilon() {
            return None;
        }
        m.swap(col, piv);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f != T::zero() {
                for c in col..=n {
                    let v = m[col][c];
                    m[r][c] = m[r][c] - f * v;
                }
            }
        }
    }
    let mut p = vec![T::zero(); n];
    for r in (0..n).rev() {
        let s: T = (r + 1..n).map(|c| m[r][c] * p[c]).sum();
        p[r] = (m[r][n] - s) / m[r][r];
    }
    p.iter().all(|&x| x.is_finite() && x > T::zero()).then_some(p)
}

/// Whether `set` is feasible under some power assignment (noise ignored).
pub fn pc_feasible_oracle<T: Scalar>(set: &[usize], inst: &Instance<T>) -> Result<PcFeasibility<T>> {
    pc_feasible_matrix(&zero_noise_matrix(set, inst)?)
}
