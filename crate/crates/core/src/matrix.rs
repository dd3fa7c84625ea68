//! Affectance matrices and the sum bounds they satisfy.

use serde::{Deserialize, Serialize};

use crate::affectance::AffectanceModel;
use crate::error::{invalid, Result};
use crate::instance::Instance;
use crate::power::PowerAssignment;
use crate::scalar::{within, Scalar};

/// Dense row-major square matrix. Serialized as an array of rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar", try_from = "Vec<Vec<T>>", into = "Vec<Vec<T>>")]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> SquareMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(invalid(format!("matrix row {i} has {} entries, expected {n}", r.len())));
            }
            data.extend(r);
        }
        Ok(SquareMatrix { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        SquareMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: T) {
        self.data[i * self.n + j] = x;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn row_sum(&self, i: usize) -> T {
        self.row(i).iter().copied().sum()
    }

    pub fn col_sum(&self, j: usize) -> T {
        (0..self.n).map(|i| self.get(i, j)).sum()
    }

    /// `Se(M)`, the sum of all entries.
    pub fn total(&self) -> T {
        self.data.iter().copied().sum()
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&x| x >= T::zero())
    }

    /// Principal submatrix on `idx`.
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |i, j| self.get(idx[i], idx[j]))
    }
}

impl<T: Scalar> TryFrom<Vec<Vec<T>>> for SquareMatrix<T> {
    type Error = crate::error::Error;

    fn try_from(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::from_rows(rows)
    }
}

impl<T: Scalar> From<SquareMatrix<T>> for Vec<Vec<T>> {
    fn from(m: SquareMatrix<T>) -> Self {
        m.to_rows()
    }
}

/// Affectances among an ordered link set: `entries[u][v] = a_{links[v]}(links[u])`,
/// so row `u` sums to the incoming affectance of `links[u]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffectanceMatrix<T> {
    pub links: Vec<usize>,
    pub entries: SquareMatrix<T>,
    /// Noise factors `c_v` in `links` order.
    pub factors: Vec<T>,
    pub power: PowerAssignment<T>,
}

impl<T: Scalar> AffectanceMatrix<T> {
    pub fn n(&self) -> usize {
        self.entries.n()
    }

    pub fn row_sums(&self) -> Vec<T> {
        (0..self.n()).map(|i| self.entries.row_sum(i)).collect()
    }

    /// Every row sum at most 1.
    pub fn is_feasible(&self) -> bool {
        self.row_sums().into_iter().all(|s| within(s, T::one()))
    }
}

/// Affectance matrix of `set` under `power`.
pub fn build_matrix<T: Scalar>(
    set: &[usize],
    power: &PowerAssignment<T>,
    inst: &Instance<T>,
) -> Result<AffectanceMatrix<T>> {
    inst.check_set(set)?;
    build_from_model(&AffectanceModel::new(inst, power)?, set)
}

pub fn build_from_model<T: Scalar>(model: &AffectanceModel<'_, T>, set: &[usize]) -> Result<AffectanceMatrix<T>> {
    let factors = set
        .iter()
        .map(|&v| model.noise_factor(v))
        .collect::<Result<Vec<_>>>()?;
    let mut entries = SquareMatrix::zeros(set.len());
    for (i, &u) in set.iter().enumerate() {
        for (j, &v) in set.iter().enumerate() {
            if i != j {
                entries.set(i, j, model.affectance(v, u)?);
            }
        }
    }
    Ok(AffectanceMatrix {
        links: set.to_vec(),
        entries,
        factors,
        power: model.power().clone(),
    })
}

/// Row indices with sum at most `gamma * lambda` (relative slack as in
/// feasibility checks). Requires a non-negative
/// matrix with `Se(M) <= gamma * n`; then at least `(1 - 1/lambda) n` rows
/// qualify.
pub fn filter_rows<T: Scalar>(m: &SquareMatrix<T>, gamma: T, lambda: T) -> Result<Vec<usize>> {
    if !(gamma >= T::zero()) {
        return Err(invalid(format!("gamma must be non-negative, got {gamma}")));
    }
    if !(lambda > T::one()) {
        return Err(invalid(format!("lambda must exceed 1, got {lambda}")));
    }
    if !m.is_nonnegative() {
        return Err(invalid("matrix has negative entries"));
    }
    let n = T::from_usize(m.n()).unwrap();
    let total = m.total();
    if !within(total, gamma * n) {
        return Err(invalid(format!("Se(M) = {total} exceeds gamma * n = {}", gamma * n)));
    }
    let threshold = gamma * lambda;
    Ok((0..m.n()).filter(|&i| within(m.row_sum(i), threshold)).collect())
}

/// Column analogue of [`filter_rows`].
pub fn filter_columns<T: Scalar>(m: &SquareMatrix<T>, gamma: T, lambda: T) -> Result<Vec<usize>> {
    filter_rows(&m.transpose(), gamma, lambda)
}

/// Positive vector `p` witnessing `A p <= p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar", try_from = "Vec<T>", into = "Vec<T>")]
pub struct PowerCertificate<T> {
    p: Vec<T>,
}

impl<T: Scalar> PowerCertificate<T> {
    pub fn new(p: Vec<T>) -> Result<Self> {
        if let Some(i) = p.iter().position(|&x| !(x.is_finite() && x > T::zero())) {
            return Err(invalid(format!("certificate entry {i} is not positive")));
        }
        Ok(PowerCertificate { p })
    }

    pub fn values(&self) -> &[T] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// The certificate as explicit powers for `ids`, in an instance of
    /// `n_links` links (unlisted links get power 1).
    pub fn to_explicit(&self, ids: &[usize], n_links: usize) -> PowerAssignment<T> {
        let mut powers = vec![T::one(); n_links];
        for (&id, &p) in ids.iter().zip(&self.p) {
            powers[id] = p;
        }
        PowerAssignment::explicit(powers)
    }
}

impl<T: Scalar> TryFrom<Vec<T>> for PowerCertificate<T> {
    type Error = crate::error::Error;

    fn try_from(p: Vec<T>) -> Result<Self> {
        Self::new(p)
    }
}

impl<T: Scalar> From<PowerCertificate<T>> for Vec<T> {
    fn from(c: PowerCertificate<T>) -> Self {
        c.p
    }
}

/// `(A p)_i <= p_i (1 + tol)` for every `i`.
pub fn check_certificate<T: Scalar>(a: &SquareMatrix<T>, p: &PowerCertificate<T>) -> Result<bool> {
    certificate_holds(a, p.values(), T::one())
}

/// `(A p)_i <= factor * p_i (1 + tol)` for every `i`.
pub fn certificate_holds<T: Scalar>(a: &SquareMatrix<T>, p: &[T], factor: T) -> Result<bool> {
    if a.n() != p.len() {
        return Err(invalid(format!(
            "matrix is {0}x{0} but certificate has {1} entries",
            a.n(),
            p.len()
        )));
    }
    Ok(a.mul_vec(p)
        .into_iter()
        .zip(p)
        .all(|(ap, &pi)| within(ap, factor * pi)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryBoundReport<T> {
    /// `Se(M)`.
    pub sum: T,
    /// `(q + 1) n`.
    pub bound: T,
    pub holds: bool,
    pub nonnegative: bool,
    /// `m_ij <= q m_ji` for all pairs.
    pub approx_symmetric: bool,
    /// `M p <= p`.
    pub dominated: bool,
}

impl<T> SymmetryBoundReport<T> {
    pub fn preconditions_hold(&self) -> bool {
        self.nonnegative && self.approx_symmetric && self.dominated
    }
}

/// Evaluates `Se(M) <= (q + 1) n` for a non-negative, `q`-approximately
/// symmetric `M` with `M p <= p`; precondition failures are reported in the
/// result rather than raised.
pub fn check_approx_symmetric_bound<T: Scalar>(
    m: &SquareMatrix<T>,
    p: &PowerCertificate<T>,
    q: T,
) -> Result<SymmetryBoundReport<T>> {
    let n = m.n();
    let dominated = check_certificate(m, p)?;
    let mut approx_symmetric = q >= T::zero();
    for i in 0..n {
        for j in 0..n {
            if !within(m.get(i, j), q * m.get(j, i)) {
                approx_symmetric = false;
            }
        }
    }
    let sum = m.total();
    let bound = (q + T::one()) * T::from_usize(n).unwrap();
    Ok(SymmetryBoundReport {
        sum,
        bound,
        holds: sum <= bound,
        nonnegative: m.is_nonnegative(),
        approx_symmetric,
        dominated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Mode, PhysicalParams};
    use crate::metric::MetricSpace;
    use proptest::prelude::*;

    fn m(rows: Vec<Vec<f64>>) -> SquareMatrix<f64> {
        SquareMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn filter_rows_examples() {
        let z = SquareMatrix::<f64>::zeros(5);
        assert_eq!(filter_rows(&z, 0.3, 2.0).unwrap(), vec![0, 1, 2, 3, 4]);
        let a = m(vec![vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert_eq!(filter_rows(&a, 0.5, 2.0).unwrap(), vec![0, 1]);
        assert!(filter_rows(&a, 0.25, 2.0).is_err());
        assert!(filter_rows(&a, 0.5, 1.0).is_err());
    }

    #[test]
    fn certificate_examples() {
        let z = SquareMatrix::<f64>::zeros(2);
        let p = PowerCertificate::new(vec![3.0, 0.1]).unwrap();
        assert!(check_certificate(&z, &p).unwrap());
        let a = m(vec![vec![0.0, 2.0], vec![2.0, 0.0]]);
        assert!(!check_certificate(&a, &PowerCertificate::new(vec![1.0, 1.0]).unwrap()).unwrap());
        // Lower-bound construction with K = 1: A p = (1/28, 1/14) for p = (1, 1/2).
        let lb = m(vec![vec![0.0, 1.0 / 14.0], vec![1.0 / 14.0, 0.0]]);
        let p = PowerCertificate::new(vec![1.0, 0.5]).unwrap();
        let ap = lb.mul_vec(p.values());
        assert!((ap[0] - 1.0 / 28.0).abs() < 1e-15 && (ap[1] - 1.0 / 14.0).abs() < 1e-15);
        assert!(check_certificate(&lb, &p).unwrap());
        assert!(check_certificate(&lb, &PowerCertificate::new(vec![1.0]).unwrap()).is_err());
        assert!(PowerCertificate::new(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn symmetric_bound_examples() {
        let z = SquareMatrix::<f64>::zeros(3);
        let ones = PowerCertificate::new(vec![1.0; 3]).unwrap();
        let r = check_approx_symmetric_bound(&z, &ones, 1.0).unwrap();
        assert_eq!(r.sum, 0.0);
        assert!(r.holds && r.preconditions_hold());
        for a in [0.0, 0.3, 1.0] {
            let s = m(vec![vec![0.0, a], vec![a, 0.0]]);
            let r = check_approx_symmetric_bound(&s, &PowerCertificate::new(vec![1.0, 1.0]).unwrap(), 1.0).unwrap();
            assert_eq!(r.sum, 2.0 * a);
            assert_eq!(r.bound, 4.0);
            assert!(r.holds && r.preconditions_hold());
        }
        let lopsided = m(vec![vec![0.0, 1.0], vec![0.1, 0.0]]);
        let r = check_approx_symmetric_bound(&lopsided, &PowerCertificate::new(vec![1.0, 1.0]).unwrap(), 1.0).unwrap();
        assert!(!r.approx_symmetric);
    }

    #[test]
    fn build_matrix_examples() {
        let inst = {
            let mt = MetricSpace::euclidean(1, vec![vec![0.0], vec![1.0], vec![3.0], vec![2.0]]).unwrap();
            // link 0: 0->1, link 1: 3->2; d(s1,r0)=2, d(s0,r1)=2
            Instance::new(mt, &[(0, 1), (2, 3)], PhysicalParams::new(2.0, 1.0, 0.0).unwrap(), Mode::Unidirectional)
                .unwrap()
        };
        let one = build_matrix(&[1], &PowerAssignment::uniform(), &inst).unwrap();
        assert_eq!(one.entries.to_rows(), vec![vec![0.0]]);
        let two = build_matrix(&[0, 1], &PowerAssignment::uniform(), &inst).unwrap();
        assert_eq!(two.entries.to_rows(), vec![vec![0.0, 0.25], vec![0.25, 0.0]]);
        assert_eq!(two.factors, vec![1.0, 1.0]);
        assert!(two.is_feasible());
    }

    #[test]
    fn json_shapes() {
        let a = m(vec![vec![0.0, 0.5], vec![0.25, 0.0]]);
        assert_eq!(serde_json::to_string(&a).unwrap(), "[[0.0,0.5],[0.25,0.0]]");
        let back: SquareMatrix<f64> = serde_json::from_str("[[0.0,0.5],[0.25,0.0]]").unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<SquareMatrix<f64>>("[[0.0],[1.0,2.0]]").is_err());
        let p: PowerCertificate<f64> = serde_json::from_str("[1.0,0.5]").unwrap();
        assert_eq!(p.values(), &[1.0, 0.5]);
        assert!(serde_json::from_str::<PowerCertificate<f64>>("[1.0,-1.0]").is_err());
    }

    fn nonneg(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
        prop::collection::vec(prop::collection::vec(0.0f64..1.0, n), n)
    }

    proptest! {
        #[test]
        fn filter_rows_cardinality(rows in (1usize..20).prop_flat_map(nonneg), lambda in 1.01f64..10.0) {
            let a = SquareMatrix::from_rows(rows).unwrap();
            let n = a.n() as f64;
            // smallest valid gamma
            let gamma = a.total() / n;
            let kept = filter_rows(&a, gamma, lambda).unwrap();
            prop_assert!(kept.len() as f64 >= (1.0 - 1.0 / lambda) * n);
            for &i in &kept {
                prop_assert!(within(a.row_sum(i), gamma * lambda));
            }
        }

        #[test]
        fn symmetric_dominated_matrices_sum_below_2n(
            rows in (1usize..15).prop_flat_map(nonneg),
            p in prop::collection::vec(0.1f64..10.0, 15),
        ) {
            let n = rows.len();
            let sym = SquareMatrix::from_fn(n, |i, j| if i == j { 0.0 } else { rows[i][j] + rows[j][i] });
            let p = &p[..n];
            // scale so that M p <= p
            let mp = sym.mul_vec(p);
            let worst = mp.iter().zip(p).map(|(a, b)| a / b).fold(0.0, f64::max);
            let s = if worst > 1.0 { 1.0 / worst } else { 1.0 };
            let scaled = SquareMatrix::from_fn(n, |i, j| sym.get(i, j) * s);
            let r = check_approx_symmetric_bound(&scaled, &PowerCertificate::new(p.to_vec()).unwrap(), 1.0).unwrap();
            prop_assert!(r.preconditions_hold());
            prop_assert!(r.holds);
            prop_assert!(r.sum <= 2.0 * n as f64);
        }
    }
}
