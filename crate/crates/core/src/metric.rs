//! Point metrics: Euclidean coordinates or an explicit distance matrix.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Distances between indexed points.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricSpace<T> {
    Euclidean { dim: usize, coords: Vec<Vec<T>> },
    /// Row-major `n_points x n_points` matrix.
    Explicit { n_points: usize, dist: Vec<T> },
}

impl<T: Scalar> MetricSpace<T> {
    pub fn euclidean(dim: usize, coords: Vec<Vec<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMetric("dimension must be positive".into()));
        }
        for (i, p) in coords.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidMetric(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidMetric(format!("point {i} has a non-finite coordinate")));
            }
        }
        Ok(MetricSpace::Euclidean { dim, coords })
    }

    /// Builds an explicit metric from matrix rows. Entries must be finite,
    /// non-negative, symmetric and zero on the diagonal. The triangle
    /// inequality is not checked here; see [`MetricSpace::validate_triangle`].
    pub fn explicit(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMetric(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            dist.extend(row);
        }
        Self::from_flat(n, dist)
    }

    pub fn from_flat(n_points: usize, dist: Vec<T>) -> Result<Self> {
        if n_points == 0 {
            return Err(Error::InvalidMetric("metric needs at least one point".into()));
        }
        if dist.len() != n_points * n_points {
            return Err(Error::InvalidMetric("matrix is not square".into()));
        }
        let tol = T::feasibility_tol();
        for i in 0..n_points {
            if dist[i * n_points + i] != T::zero() {
                return Err(Error::InvalidMetric(format!("d({i},{i}) is not zero")));
            }
            for j in 0..n_points {
                let d = dist[i * n_points + j];
                if !d.is_finite() || d < T::zero() {
                    return Err(Error::InvalidMetric(format!(
                        "d({i},{j}) = {d} is not a finite non-negative number"
                    )));
                }
                let e = dist[j * n_points + i];
                if (d - e).abs() > tol * d.max(e) {
                    return Err(Error::InvalidMetric(format!("d({i},{j}) != d({j},{i})")));
                }
            }
        }
        Ok(MetricSpace::Explicit { n_points, dist })
    }

    pub fn len(&self) -> usize {
        match self {
            MetricSpace::Euclidean { coords, .. } => coords.len(),
            MetricSpace::Explicit { n_points, .. } => *n_points,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Distance between points `x` and `y`. Panics on out-of-range indices;
    /// instances validate their endpoints on construction.
    pub fn dist(&self, x: usize, y: usize) -> T {
        match self {
            MetricSpace::Euclidean { dim, coords } => {
                let (a, b) = (&coords[x], &coords[y]);
                if *dim == 1 {
                    return (a[0] - b[0]).abs();
                }
                a.iter()
                    .zip(b)
                    .map(|(&p, &q)| (p - q) * (p - q))
                    .sum::<T>()
                    .sqrt()
            }
            MetricSpace::Explicit { n_points, dist } => dist[x * n_points + y],
        }
    }

    /// Checks `d(x,z) <= d(x,y) + d(y,z)` for every triple, with relative
    /// slack. O(n^3).
    pub fn validate_triangle(&self) -> Result<()> {
        let n = self.len();
        for x in 0..n {
            for z in 0..n {
                let direct = self.dist(x, z);
                for y in 0..n {
                    let via = self.dist(x, y) + self.dist(y, z);
                    if !crate::scalar::within(direct, via) {
                        return Err(Error::InvalidMetric(format!(
                            "triangle inequality fails: d({x},{z}) = {direct} > d({x},{y}) + d({y},{z}) = {via}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Shortest-path completion of a partial set of distance constraints
    /// (Floyd-Warshall). Every point must be reachable from every other.
    pub fn shortest_path_closure(n_points: usize, constraints: &[(usize, usize, T)]) -> Result<Self> {
        let inf = T::infinity();
        let mut d = vec![inf; n_points * n_points];
        for i in 0..n_points {
            d[i * n_points + i] = T::zero();
        }
        for &(a, b, w) in constraints {
            if a >= n_points || b >= n_points {
                return Err(Error::InvalidMetric(format!("constraint ({a},{b}) out of range")));
            }
            if !(w.is_finite() && w >= T::zero()) {
                return Err(Error::InvalidMetric(format!("constraint ({a},{b}) has weight {w}")));
            }
            if a != b {
                let cur = d[a * n_points + b];
                let w = cur.min(w);
                d[a * n_points + b] = w;
                d[b * n_points + a] = w;
            }
        }
        for k in 0..n_points {
            for i in 0..n_points {
                let dik = d[i * n_points + k];
                if dik == inf {
                    continue;
                }
                for j in 0..n_points {
                    let cand = dik + d[k * n_points + j];
                    if cand < d[i * n_points + j] {
                        d[i * n_points + j] = cand;
                    }
                }
            }
        }
        if d.contains(&inf) {
            return Err(Error::InvalidMetric("constraint graph is disconnected".into()));
        }
        Self::from_flat(n_points, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_pythagoras() {
        let m = MetricSpace::euclidean(2, vec![vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(m.dist(0, 1), 5.0);
        assert_eq!(m.dist(1, 1), 0.0);
    }

    #[test]
    fn explicit_rejects_asymmetry_and_diagonal() {
        assert!(MetricSpace::<f64>::explicit(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(MetricSpace::<f64>::explicit(vec![vec![1.0, 1.0], vec![1.0, 0.0]]).is_err());
        assert!(MetricSpace::<f64>::explicit(vec![vec![0.0, -1.0], vec![-1.0, 0.0]]).is_err());
        assert!(MetricSpace::<f64>::explicit(vec![vec![0.0, f64::NAN], vec![f64::NAN, 0.0]]).is_err());
    }

    #[test]
    fn triangle_validator_catches_shortcut() {
        let bad = MetricSpace::<f64>::explicit(vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ])
        .unwrap();
        assert!(bad.validate_triangle().is_err());
        let good = MetricSpace::shortest_path_closure(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 5.0)]).unwrap();
        assert_eq!(good.dist(0, 2), 2.0);
        good.validate_triangle().unwrap();
    }

    #[test]
    fn closure_rejects_disconnected() {
        assert!(MetricSpace::<f64>::shortest_path_closure(3, &[(0, 1, 1.0)]).is_err());
    }
}
