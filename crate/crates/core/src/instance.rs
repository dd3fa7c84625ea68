//! Links, physical parameters and the instance they live in.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::metric::MetricSpace;
use crate::scalar::Scalar;

/// Whether interference is measured sender-to-receiver only, or over all
/// four endpoint pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "uni")]
    Unidirectional,
    #[serde(rename = "bi")]
    Bidirectional,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Link<T> {
    pub id: usize,
    pub sender: usize,
    pub receiver: usize,
    /// Cached `d(sender, receiver)`.
    pub length: T,
}

/// Path-loss exponent, SINR threshold and ambient noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams<T> {
    pub alpha: T,
    pub beta: T,
    pub noise: T,
}

impl<T: Scalar> PhysicalParams<T> {
    pub fn new(alpha: T, beta: T, noise: T) -> Result<Self> {
        if !(alpha.is_finite() && alpha > T::zero()) {
            return Err(invalid(format!("alpha must be positive, got {alpha}")));
        }
        if !(beta.is_finite() && beta >= T::one()) {
            return Err(invalid(format!("beta must be at least 1, got {beta}")));
        }
        if !(noise.is_finite() && noise >= T::zero()) {
            return Err(invalid(format!("noise must be non-negative, got {noise}")));
        }
        Ok(PhysicalParams { alpha, beta, noise })
    }
}

/// A set of links in a metric, with the SINR parameters. Link `i` has id `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    bound = "T: Scalar",
    try_from = "crate::io::InstanceDoc<T>",
    into = "crate::io::InstanceDoc<T>"
)]
pub struct Instance<T> {
    metric: MetricSpace<T>,
    links: Vec<Link<T>>,
    alpha: T,
    beta: T,
    noise: T,
    mode: Mode,
}

impl<T: Scalar> Instance<T> {
    /// `endpoints[i]` is the (sender, receiver) point pair of link `i`.
    pub fn new(
        metric: MetricSpace<T>,
        endpoints: &[(usize, usize)],
        params: PhysicalParams<T>,
        mode: Mode,
    ) -> Result<Self> {
        let params = PhysicalParams::new(params.alpha, params.beta, params.noise)?;
        let n_points = metric.len();
        let mut links = Vec::with_capacity(endpoints.len());
        for (id, &(s, r)) in endpoints.iter().enumerate() {
            if s >= n_points || r >= n_points {
                return Err(invalid(format!(
                    "link {id} references point outside the metric ({n_points} points)"
                )));
            }
            let length = metric.dist(s, r);
            if !(length > T::zero()) {
                return Err(invalid(format!("link {id} has non-positive length")));
            }
            links.push(Link {
                id,
                sender: s,
                receiver: r,
                length,
            });
        }
        Ok(Instance {
            metric,
            links,
            alpha: params.alpha,
            beta: params.beta,
            noise: params.noise,
            mode,
        })
    }

    pub fn metric(&self) -> &MetricSpace<T> {
        &self.metric
    }

    pub fn links(&self) -> &[Link<T>] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn ids(&self) -> Vec<usize> {
        (0..self.links.len()).collect()
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn noise(&self) -> T {
        self.noise
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn params(&self) -> PhysicalParams<T> {
        PhysicalParams {
            alpha: self.alpha,
            beta: self.beta,
            noise: self.noise,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_params(mut self, params: PhysicalParams<T>) -> Result<Self> {
        let p = PhysicalParams::new(params.alpha, params.beta, params.noise)?;
        self.alpha = p.alpha;
        self.beta = p.beta;
        self.noise = p.noise;
        Ok(self)
    }

    pub fn link(&self, id: usize) -> Result<&Link<T>> {
        self.links.get(id).ok_or(Error::UnknownLink(id))
    }

    pub fn length(&self, id: usize) -> T {
        self.links[id].length
    }

    /// Ratio of the longest to the shortest link length among `ids`
    /// (1 for an empty set).
    pub fn length_ratio_of(&self, ids: &[usize]) -> T {
        let mut lo = T::infinity();
        let mut hi = T::zero();
        for &i in ids {
            let l = self.links[i].length;
            lo = lo.min(l);
            hi = hi.max(l);
        }
        if ids.is_empty() {
            T::one()
        } else {
            hi / lo
        }
    }

    /// Δ over all links.
    pub fn length_ratio(&self) -> T {
        self.length_ratio_of(&self.ids())
    }

    /// Distance from link `u` to link `v`: `d(s_u, r_v)` for unidirectional
    /// links, the minimum over the four endpoint pairs for bidirectional
    /// ones. A link's distance to itself is its length.
    pub fn link_distance(&self, u: usize, v: usize) -> Result<T> {
        self.link(u)?;
        self.link(v)?;
        Ok(self.link_distance_unchecked(u, v))
    }

    pub(crate) fn link_distance_unchecked(&self, u: usize, v: usize) -> T {
        let (a, b) = (&self.links[u], &self.links[v]);
        if u == v {
            return a.length;
        }
        let d = |x, y| self.metric.dist(x, y);
        match self.mode {
            Mode::Unidirectional => d(a.sender, b.receiver),
            Mode::Bidirectional => d(a.sender, b.receiver)
                .min(d(b.sender, a.receiver))
                .min(d(a.sender, b.sender))
                .min(d(a.receiver, b.receiver)),
        }
    }

    /// Checks a link set for unknown or repeated ids.
    pub fn check_set(&self, set: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.links.len()];
        for &i in set {
            if i >= self.links.len() {
                return Err(Error::UnknownLink(i));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(invalid(format!("link {i} appears twice in the set")));
            }
        }
        Ok(())
    }

    /// `ids` ordered by non-decreasing length, ties by ascending id.
    pub fn sort_by_length(&self, ids: &[usize]) -> Vec<usize> {
        let mut out = ids.to_vec();
        out.sort_by(|&a, &b| {
            self.links[a]
                .length
                .partial_cmp(&self.links[b].length)
                .expect("lengths are finite")
                .then(a.cmp(&b))
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> PhysicalParams<f64> {
        PhysicalParams::new(2.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn unidirectional_distance_is_sender_to_receiver() {
        // s_u=(0,0), r_u=(0,1), s_v=(10,10), r_v=(3,4)
        let m = MetricSpace::euclidean(
            2,
            vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![10.0, 10.0], vec![3.0, 4.0]],
        )
        .unwrap();
        let inst = Instance::new(m, &[(0, 1), (2, 3)], params(), Mode::Unidirectional).unwrap();
        assert_eq!(inst.link_distance(0, 1).unwrap(), 5.0);
        assert_eq!(inst.link_distance(0, 0).unwrap(), 1.0);
        assert_eq!(inst.link_distance(1, 1).unwrap(), inst.length(1));
    }

    #[test]
    fn bidirectional_distance_is_min_of_four() {
        // points: s_u=0, r_u=1, s_v=2, r_v=3
        // d(s_u,r_v)=5, d(s_v,r_u)=2, d(s_u,s_v)=7, d(r_u,r_v)=3
        let m = MetricSpace::explicit(vec![
            vec![0.0, 4.0, 7.0, 5.0],
            vec![4.0, 0.0, 2.0, 3.0],
            vec![7.0, 2.0, 0.0, 5.0],
            vec![5.0, 3.0, 5.0, 0.0],
        ])
        .unwrap();
        let inst = Instance::new(m, &[(0, 1), (2, 3)], params(), Mode::Bidirectional).unwrap();
        assert_eq!(inst.link_distance(0, 1).unwrap(), 2.0);
        assert_eq!(inst.link_distance(1, 0).unwrap(), 2.0);
        assert_eq!(inst.link_distance(0, 0).unwrap(), 4.0);
    }

    #[test]
    fn unknown_link_is_rejected() {
        let m = MetricSpace::euclidean(1, vec![vec![0.0], vec![1.0]]).unwrap();
        let inst = Instance::new(m, &[(0, 1)], params(), Mode::Unidirectional).unwrap();
        assert_eq!(inst.link_distance(0, 3), Err(Error::UnknownLink(3)));
        assert!(inst.check_set(&[0, 0]).is_err());
    }

    #[test]
    fn zero_length_link_is_rejected() {
        let m = MetricSpace::euclidean(1, vec![vec![0.0], vec![0.0]]).unwrap();
        assert!(Instance::new(m, &[(0, 1)], params(), Mode::Unidirectional).is_err());
    }

    #[test]
    fn bad_params_rejected() {
        assert!(PhysicalParams::new(0.0, 1.0, 0.0).is_err());
        assert!(PhysicalParams::new(2.0, 0.5, 0.0).is_err());
        assert!(PhysicalParams::new(2.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn length_ratio_and_order() {
        let m = MetricSpace::euclidean(1, vec![vec![0.0], vec![4.0], vec![10.0], vec![11.0], vec![20.0], vec![24.0]])
            .unwrap();
        let inst = Instance::new(m, &[(0, 1), (2, 3), (4, 5)], params(), Mode::Unidirectional).unwrap();
        assert_eq!(inst.length_ratio(), 4.0);
        assert_eq!(inst.sort_by_length(&[0, 1, 2]), vec![1, 0, 2]);
    }
}
