//! JSON documents for instances and power assignments.
//!
//! Instance: `{"alpha", "beta", "noise", "mode": "uni"|"bi", "metric",
//! "links": [{"s", "r"}]}` where the metric is
//! `{"kind": "euclidean", "dim", "points"}` or `{"kind": "matrix", "dist"}`.
//! Power: `{"kind", "scale", "powers"?}`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error};
use crate::instance::{Instance, Mode, PhysicalParams};
use crate::metric::MetricSpace;
use crate::power::{PowerAssignment, PowerKind};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkDoc {
    pub s: usize,
    pub r: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields, bound = "T: Scalar")]
pub enum MetricDoc<T> {
    Euclidean { dim: usize, points: Vec<Vec<T>> },
    Matrix { dist: Vec<Vec<T>> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Scalar")]
pub struct InstanceDoc<T> {
    pub alpha: T,
    pub beta: T,
    pub noise: T,
    pub mode: Mode,
    pub metric: MetricDoc<T>,
    pub links: Vec<LinkDoc>,
}

impl<T: Scalar> TryFrom<InstanceDoc<T>> for Instance<T> {
    type Error = Error;

    fn try_from(doc: InstanceDoc<T>) -> Result<Self, Error> {
        let metric = match doc.metric {
            MetricDoc::Euclidean { dim, points } => MetricSpace::euclidean(dim, points)?,
            MetricDoc::Matrix { dist } => MetricSpace::explicit(dist)?,
        };
        let ends: Vec<(usize, usize)> = doc.links.iter().map(|l| (l.s, l.r)).collect();
        Instance::new(metric, &ends, PhysicalParams::new(doc.alpha, doc.beta, doc.noise)?, doc.mode)
    }
}

impl<T: Scalar> From<Instance<T>> for InstanceDoc<T> {
    fn from(inst: Instance<T>) -> Self {
        let metric = match inst.metric() {
            MetricSpace::Euclidean { dim, coords } => MetricDoc::Euclidean {
                dim: *dim,
                points: coords.clone(),
            },
            MetricSpace::Explicit { n_points, dist } => MetricDoc::Matrix {
                dist: dist.chunks(*n_points.max(&1)).map(<[T]>::to_vec).collect(),
            },
        };
        InstanceDoc {
            alpha: inst.alpha(),
            beta: inst.beta(),
            noise: inst.noise(),
            mode: inst.mode(),
            metric,
            links: inst
                .links()
                .iter()
                .map(|l| LinkDoc {
                    s: l.sender,
                    r: l.receiver,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Scalar")]
pub struct PowerDoc<T> {
    pub kind: String,
    #[serde(default = "T::one")]
    pub scale: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub powers: Option<Vec<T>>,
}

impl<T: Scalar> TryFrom<PowerDoc<T>> for PowerAssignment<T> {
    type Error = Error;

    fn try_from(doc: PowerDoc<T>) -> Result<Self, Error> {
        let kind = match (doc.kind.as_str(), doc.powers) {
            ("uniform", None) => PowerKind::Uniform,
            ("mean", None) => PowerKind::Mean,
            ("linear", None) => PowerKind::Linear,
            ("explicit", Some(p)) => PowerKind::Explicit(p),
            ("explicit", None) => return Err(invalid("explicit power needs a powers array")),
            (k @ ("uniform" | "mean" | "linear"), Some(_)) => {
                return Err(invalid(format!("power kind {k} takes no powers array")))
            }
            (k, _) => return Err(invalid(format!("unknown power kind {k:?}"))),
        };
        if !(doc.scale.is_finite() && doc.scale > T::zero()) {
            return Err(invalid(format!("power scale must be positive, got {}", doc.scale)));
        }
        Ok(PowerAssignment { kind, scale: doc.scale })
    }
}

impl<T: Scalar> From<PowerAssignment<T>> for PowerDoc<T> {
    fn from(p: PowerAssignment<T>) -> Self {
        let name = p.name().to_string();
        PowerDoc {
            kind: name,
            scale: p.scale,
            powers: match p.kind {
                PowerKind::Explicit(v) => Some(v),
                _ => None,
            },
        }
    }
}
