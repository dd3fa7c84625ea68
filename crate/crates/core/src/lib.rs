//! SINR link capacity and scheduling in general metric spaces.
//!
//! Links live in a [`MetricSpace`]; an [`Instance`] adds the path-loss
//! exponent, SINR threshold, noise and directionality. Feasibility is
//! expressed through affectance: a set is feasible when every member's
//! total incoming affectance is at most 1.
//!
//! Everything is generic over the [`Scalar`] type (`f32` or `f64`); the
//! `*64` aliases below fix it to `f64`.

pub mod affectance;
pub mod capacity;
pub mod error;
pub mod generators;
pub mod instance;
pub mod io;
pub mod matrix;
pub mod metric;
pub mod oracle;
pub mod power;
pub mod scalar;
pub mod schedule;
pub mod spectral;

pub use affectance::{
    affectance, in_affectance_sum, is_feasible, out_affectance_sum, AffectanceModel, FeasibilityReport,
    SignalStrength, Violation,
};
pub use capacity::{
    algorithm_c, algorithm_pc, bidirectional_pc_capacity, build_level_partition, equilength_capacity,
    signal_strengthen, AlgCConfig, CapacityResult, LevelPartition,
};
pub use error::{Error, Result};
pub use instance::{Instance, Link, Mode, PhysicalParams};
pub use matrix::{
    build_matrix, check_approx_symmetric_bound, check_certificate, filter_rows, AffectanceMatrix, PowerCertificate,
    SquareMatrix,
};
pub use metric::MetricSpace;
pub use oracle::{min_schedule, opt_fixed, opt_pc, OracleResult};
pub use power::{scale_power_for_noise, PowerAssignment, PowerKind};
pub use scalar::Scalar;
pub use schedule::{schedule_first_fit, schedule_repeated_capacity, Regime, Schedule};
pub use spectral::{pc_feasible_oracle, perron_root, PcFeasibility};

pub type Instance64 = Instance<f64>;
pub type Instance32 = Instance<f32>;
pub type MetricSpace64 = MetricSpace<f64>;
pub type PowerAssignment64 = PowerAssignment<f64>;
pub type AffectanceMatrix64 = AffectanceMatrix<f64>;
pub type PowerCertificate64 = PowerCertificate<f64>;
pub type CapacityResult64 = CapacityResult<f64>;
pub type Schedule64 = Schedule<f64>;
pub type OracleResult64 = OracleResult<f64>;
