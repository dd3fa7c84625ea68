use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "sinrcap", version, about = "SINR capacity and scheduling experiments")]
pub struct Cli {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads for sweeps.
    #[arg(long, global = true, env = "SINRCAP_THREADS")]
    pub threads: Option<usize>,

    /// Write the result (JSON, or CSV for sweeps) to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated instance as JSON.
    Generate(GenerateArgs),
    /// Capacity under a fixed power assignment.
    Capacity(CapacityArgs),
    /// Capacity with power control (mean power).
    Pc(InstanceArg),
    /// Partition the links into feasible slots.
    Schedule(ScheduleArgs),
    /// Exhaustive optimum on a small instance.
    Oracle(OracleArgs),
    /// Re-check a certificate or a result file against an instance.
    Verify(VerifyArgs),
    /// Run algorithms over generated instances and emit CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Scheduling lower-bound family.
    Lb,
    /// Independent-set gadget.
    Gadget,
    /// Random Euclidean links.
    Euclid,
    /// Red/blue fixture.
    Redblue,
    /// Random shortest-path metric.
    Metric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Uni,
    Bi,
}

impl From<ModeArg> for sinrcap::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Uni => sinrcap::Mode::Unidirectional,
            ModeArg::Bi => sinrcap::Mode::Bidirectional,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PowerArg {
    Uniform,
    Mean,
    Linear,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Number of groups for `lb`.
    #[arg(long = "K", alias = "k", default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 14.0)]
    pub gamma_lb: f64,
    /// Link count for `euclid` and `metric`, vertex count for random gadgets.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 100.0)]
    pub region: f64,
    #[arg(long, default_value_t = 1.0)]
    pub min_len: f64,
    #[arg(long, default_value_t = 10.0)]
    pub max_len: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Uni)]
    pub mode: ModeArg,
    /// Gadget edges as `a-b,c-d`; a random graph is drawn when absent.
    #[arg(long)]
    pub edges: Option<String>,
    /// Edge probability of the random gadget graph.
    #[arg(long, default_value_t = 0.5)]
    pub edge_prob: f64,
    #[arg(long, default_value_t = 1)]
    pub red: usize,
    #[arg(long, default_value_t = 5)]
    pub blue: usize,
    /// Where to write the power certificate of `lb` instances.
    #[arg(long)]
    pub certificate_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InstanceArg {
    /// Instance JSON file.
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
}

#[derive(Debug, Args)]
pub struct PowerChoice {
    #[arg(long, value_enum, default_value_t = PowerArg::Uniform)]
    pub power: PowerArg,
    /// Power JSON file (`{"kind", "scale", "powers"?}`); overrides `--power`.
    #[arg(long)]
    pub power_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CapacityAlgo {
    C,
    Equilength,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    #[command(flatten)]
    pub input: InstanceArg,
    #[command(flatten)]
    pub power: PowerChoice,
    #[arg(long, value_enum, default_value_t = CapacityAlgo::C)]
    pub algorithm: CapacityAlgo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Fixed,
    Pc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Repeated,
    FirstFit,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = RegimeArg::Fixed)]
    pub regime: RegimeArg,
    #[arg(long, value_enum, default_value_t = MethodArg::Repeated)]
    pub method: MethodArg,
    #[command(flatten)]
    pub power: PowerChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Fixed,
    Pc,
    Schedule,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = OracleKind::Fixed)]
    pub kind: OracleKind,
    #[command(flatten)]
    pub power: PowerChoice,
    /// Signal strength of the fixed-power search.
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Power certificate (JSON array) for all links, checked as `A p <= p`.
    #[arg(long, conflicts_with = "result")]
    pub certificate: Option<PathBuf>,
    /// Capacity, schedule or oracle result JSON to re-check.
    #[arg(long)]
    pub result: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Lb,
    Euclid,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub kind: SweepKind,
    /// Group counts for `lb`, as `a..b` (inclusive) or a single value.
    #[arg(long = "K", alias = "k", default_value = "2..6")]
    pub k: String,
    /// Link counts for `euclid`, as `a..b` (inclusive) or a single value.
    #[arg(long, default_value = "8..12")]
    pub n: String,
    /// Instances per link count for `euclid`.
    #[arg(long, default_value_t = 5)]
    pub count: usize,
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Uni)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = PowerArg::Uniform)]
    pub power: PowerArg,
    /// Scheduler for `lb` sweeps; both run when absent.
    #[arg(long, value_enum)]
    pub schedule: Option<MethodArg>,
    /// Run the exhaustive oracle where the instance is small enough.
    #[arg(long)]
    pub oracle: bool,
    /// Leave `runtime_ms` empty so reruns produce identical files.
    #[arg(long)]
    pub no_timing: bool,
}
