use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::Value;

use sinrcap::generators::{
    gen_gadget, gen_lower_bound, gen_random_euclidean, gen_random_metric, gen_red_blue_fixture, EuclideanParams,
    GadgetParams, Graph, LowerBoundParams, RedBlueParams,
};
use sinrcap::matrix::check_certificate;
use sinrcap::oracle::{min_schedule, opt_fixed, opt_pc};
use sinrcap::spectral::zero_noise_matrix;
use sinrcap::{
    algorithm_c, algorithm_pc, bidirectional_pc_capacity, equilength_capacity, is_feasible, schedule_first_fit,
    schedule_repeated_capacity, AlgCConfig, CapacityResult64, Instance64, Mode, OracleResult64, PowerAssignment64,
    PowerCertificate64, Regime, Schedule64, SignalStrength,
};

use crate::args::{
    CapacityAlgo, CapacityArgs, Cli, Command, GenerateArgs, Kind, MethodArg, OracleArgs, OracleKind, PowerArg,
    PowerChoice, RegimeArg, ScheduleArgs, VerifyArgs,
};
use crate::sweep;

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Generate(a) => generate(cli, a),
        Command::Capacity(a) => capacity(cli, a),
        Command::Pc(a) => {
            let inst = load_instance(&a.instance)?;
            let cfg = AlgCConfig::new(a.gamma)?;
            let r = match inst.mode() {
                Mode::Unidirectional => algorithm_pc(&inst, &inst.ids(), &cfg)?,
                Mode::Bidirectional => bidirectional_pc_capacity(&inst, &inst.ids(), &cfg)?,
            };
            emit(cli, &r, &capacity_summary(&r))
        }
        Command::Schedule(a) => schedule(cli, a),
        Command::Oracle(a) => oracle(cli, a),
        Command::Verify(a) => verify(cli, a),
        Command::Sweep(a) => sweep::run(cli, a),
    }
}

/// Parses a JSON file, naming the file and position on malformed input.
pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| {
        anyhow!(
            "{}: invalid JSON at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        )
    })
}

pub fn load_instance(path: &Path) -> Result<Instance64> {
    read_json(path)
}

pub fn power_of(arg: PowerArg) -> PowerAssignment64 {
    match arg {
        PowerArg::Uniform => PowerAssignment64::uniform(),
        PowerArg::Mean => PowerAssignment64::mean(),
        PowerArg::Linear => PowerAssignment64::linear(),
    }
}

fn load_power(choice: &PowerChoice) -> Result<PowerAssignment64> {
    match &choice.power_file {
        Some(path) => read_json(path),
        None => Ok(power_of(choice.power)),
    }
}

/// Writes `value` as JSON to `--out` when given, and prints either the JSON
/// (`--json`) or `summary`.
fn emit<T: Serialize>(cli: &Cli, value: &T, summary: &str) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    if let Some(path) = &cli.out {
        fs::write(path, format!("{text}\n")).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let mut out = std::io::stdout().lock();
    if cli.json {
        writeln!(out, "{text}")?;
    } else {
        writeln!(out, "{summary}")?;
    }
    Ok(())
}

fn parse_edges(spec: &str) -> Result<Vec<(usize, usize)>> {
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|e| {
            let (a, b) = e.split_once('-').ok_or_else(|| anyhow!("edge {e:?} is not of the form a-b"))?;
            Ok((a.trim().parse()?, b.trim().parse()?))
        })
        .collect()
}

fn generate(cli: &Cli, a: &GenerateArgs) -> Result<()> {
    let inst = match a.kind {
        Kind::Lb => {
            let params = LowerBoundParams {
                k: a.k,
                gamma_lb: a.gamma_lb,
                alpha: a.alpha,
            };
            let (inst, cert) = gen_lower_bound(&params)?;
            if let Some(path) = &a.certificate_out {
                fs::write(path, serde_json::to_string(&cert)?)
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            inst
        }
        Kind::Gadget => {
            let graph = match &a.edges {
                Some(spec) => Graph::new(a.n, parse_edges(spec)?)?,
                None => Graph::random(a.n, a.edge_prob, cli.seed),
            };
            gen_gadget(&GadgetParams { graph, alpha: a.alpha })?
        }
        Kind::Euclid => gen_random_euclidean(
            &EuclideanParams::new(a.n, a.region, a.min_len, a.max_len, a.alpha, cli.seed)
                .with_mode(a.mode.into())
                .with_physics(a.beta, a.noise),
        )?,
        Kind::Redblue => gen_red_blue_fixture(&RedBlueParams::new(a.red, a.blue, a.alpha, cli.seed))?.instance,
        Kind::Metric => gen_random_metric(a.n, a.max_len.max(1.0), a.alpha, a.mode.into(), cli.seed)?,
    };
    let text = serde_json::to_string_pretty(&inst)?;
    match &cli.out {
        Some(path) => {
            fs::write(path, format!("{text}\n")).with_context(|| format!("cannot write {}", path.display()))?;
            if !cli.json {
                println!("wrote {} links to {}", inst.len(), path.display());
            }
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn capacity_summary(r: &CapacityResult64) -> String {
    let mut s = format!(
        "{}: |X| = {} of |S| = {} (power {})",
        r.algorithm,
        r.output.len(),
        r.selected.len(),
        r.power.name()
    );
    if !r.weak.is_empty() {
        s.push_str(&format!(", {} weak links skipped", r.weak.len()));
    }
    if !r.power_class_ok {
        s.push_str(", warning: power is not length-monotone and sub-linear here");
    }
    s
}

fn capacity(cli: &Cli, a: &CapacityArgs) -> Result<()> {
    let inst = load_instance(&a.input.instance)?;
    let power = load_power(&a.power)?;
    let cfg = AlgCConfig::new(a.input.gamma)?;
    let r = match a.algorithm {
        CapacityAlgo::C => algorithm_c(&inst, &inst.ids(), &power, &cfg)?,
        CapacityAlgo::Equilength => equilength_capacity(&inst, &inst.ids(), &power, &cfg)?,
    };
    emit(cli, &r, &capacity_summary(&r))
}

fn schedule(cli: &Cli, a: &ScheduleArgs) -> Result<()> {
    let inst = load_instance(&a.instance)?;
    let power = load_power(&a.power)?;
    let s = match (a.method, a.regime) {
        (MethodArg::FirstFit, RegimeArg::Fixed) => schedule_first_fit(&inst, &inst.ids(), &power)?,
        (MethodArg::FirstFit, RegimeArg::Pc) => bail!("first-fit scheduling needs a fixed power assignment"),
        (MethodArg::Repeated, RegimeArg::Fixed) => schedule_repeated_capacity(&inst, &inst.ids(), &Regime::Fixed(power))?,
        (MethodArg::Repeated, RegimeArg::Pc) => {
            let regime = match inst.mode() {
                Mode::Unidirectional => Regime::PcUni,
                Mode::Bidirectional => Regime::PcBi,
            };
            schedule_repeated_capacity(&inst, &inst.ids(), &regime)?
        }
    };
    let summary = format!("{} slots, {} weak links", s.len(), s.weak.len());
    emit(cli, &s, &summary)
}

#[derive(Serialize)]
struct MinSchedule {
    min_slots: usize,
}

fn oracle(cli: &Cli, a: &OracleArgs) -> Result<()> {
    let inst = load_instance(&a.instance)?;
    match a.kind {
        OracleKind::Fixed => {
            let power = load_power(&a.power)?;
            let r = opt_fixed(&inst, &inst.ids(), &power, SignalStrength::new(a.delta)?)?;
            let summary = format!("opt = {} witness {:?} ({} subsets)", r.opt_size, r.witness, r.explored);
            emit(cli, &r, &summary)
        }
        OracleKind::Pc => {
            let r = opt_pc(&inst, &inst.ids())?;
            let summary = format!("opt_pc = {} witness {:?} ({} subsets)", r.opt_size, r.witness, r.explored);
            emit(cli, &r, &summary)
        }
        OracleKind::Schedule => {
            let power = load_power(&a.power)?;
            let m = min_schedule(&inst, &inst.ids(), &power)?;
            emit(cli, &MinSchedule { min_slots: m }, &format!("minimum schedule: {m} slots"))
        }
    }
}

#[derive(Serialize)]
struct Verdict {
    verified: bool,
    subject: &'static str,
    detail: String,
}

fn verify(cli: &Cli, a: &VerifyArgs) -> Result<()> {
    let inst = load_instance(&a.instance)?;
    let verdict = match (&a.certificate, &a.result) {
        (Some(path), _) => {
            let cert: PowerCertificate64 = read_json(path)?;
            let m = zero_noise_matrix(&inst.ids(), &inst)?;
            let ok = check_certificate(&m, &cert)?;
            Verdict {
                verified: ok,
                subject: "certificate",
                detail: if ok { "certificate holds" } else { "certificate fails" }.into(),
            }
        }
        (None, Some(path)) => verify_result(&inst, read_json(path)?)?,
        (None, None) => bail!("verify needs --certificate or --result"),
    };
    emit(cli, &verdict, &verdict.detail)?;
    if !verdict.verified {
        bail!("{}", verdict.detail);
    }
    Ok(())
}

fn verify_result(inst: &Instance64, doc: Value) -> Result<Verdict> {
    let one = SignalStrength::feasible();
    if doc.get("slots").is_some() {
        let s: Schedule64 = serde_json::from_value(doc)?;
        let ok = s.verify(inst)?;
        return Ok(Verdict {
            verified: ok,
            subject: "schedule",
            detail: format!("{} slots {}", s.len(), if ok { "feasible" } else { "NOT feasible" }),
        });
    }
    if doc.get("output").is_some() {
        let r: CapacityResult64 = serde_json::from_value(doc)?;
        let ok = is_feasible(&r.output, &r.power, inst, one)?.feasible;
        return Ok(Verdict {
            verified: ok,
            subject: "capacity",
            detail: format!("set of {} links {}", r.output.len(), if ok { "feasible" } else { "NOT feasible" }),
        });
    }
    if doc.get("witness").is_some() {
        let r: OracleResult64 = serde_json::from_value(doc)?;
        let ok = match (&r.certificate, &r.power) {
            (Some(cert), _) => check_certificate(&zero_noise_matrix(&r.witness, inst)?, cert)?,
            (None, Some(power)) => {
                let delta = SignalStrength::new(r.delta.unwrap_or(1.0))?;
                is_feasible(&r.witness, power, inst, delta)?.feasible
            }
            (None, None) => bail!("oracle result carries neither a certificate nor a power assignment"),
        };
        return Ok(Verdict {
            verified: ok,
            subject: "oracle",
            detail: format!("witness of {} links {}", r.witness.len(), if ok { "feasible" } else { "NOT feasible" }),
        });
    }
    bail!("unrecognised result document")
}
