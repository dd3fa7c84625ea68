use std::fs::File;
use std::io::Write;
use std::time::Instant;

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde::Serialize;

use sinrcap::generators::{gen_lower_bound, gen_random_euclidean, EuclideanParams, LowerBoundParams};
use sinrcap::oracle::{opt_fixed, opt_pc, SUBSET_CAP};
use sinrcap::{
    algorithm_c, algorithm_pc, bidirectional_pc_capacity, pc_feasible_oracle, schedule_first_fit,
    schedule_repeated_capacity, AlgCConfig, Instance64, Mode, Regime, SignalStrength,
};

use crate::args::{Cli, MethodArg, SweepArgs, SweepKind};
use crate::commands::power_of;

#[derive(Debug, Clone, Serialize)]
struct Row {
    instance_id: String,
    n: usize,
    delta: f64,
    algorithm: String,
    x_size: Option<usize>,
    oracle_opt: Option<usize>,
    ratio: Option<f64>,
    slots: Option<usize>,
    runtime_ms: Option<f64>,
}

impl Row {
    fn new(id: &str, inst: &Instance64, algorithm: &str) -> Self {
        Row {
            instance_id: id.into(),
            n: inst.len(),
            delta: inst.length_ratio(),
            algorithm: algorithm.into(),
            x_size: None,
            oracle_opt: None,
            ratio: None,
            slots: None,
            runtime_ms: None,
        }
    }
}

/// Parses `a..b` (inclusive) or a single integer.
fn parse_range(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse::<usize>()?, b.trim_start_matches('=').trim().parse::<usize>()?),
        None => {
            let v = s.parse::<usize>()?;
            (v, v)
        }
    };
    if lo > hi {
        bail!("empty range {s:?}");
    }
    Ok((lo..=hi).collect())
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let t = Instant::now();
    let v = f()?;
    Ok((v, (t.elapsed().as_secs_f64() * 1e6).round() / 1e3))
}

fn lb_rows(a: &SweepArgs, k: usize) -> Result<Vec<Row>> {
    let (inst, _) = gen_lower_bound(&LowerBoundParams::new(k, a.alpha))?;
    let id = format!("lb-K{k:02}");
    let power = power_of(a.power);
    let ids = inst.ids();
    let mut rows = Vec::new();
    let methods: &[MethodArg] = match a.schedule {
        Some(MethodArg::FirstFit) => &[MethodArg::FirstFit],
        Some(MethodArg::Repeated) => &[MethodArg::Repeated],
        None => &[MethodArg::FirstFit, MethodArg::Repeated],
    };
    for &m in methods {
        let (s, ms) = timed(|| {
            Ok(match m {
                MethodArg::FirstFit => schedule_first_fit(&inst, &ids, &power)?,
                MethodArg::Repeated => schedule_repeated_capacity(&inst, &ids, &Regime::Fixed(power.clone()))?,
            })
        })?;
        let name = match m {
            MethodArg::FirstFit => "first_fit",
            MethodArg::Repeated => "repeated_capacity",
        };
        let mut r = Row::new(&id, &inst, name);
        r.slots = Some(s.len());
        r.runtime_ms = Some(ms);
        rows.push(r);
    }
    let (pc, ms) = timed(|| Ok(pc_feasible_oracle(&ids, &inst)?))?;
    let mut r = Row::new(&id, &inst, "pc_oracle");
    r.slots = pc.feasible.then_some(1);
    r.runtime_ms = Some(ms);
    rows.push(r);
    Ok(rows)
}

fn euclid_rows(a: &SweepArgs, seed: u64, n: usize, i: usize) -> Result<Vec<Row>> {
    let mode: Mode = a.mode.into();
    let params = EuclideanParams::new(n, 10.0 * (n as f64).sqrt(), 1.0, 4.0, a.alpha, seed).with_mode(mode);
    let inst = gen_random_euclidean(&params)?;
    let id = format!("euclid-n{n:03}-{i:03}");
    let ids = inst.ids();
    let power = power_of(a.power);
    let cfg = AlgCConfig::default();
    let small = a.oracle && n <= SUBSET_CAP;
    let mut rows = Vec::new();

    let (c, ms) = timed(|| Ok(algorithm_c(&inst, &ids, &power, &cfg)?))?;
    let mut r = Row::new(&id, &inst, &format!("algorithm_c_{}", power.name()));
    r.x_size = Some(c.size());
    r.runtime_ms = Some(ms);
    if small {
        let opt = opt_fixed(&inst, &ids, &power, SignalStrength::feasible())?.opt_size;
        r.oracle_opt = Some(opt);
        r.ratio = (c.size() > 0).then(|| opt as f64 / c.size() as f64);
    }
    rows.push(r);

    let (pc, ms) = timed(|| {
        Ok(match mode {
            Mode::Unidirectional => algorithm_pc(&inst, &ids, &cfg)?,
            Mode::Bidirectional => bidirectional_pc_capacity(&inst, &ids, &cfg)?,
        })
    })?;
    let mut r = Row::new(&id, &inst, &pc.algorithm);
    r.x_size = Some(pc.size());
    r.runtime_ms = Some(ms);
    if small {
        let opt = opt_pc(&inst, &ids)?.opt_size;
        r.oracle_opt = Some(opt);
        r.ratio = (pc.size() > 0).then(|| opt as f64 / pc.size() as f64);
    }
    rows.push(r);

    let (s, ms) = timed(|| Ok(schedule_repeated_capacity(&inst, &ids, &Regime::Fixed(power.clone()))?))?;
    let mut r = Row::new(&id, &inst, "repeated_capacity");
    r.slots = Some(s.len());
    r.runtime_ms = Some(ms);
    rows.push(r);
    Ok(rows)
}

pub fn run(cli: &Cli, a: &SweepArgs) -> Result<()> {
    let batches: Vec<Result<Vec<Row>>> = match a.kind {
        SweepKind::Lb => parse_range(&a.k)?.into_par_iter().map(|k| lb_rows(a, k)).collect(),
        SweepKind::Euclid => {
            let jobs: Vec<(usize, usize)> = parse_range(&a.n)?
                .into_iter()
                .flat_map(|n| (0..a.count).map(move |i| (n, i)))
                .collect();
            jobs.into_par_iter()
                .map(|(n, i)| euclid_rows(a, cli.seed.wrapping_add((n * 100_000 + i) as u64), n, i))
                .collect()
        }
    };
    let mut rows = Vec::new();
    for b in batches {
        rows.extend(b?);
    }
    rows.sort_by(|x, y| (&x.instance_id, &x.algorithm).cmp(&(&y.instance_id, &y.algorithm)));
    if a.no_timing {
        rows.iter_mut().for_each(|r| r.runtime_ms = None);
    }

    let mut buf = Vec::new();
    {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut buf);
        for r in &rows {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    match &cli.out {
        Some(path) => File::create(path)?.write_all(&buf)?,
        None if !cli.json => std::io::stdout().write_all(&buf)?,
        None => {}
    }
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&rows)?);
    } else if let Some(path) = &cli.out {
        println!("wrote {} rows to {}", rows.len(), path.display());
    }
    Ok(())
}
