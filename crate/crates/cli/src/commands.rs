use std::path::{Path, PathBuf};
use std::sync::Arc;

use hosc_core::norms::{Discretization, NormSpec, TWO_PI};
use hosc_core::propagators::{heat_spectral, schrodinger_h, Evolution, SpaceTimeExport, SpaceTimeField, TimeGrid};
use hosc_core::verify::{self, sweep_csv};
use hosc_core::{Error, QuadratureGrid, Result, SpectralField, WeightConvention};
use serde::Serialize;

use crate::config::{number_list, Format, RunConfig};
use crate::output::{format_value, write_atomic};
use crate::{Command, ConfigArgs, NormArgs, PropagateArgs, SuiteArgs};

/// Runs a subcommand; `Ok(false)` means it ran and its criterion failed.
pub fn dispatch(command: Command) -> Result<bool> {
    match command {
        Command::Verify(args) => run_verify(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Norm(args) => run_norm(args),
        Command::Propagate(args) => run_propagate(args),
    }
}

fn merged(config: &ConfigArgs, flags: RunConfig, subcommand: &str) -> Result<RunConfig> {
    let mut cfg = match &config.config {
        Some(path) => RunConfig::load(path)?.overlay(flags),
        None => flags,
    };
    cfg.expect_subcommand(subcommand)?;
    Ok(cfg)
}

fn suite_flags(a: SuiteArgs) -> RunConfig {
    RunConfig {
        suite: a.suite,
        dimension: a.dimension,
        cutoffs: a.cutoffs,
        p: a.p,
        q: a.q,
        s: a.s,
        r: a.r,
        t: a.t,
        degrees: a.degrees,
        multipliers: a.multipliers,
        family: a.family,
        trials: a.trials,
        seed: a.seed,
        real: a.real,
        tolerance: a.tolerance,
        out: a.out,
        format: a.format,
        ..Default::default()
    }
}

/// Writes to `out` atomically, or to stdout.
fn emit(out: Option<&Path>, body: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, body),
        None => {
            print!("{body}");
            if !body.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn save_config(path: &Option<PathBuf>, cfg: &RunConfig) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, &(cfg.to_json() + "\n")),
        None => Ok(()),
    }
}

fn run_verify(args: SuiteArgs) -> Result<bool> {
    let config = args.config.clone();
    let cfg = merged(&config, suite_flags(args), "verify")?;
    let suite = cfg.suite()?;
    let params = cfg.suite_params(suite)?;
    save_config(&config.write_config, &cfg.resolved(suite, &params))?;
    let report = verify::run(suite, &params)?;
    let body = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => report.to_json()? + "\n",
        Format::Csv => report.to_csv(),
    };
    emit(cfg.out.as_deref(), &body)?;
    if cfg.out.is_some() {
        println!("{}", report.summary());
    } else {
        eprintln!("{}", report.summary());
    }
    Ok(report.pass)
}

#[derive(Serialize)]
struct SweepJsonRow {
    suite: String,
    p: String,
    q: String,
    s: Option<f64>,
    cutoff: usize,
    c_hat: f64,
    stable: bool,
}

fn run_sweep(args: SuiteArgs) -> Result<bool> {
    let config = args.config.clone();
    let cfg = merged(&config, suite_flags(args), "sweep")?;
    let suite = cfg.suite()?;
    let params = cfg.suite_params(suite)?;
    save_config(&config.write_config, &cfg.resolved(suite, &params))?;
    let rows = verify::sweep(suite, &params)?;
    let body = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => sweep_csv(&rows),
        Format::Json => {
            let rows: Vec<SweepJsonRow> = rows
                .iter()
                .map(|r| SweepJsonRow {
                    suite: r.suite.to_string(),
                    p: hosc_core::norms::format_exponent(r.p),
                    q: hosc_core::norms::format_exponent(r.q),
                    s: r.s,
                    cutoff: r.cutoff,
                    c_hat: r.c_hat,
                    stable: r.stable,
                })
                .collect();
            serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n"
        }
    };
    emit(cfg.out.as_deref(), &body)?;
    Ok(rows.iter().all(|r| r.stable))
}

fn load_field(path: Option<&Path>) -> Result<SpectralField> {
    let path = path.ok_or_else(|| Error::InvalidInput("--field is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read field {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("bad field {}: {e}", path.display())))
}

fn run_norm(args: NormArgs) -> Result<bool> {
    let flags = RunConfig {
        field: args.field,
        spec: args.spec,
        order: args.order,
        ..Default::default()
    };
    let cfg = merged(&args.config, flags, "norm")?;
    save_config(&args.config.write_config, &cfg)?;
    let field = load_field(cfg.field.as_deref())?;
    let spec: NormSpec = cfg
        .spec
        .as_deref()
        .ok_or_else(|| Error::InvalidInput("--spec is required".into()))?
        .parse()?;
    let order = cfg.order.unwrap_or(field.cutoff() + 12);
    let disc = Discretization::with_order(field.dimension(), field.cutoff(), order)?;
    println!("{}", format_value(spec.evaluate(&field, &disc)?));
    Ok(true)
}

fn parse_evolution(s: &str) -> Result<Evolution> {
    match s.trim() {
        "oscillator" => Ok(Evolution::Oscillator),
        "heat" => Ok(Evolution::Heat),
        "free" => Ok(Evolution::Free),
        other => Err(Error::InvalidInput(format!(
            "unknown evolution `{other}`; expected oscillator, heat or free"
        ))),
    }
}

#[derive(Serialize)]
struct PropagateOutput {
    evolution: Evolution,
    #[serde(flatten)]
    samples: SpaceTimeExport,
}

fn run_propagate(args: PropagateArgs) -> Result<bool> {
    let flags = RunConfig {
        field: args.field,
        evolution: args.evolution,
        t: args.t,
        horizon: args.horizon,
        steps: args.steps,
        order: args.order,
        spectral: args.spectral,
        out: args.out,
        ..Default::default()
    };
    let mut cfg = merged(&args.config, flags, "propagate")?;
    if cfg.steps.is_some() && cfg.horizon.is_none() {
        cfg.horizon = Some(TWO_PI);
    }
    save_config(&args.config.write_config, &cfg)?;
    let field = load_field(cfg.field.as_deref())?;
    let evolution = parse_evolution(
        cfg.evolution
            .as_deref()
            .ok_or_else(|| Error::InvalidInput("--evolution is required".into()))?,
    )?;
    let times = match (&cfg.t, cfg.steps) {
        (Some(_), Some(_)) => return Err(Error::InvalidInput("give either --t or --steps, not both".into())),
        (Some(t), None) => TimeGrid::instants(number_list(t)?)?,
        (None, Some(steps)) => TimeGrid::periodic(cfg.horizon.unwrap_or(TWO_PI), steps)?,
        (None, None) => return Err(Error::InvalidInput("--t or --steps is required".into())),
    };
    if cfg.spectral.unwrap_or(false) {
        let [t] = times.nodes() else {
            return Err(Error::InvalidInput("--spectral needs exactly one time".into()));
        };
        let evolved = match evolution {
            Evolution::Oscillator => schrodinger_h(&field, *t),
            Evolution::Heat => heat_spectral(&field, *t)?,
            Evolution::Free => {
                return Err(Error::InvalidInput(
                    "free evolution leaves the band-limited space; --spectral is unavailable".into(),
                ))
            }
        };
        emit(cfg.out.as_deref(), &(serde_json::to_string(&evolved).expect("field serializes") + "\n"))?;
        return Ok(true);
    }
    let order = cfg.order.unwrap_or(field.cutoff() + 12);
    let grid = QuadratureGrid::gauss_hermite(field.dimension(), order, WeightConvention::Compensated)?;
    let u = SpaceTimeField::evolve(&field, evolution, times, Arc::new(grid))?;
    let out = PropagateOutput {
        evolution,
        samples: u.export(),
    };
    emit(cfg.out.as_deref(), &(serde_json::to_string(&out).expect("samples serialize") + "\n"))?;
    Ok(true)
}
