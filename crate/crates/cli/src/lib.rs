//! Batch front end: runs one JSON scenario and writes a JSON report.
//!
//! Exit codes: `0` when every check passes, `1` when a check fails,
//! `2` on malformed input or I/O errors.

pub mod model;
pub mod report;
pub mod scenario;

use std::collections::BTreeMap;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;
use holonomy_core::family::reconstruct_from_family;
use holonomy_core::groupoid::subgroupoid_leq;
use holonomy_core::measure::{check_consistency, integrate, ConsistencyOptions, IntegralEstimate};
use holonomy_core::symmetry::{invariance_report, unitarity_report};
use holonomy_core::{gram_matrix, Chart, Method, Reconstruction};
use num_complex::Complex64;
use thiserror::Error;

use crate::model::{MethodParams, Model, Overrides};
use crate::report::{method_name, Entry, Report};
use crate::scenario::{CommandSpec, Scenario, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn input(path: impl Into<String>, message: impl Display) -> CliError {
        CliError::Input { path: path.into(), message: message.to_string() }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "holonomy", version, about = "Run a holonomy scenario and write a JSON report")]
pub struct Args {
    /// Scenario file.
    #[arg(long)]
    pub scenario: PathBuf,
    /// Monte Carlo seed; overrides `method.seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo sample count; overrides `method.samples`.
    #[arg(long)]
    pub samples: Option<u64>,
    /// Monte Carlo worker count; overrides `method.workers`.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Report path; overrides `output`. Without either the report goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Args {
    fn overrides(&self) -> Overrides {
        Overrides { seed: self.seed, samples: self.samples, workers: self.workers }
    }
}

/// Runs the scenario and returns the process exit code.
pub fn run(args: &Args) -> i32 {
    match run_inner(args) {
        Ok(report) => {
            if report.pass {
                EXIT_OK
            } else {
                for e in report.results.iter().filter(|e| !e.pass()) {
                    eprintln!("check failed: {}", describe_failure(e));
                }
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn run_inner(args: &Args) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(&args.scenario)
        .map_err(|source| CliError::Read { path: args.scenario.clone(), source })?;
    let scenario = scenario::parse(&text)?;
    let report = execute(&scenario, args.overrides())?;
    let mut json = serde_json::to_string_pretty(&report).expect("reports serialize");
    json.push('\n');
    match args.out.as_ref().or(scenario.output.as_ref()) {
        Some(path) => write_atomically(path, json.as_bytes())?,
        None => print!("{json}"),
    }
    Ok(report)
}

/// Writes to a temporary file next to `path`, then renames it into place.
pub fn write_atomically(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let err = |source| CliError::Write { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(bytes).map_err(err)?;
    tmp.as_file().sync_all().map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

fn describe_failure(e: &Entry) -> String {
    match e {
        Entry::Consistency { coarse, fine, max_discrepancy, .. } => {
            format!("subgroupoids `{coarse}` <= `{fine}` are inconsistent (discrepancy {max_discrepancy})")
        }
        Entry::Invariance { check, function, other, transformation, discrepancy, .. } => match other {
            Some(h) => format!("{check} of `{function}`, `{h}` under `{transformation}` (discrepancy {discrepancy})"),
            None => format!("{check} of `{function}` under `{transformation}` (discrepancy {discrepancy})"),
        },
        Entry::Gram { functions, .. } => format!("gram matrix of {functions:?} is not orthonormal"),
        Entry::Reconstruct { coarse, fine, .. } => format!(
            "charts of `{}` and `{}` are incompatible",
            coarse.as_deref().unwrap_or("?"),
            fine.as_deref().unwrap_or("?")
        ),
        Entry::Integral { function, .. } => format!("integral of `{function}`"),
    }
}

/// Evaluates a parsed scenario.
pub fn execute(scenario: &Scenario, overrides: Overrides) -> Result<Report, CliError> {
    let start = Instant::now();
    let model = Model::build(scenario)?;
    let params = MethodParams::resolve(&scenario.method, overrides)?;
    let method = params.method();
    let results = match &scenario.command {
        CommandSpec::Integrate { functions } => integrate_all(&model, functions, method)?,
        CommandSpec::Consistency { pairs, battery } => consistency(&model, pairs, battery, &params)?,
        CommandSpec::Invariance { functions, transformations, unitarity } => {
            invariance(&model, functions, transformations, *unitarity, method)?
        }
        CommandSpec::Gram { functions, expect_orthonormal } => {
            vec![gram(&model, functions, *expect_orthonormal, method)?]
        }
        CommandSpec::Reconstruct { charts } => vec![reconstruct(&model, charts)?],
    };
    // Lie-group consistency always samples.
    let sampled = !method.is_exact()
        || matches!(scenario.command, CommandSpec::Consistency { .. }) && !model.group.is_finite();
    let (samples, seed, workers) =
        if sampled { (Some(params.samples), Some(params.seed), Some(params.workers)) } else { (None, None, None) };
    Ok(Report {
        schema: SCHEMA_VERSION,
        command: scenario.command.clone(),
        group: model.group.kind().to_string(),
        method: if sampled { "monte_carlo" } else { method_name(&method) },
        samples,
        seed,
        workers,
        pass: results.iter().all(Entry::pass),
        results,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

fn integrate_all(model: &Model, names: &[String], method: Method) -> Result<Vec<Entry>, CliError> {
    names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let path = format!("command.functions[{i}]");
            let f = model.function_named(name, &path)?;
            let est = integrate(f, &model.measure, method).map_err(|e| CliError::input(&path, e))?;
            Ok(Entry::Integral { function: name.clone(), estimate: (&est).into() })
        })
        .collect()
}

fn consistency(
    model: &Model,
    pairs: &[(String, String)],
    battery: &[f64],
    params: &MethodParams,
) -> Result<Vec<Entry>, CliError> {
    let mut options = ConsistencyOptions {
        samples: params.samples,
        seed: params.seed,
        workers: params.workers,
        ..ConsistencyOptions::default()
    };
    if !battery.is_empty() {
        options.battery = battery
            .iter()
            .enumerate()
            .map(|(i, x)| model.label(*x, &format!("command.battery[{i}]")))
            .collect::<Result<_, _>>()?;
    }
    let pairs: Vec<(String, String, String)> = if pairs.is_empty() {
        let mut out = Vec::new();
        for (a, l) in &model.subgroupoids {
            for (b, m) in &model.subgroupoids {
                if a != b && subgroupoid_leq(l, m).is_some() {
                    out.push((a.clone(), b.clone(), "command".to_string()));
                }
            }
        }
        out
    } else {
        pairs
            .iter()
            .enumerate()
            .map(|(i, (a, b))| (a.clone(), b.clone(), format!("command.pairs[{i}]")))
            .collect()
    };
    pairs
        .iter()
        .map(|(a, b, path)| {
            let coarse = model.subgroupoid(a, path)?;
            let fine = model.subgroupoid(b, path)?;
            let r = check_consistency(&model.measure, coarse, fine, &model.group, &options)
                .map_err(|e| CliError::input(path, format!("subgroupoids `{a}` and `{b}`: {e}")))?;
            Ok(Entry::consistency(a, b, &r))
        })
        .collect()
}

fn invariance(
    model: &Model,
    functions: &[String],
    transformations: &[String],
    unitarity: bool,
    method: Method,
) -> Result<Vec<Entry>, CliError> {
    let fs = functions
        .iter()
        .enumerate()
        .map(|(i, n)| model.function_named(n, &format!("command.functions[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    for (j, tn) in transformations.iter().enumerate() {
        let path = format!("command.transformations[{j}]");
        let t = model.transformation_named(tn, &path)?;
        for (fname, f) in functions.iter().zip(&fs) {
            let r = invariance_report(&model.alphabet, f, t, method)
                .map_err(|e| CliError::input(&path, format!("function `{fname}`: {e}")))?;
            out.push(Entry::invariance("integral", fname, None, tn, &r));
        }
        if unitarity {
            for (fname, f) in functions.iter().zip(&fs) {
                for (hname, h) in functions.iter().zip(&fs) {
                    let r = unitarity_report(&model.alphabet, f, h, t, method)
                        .map_err(|e| CliError::input(&path, format!("functions `{fname}`, `{hname}`: {e}")))?;
                    out.push(Entry::invariance("unitarity", fname, Some(hname), tn, &r));
                }
            }
        }
    }
    Ok(out)
}

/// Exact entries must be within `1e-12` of the Kronecker delta; sampled
/// entries within three standard errors.
pub fn is_orthonormal(matrix: &[Vec<IntegralEstimate>]) -> bool {
    matrix.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, e)| {
            let delta = Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0);
            if e.method.is_exact() {
                (e.mean - delta).norm() <= 1e-12
            } else {
                e.compatible_with_value(delta)
            }
        })
    })
}

fn gram(model: &Model, names: &[String], expect_orthonormal: bool, method: Method) -> Result<Entry, CliError> {
    let fs = names
        .iter()
        .enumerate()
        .map(|(i, n)| model.function_named(n, &format!("command.functions[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let m = gram_matrix(&fs, method).map_err(|e| CliError::input("command.functions", e))?;
    let orthonormal = is_orthonormal(&m);
    Ok(Entry::Gram {
        functions: names.to_vec(),
        matrix: m.iter().map(|row| row.iter().map(Into::into).collect()).collect(),
        orthonormal,
        pass: orthonormal || !expect_orthonormal,
    })
}

fn reconstruct(
    model: &Model,
    charts: &BTreeMap<String, Vec<scenario::ElementSpec>>,
) -> Result<Entry, CliError> {
    let mut names = Vec::with_capacity(charts.len());
    let mut family = Vec::with_capacity(charts.len());
    for (name, values) in charts {
        let path = format!("command.charts.{name}");
        let l = model.subgroupoid(name, &path)?.clone();
        let values = values
            .iter()
            .enumerate()
            .map(|(i, v)| model.element(v, &format!("{path}[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        if values.len() != l.len() {
            return Err(CliError::input(path, format!("{} values for {} generators", values.len(), l.len())));
        }
        let chart = Chart::new(model.group, values).map_err(|e| CliError::input(&path, e))?;
        names.push(name.clone());
        family.push((l, chart));
    }
    match reconstruct_from_family(&model.alphabet, &family).map_err(|e| CliError::input("command.charts", e))? {
        Reconstruction::Connection(conn) => Ok(Entry::Reconstruct {
            consistent: true,
            connection: Some(
                model
                    .alphabet
                    .atoms()
                    .map(|(id, atom)| (atom.name.clone(), (&conn.values()[id.0]).into()))
                    .collect(),
            ),
            coarse: None,
            fine: None,
        }),
        Reconstruction::Inconsistent { coarse, fine } => Ok(Entry::Reconstruct {
            consistent: false,
            connection: None,
            coarse: Some(names[coarse].clone()),
            fine: Some(names[fine].clone()),
        }),
    }
}
