//! Command-line front end for the GT aging coefficient.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use gt_core::point_process::{
    estimate_cif, gt_repairable, solve_renewal_equation, VirtualAgeModel,
};
use gt_core::{
    gt_from_sampled_curve, gt_from_step_curve, gt_nonrepairable_with, mcf, nelson_aalen,
    DistributionSpec, Family, GtError, GtOptions, GtResult, PointProcessSpec,
};

pub mod data;
pub mod format;
pub mod tables;

use format::{fmt17, Record};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] GtError),

    #[error("cannot read {path}: {source}")]
    Input { path: PathBuf, source: io::Error },

    #[error("malformed CSV at line {line}: {message}")]
    MalformedCsv { line: u64, message: String },

    #[error("invalid arguments: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    /// 2 for domain and data errors, 1 for I/O failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input { .. } | CliError::Io(_) => 1,
            CliError::Core(_) | CliError::MalformedCsv { .. } | CliError::Invalid(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "gtc",
    version,
    about = "Gini-type aging/rejuvenation coefficient"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// GT coefficient of a parametric lifetime distribution.
    Dist(DistArgs),
    /// Monte-Carlo GT coefficient of a Weibull-based point process.
    Pp(PpArgs),
    /// GT coefficient estimated from recorded failure data.
    Data(DataArgs),
    /// Reproduce a reference table as CSV.
    Tables(TablesArgs),
    /// Cumulative hazard and its equal-area exponential line, as CSV.
    Curve(CurveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Exponential,
    Weibull,
    Gamma,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Exponential => Family::Exponential,
            FamilyArg::Weibull => Family::Weibull,
            FamilyArg::Gamma => Family::Gamma,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DataKind {
    Lifetimes,
    Histories,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum VirtualAgeArg {
    Kijima1,
    #[default]
    Kijima2,
}

impl From<VirtualAgeArg> for VirtualAgeModel {
    fn from(v: VirtualAgeArg) -> Self {
        match v {
            VirtualAgeArg::Kijima1 => VirtualAgeModel::KijimaI,
            VirtualAgeArg::Kijima2 => VirtualAgeModel::KijimaII,
        }
    }
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got `{s}`")),
    }
}

fn nonneg(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a nonnegative number, got `{s}`")),
    }
}

fn unit_interval(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if (0.0..=1.0).contains(&v) => Ok(v),
        _ => Err(format!("expected a number in [0, 1], got `{s}`")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct DistArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// β (Weibull) or k (gamma); ignored for the exponential.
    #[arg(long, value_parser = positive, default_value = "1")]
    pub shape: f64,
    /// α (Weibull), 1/λ (gamma) or 1/rate (exponential).
    #[arg(long, value_parser = positive)]
    pub scale: f64,
    #[arg(long, value_parser = positive)]
    pub horizon: f64,
    #[arg(long, value_parser = positive, default_value = "1e-9")]
    pub quad_tol: f64,
    #[arg(long, value_parser = nonneg, default_value = "0.01")]
    pub class_tol: f64,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Args)]
pub struct PpArgs {
    /// Repair effectiveness factor: 0 renewal, 1 NHPP.
    #[arg(long, value_parser = unit_interval)]
    pub q: f64,
    #[arg(long, value_parser = positive)]
    pub shape: f64,
    #[arg(long, value_parser = positive, default_value = "1")]
    pub scale: f64,
    #[arg(long, value_parser = positive)]
    pub horizon: f64,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(100..))]
    pub reps: u64,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(3..))]
    pub grid: u64,
    /// Master seed; drawn from the clock and echoed when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Add the renewal-equation value (q = 0 only).
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, value_enum, default_value_t)]
    pub virtual_age: VirtualAgeArg,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub kind: DataKind,
    #[arg(long, value_parser = positive)]
    pub horizon: f64,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Args)]
pub struct TablesArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub which: u8,
    /// Monte-Carlo replications for table 3.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(100..))]
    pub reps: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long, value_parser = positive, default_value = "1")]
    pub shape: f64,
    #[arg(long, value_parser = positive)]
    pub scale: f64,
    #[arg(long, value_parser = positive)]
    pub horizon: f64,
    #[arg(long, default_value_t = 101, value_parser = clap::value_parser!(u64).range(2..))]
    pub points: u64,
}

fn result_record(r: &GtResult) -> Record {
    let rec = Record::new()
        .num("c", r.value)
        .num("horizon", r.horizon)
        .text("classification", r.classification.as_str());
    match r.std_error {
        Some(se) => rec.num("std_error", se),
        None => rec,
    }
}

fn emit(out: &mut dyn Write, rec: &Record, format: OutputFormat) -> io::Result<()> {
    match format {
        OutputFormat::Json => writeln!(out, "{}", rec.to_json()),
        OutputFormat::Csv => writeln!(out, "{}", rec.to_csv()),
    }
}

fn clock_seed() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_nanos() as u64)
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Dist(a) => run_dist(a, out),
        Command::Pp(a) => run_pp(a, out),
        Command::Data(a) => run_data(a, out),
        Command::Tables(a) => {
            let csv = match a.which {
                1 => tables::table1()?,
                2 => tables::table2()?,
                _ => tables::table3(a.reps as usize, a.seed)?,
            };
            out.write_all(csv.as_bytes())?;
            Ok(())
        }
        Command::Curve(a) => run_curve(a, out),
    }
}

fn run_dist(a: &DistArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let dist = DistributionSpec::from_scale_shape(a.family.into(), a.scale, a.shape)?;
    let opts = GtOptions {
        quad_tol: a.quad_tol,
        class_tol: a.class_tol,
        ..GtOptions::default()
    };
    let r = gt_nonrepairable_with(&dist, a.horizon, &opts)?;
    emit(out, &result_record(&r), a.format)?;
    Ok(())
}

fn run_pp(a: &PpArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.oracle && a.q != 0.0 {
        return Err(CliError::Invalid(
            "--oracle applies to renewal processes only (--q 0)".into(),
        ));
    }
    let underlying = DistributionSpec::weibull(a.scale, a.shape)?;
    let spec = PointProcessSpec::new(underlying, a.q)?.with_virtual_age(a.virtual_age.into());
    let seed = a.seed.unwrap_or_else(clock_seed);
    let cif = estimate_cif(&spec, a.horizon, a.grid as usize, a.reps as usize, seed)?;
    let r = gt_repairable(&cif)?;
    let mut rec = result_record(&r)
        .int("seed", seed)
        .int("replications", a.reps);
    if a.oracle {
        let curve = solve_renewal_equation(&underlying, a.horizon, tables::RENEWAL_STEPS)?;
        rec = rec.num("oracle_c", gt_from_sampled_curve(&curve)?.value);
    }
    emit(out, &rec, a.format)?;
    Ok(())
}

fn run_data(a: &DataArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let file = File::open(&a.input).map_err(|source| CliError::Input {
        path: a.input.clone(),
        source,
    })?;
    let curve = match a.kind {
        DataKind::Lifetimes => nelson_aalen(&data::read_lifetimes(file, a.horizon)?)?,
        DataKind::Histories => mcf(&data::read_histories(file, a.horizon)?, a.horizon)?,
    };
    let r = gt_from_step_curve(&curve)?;
    emit(out, &result_record(&r), a.format)?;
    Ok(())
}

fn run_curve(a: &CurveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let dist = DistributionSpec::from_scale_shape(a.family.into(), a.scale, a.shape)?;
    let heff = dist.effective_failure_rate(a.horizon)?;
    writeln!(out, "t,H,heff_line")?;
    let n = (a.points - 1) as f64;
    for i in 0..a.points {
        let t = if i == a.points - 1 {
            a.horizon
        } else {
            a.horizon * i as f64 / n
        };
        let h = dist.cumulative_hazard(t)?;
        writeln!(out, "{},{},{}", fmt17(t), fmt17(h), fmt17(heff * t))?;
    }
    Ok(())
}
