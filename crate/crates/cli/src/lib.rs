//! Command-line front end for `degen-core`.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit code: 0 on success, 1 when a check, oracle or bridge fails, 2 on a
//! usage error. Reports go to standard output (or `--out`) as JSON unless
//! `--csv` is given; diagnostics go to standard error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use degen_core::asymptotics::predict_distinct;
use degen_core::bipartite::{
    condition_4_11, condition_4_1_certificate, condition_5_3, hall_violation_witness,
    maximum_matching, MAX_EXHAUSTIVE_N,
};
use degen_core::linalg::eigenvalues;
use degen_core::models::{
    distinct_witness_for_mask, symmetric_distinct_witness, DistinctMode, MaskedMatrixSample,
};
use degen_core::montecarlo::{
    derive_row_seed, oracle_equivalence_scan, run_experiment, threshold_scan, trial_sample,
    ExperimentReport,
};
use degen_core::polynomial::{discriminant, has_multiple_root, DEFAULT_ROOT_TOL};
use degen_core::scalar::parse_rational;
use degen_core::{
    BipartiteMask, Error, EstimateReport, Model, Polynomial, SimulationConfig, Target,
};

#[derive(Debug, Parser)]
#[command(
    name = "degen",
    version,
    about = "Eigenvalue degeneracy of sparse random matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo estimate for one regime.
    Simulate(SimulateArgs),
    /// Limiting probability of distinct eigenvalues.
    Predict(PredictArgs),
    /// Graph criterion against sampled spectra on every small mask.
    Oracle(OracleArgs),
    /// Exhaustive check of the edge-count thresholds.
    Threshold(ThresholdArgs),
    /// Graph checks on a mask file.
    Graph(GraphArgs),
    /// Discriminant of a monic polynomial.
    Discriminant(DiscriminantArgs),
    /// One simulation per (N, c) pair.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RegimeArgs {
    #[arg(long)]
    pub model: Model,
    /// Diagonal probability, sym model only.
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = Target::Cond41)]
    pub target: Target,
    /// Fixed edge probability instead of (ln N + c)/N.
    #[arg(long)]
    pub p_override: Option<f64>,
    #[arg(long)]
    pub csv: bool,
    /// Keep runtime_seconds in the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub c: f64,
    #[command(flatten)]
    pub regime: RegimeArgs,
    /// Write the matrix of trial 0 in plain text.
    #[arg(long)]
    pub dump_matrix: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated orders.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Comma-separated values of c; a single value applies to every N.
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        default_value = "0"
    )]
    pub c: Vec<f64>,
    #[command(flatten)]
    pub regime: RegimeArgs,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: Model,
    #[arg(long, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long)]
    pub q: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Both models when omitted.
    #[arg(long)]
    pub model: Option<Model>,
    #[arg(long, default_value_t = 3)]
    pub max_n: usize,
    #[arg(long, default_value_t = 25)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exact rational arithmetic instead of floating eigenvalues.
    #[arg(long)]
    pub exact: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long, default_value_t = 4)]
    pub max_n: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Pm,
    Cond41,
    Cond411,
    Cond53,
    Witness,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Mask file: a header `n [sym]`, then n rows of 0/1.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub check: Check,
    /// With `--check witness`, also write the witness matrix in plain text.
    #[arg(long)]
    pub dump_matrix: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct DiscriminantArgs {
    /// a_0,…,a_{n−1} of λⁿ + a_{n−1}λ^{n−1} + … + a_0.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub coeffs: Vec<String>,
    /// Exact rationals such as `-3/4`.
    #[arg(long)]
    pub exact: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or input; exit code 2.
    Usage(String),
    /// A check failed or a computation broke down; exit code 1.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Failure(_) => 1,
            Self::Usage(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(m) | Self::Failure(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::EigenNonConvergence { .. }
            | Error::BridgeDisagreement { .. }
            | Error::OracleDisagreement { .. }
            | Error::ThresholdViolation { .. }
            | Error::InsufficientMoments { .. } => Self::Failure(e.to_string()),
            _ => Self::Usage(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match execute(&cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, stdout: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Simulate(a) => simulate(a, stdout),
        Command::Sweep(a) => sweep(a, stdout),
        Command::Predict(a) => predict(a, stdout),
        Command::Oracle(a) => oracle(a, stdout),
        Command::Threshold(a) => threshold(a, stdout),
        Command::Graph(a) => graph(a, stdout),
        Command::Discriminant(a) => discriminant_cmd(a, stdout),
    }
}

fn emit(text: &str, output: &Output, stdout: &mut dyn Write) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Failure(format!("write failed: {e}"));
    match &output.out {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => writeln!(stdout, "{text}").map_err(io),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn build_config(n: usize, c: f64, seed: u64, r: &RegimeArgs) -> CliResult<SimulationConfig> {
    if r.csv && r.target == Target::Histogram {
        return Err(CliError::Usage(
            "--csv applies to estimate targets, not histogram".into(),
        ));
    }
    Ok(
        SimulationConfig::new(r.model, n, c, r.q, r.trials, seed, r.target)?
            .with_p_override(r.p_override)?,
    )
}

fn run_report(cfg: &SimulationConfig, timing: bool) -> CliResult<ExperimentReport> {
    let mut report = run_experiment(cfg)?;
    if !timing {
        match &mut report {
            ExperimentReport::Estimate(e) => e.runtime_seconds = None,
            ExperimentReport::Histogram(h) => h.runtime_seconds = None,
        }
    }
    Ok(report)
}

fn csv_table<'a>(reports: impl IntoIterator<Item = &'a ExperimentReport>) -> String {
    let mut lines = vec![EstimateReport::CSV_HEADER.to_string()];
    for r in reports {
        if let ExperimentReport::Estimate(e) = r {
            lines.push(e.csv_row());
        }
    }
    lines.join("\n")
}

fn simulate(a: &SimulateArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let cfg = build_config(a.n, a.c, a.regime.seed, &a.regime)?;
    if let Some(path) = &a.dump_matrix {
        write_file(path, &trial_sample(&cfg, 0).dump())?;
    }
    let report = run_report(&cfg, a.regime.timing)?;
    let text = if a.regime.csv {
        csv_table([&report])
    } else {
        to_json(&report)
    };
    emit(&text, &a.output, stdout)
}

/// Pairs (N, c) from the two lists; a list of length one is repeated.
pub fn sweep_pairs(ns: &[usize], cs: &[f64]) -> CliResult<Vec<(usize, f64)>> {
    match (ns.len(), cs.len()) {
        (0, _) | (_, 0) => Err(CliError::Usage(
            "sweep needs at least one (N, c) pair".into(),
        )),
        (_, 1) => Ok(ns.iter().map(|&n| (n, cs[0])).collect()),
        (1, _) => Ok(cs.iter().map(|&c| (ns[0], c)).collect()),
        (a, b) if a == b => Ok(ns.iter().copied().zip(cs.iter().copied()).collect()),
        (a, b) => Err(CliError::Usage(format!(
            "--n has {a} values but --c has {b}"
        ))),
    }
}

fn sweep(a: &SweepArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let pairs = sweep_pairs(&a.n, &a.c)?;
    let configs = pairs
        .iter()
        .enumerate()
        .map(|(row, &(n, c))| {
            build_config(n, c, derive_row_seed(a.regime.seed, row as u64), &a.regime)
        })
        .collect::<CliResult<Vec<_>>>()?;
    let reports = configs
        .iter()
        .map(|cfg| run_report(cfg, a.regime.timing))
        .collect::<CliResult<Vec<_>>>()?;
    let text = if a.regime.csv {
        csv_table(&reports)
    } else {
        to_json(&reports)
    };
    emit(&text, &a.output, stdout)
}

fn predict(a: &PredictArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let q = match (a.model, a.q) {
        (Model::Asym, Some(_)) => {
            return Err(CliError::Usage("--q only applies to --model sym".into()))
        }
        (Model::Sym, None) => return Err(CliError::Usage("--model sym needs --q".into())),
        (_, q) => q.unwrap_or(0.0),
    };
    let p = predict_distinct(a.c, a.model, q)?;
    emit(&to_json(&p), &a.output, stdout)
}

fn oracle(a: &OracleArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let models = match a.model {
        Some(m) => vec![m],
        None => vec![Model::Asym, Model::Sym],
    };
    let mode = if a.exact {
        DistinctMode::Exact
    } else {
        DistinctMode::Numeric
    };
    let summaries = models
        .iter()
        .map(|&m| oracle_equivalence_scan(m, a.max_n, a.samples, a.seed, mode))
        .collect::<Result<Vec<_>, _>>()?;
    let total: u64 = summaries.iter().map(|s| s.total_disagreements()).sum();
    let report = json!({ "summaries": summaries, "total_disagreements": total });
    emit(&to_json(&report), &a.output, stdout)?;
    match summaries.iter().find_map(|s| s.disagreements.first()) {
        Some(mask) => Err(Error::OracleDisagreement { mask: mask.clone() }.into()),
        None => Ok(()),
    }
}

fn threshold(a: &ThresholdArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let levels = (1..=a.max_n)
        .map(threshold_scan)
        .collect::<Result<Vec<_>, _>>()?;
    let holds = levels.iter().all(|l| l.holds());
    let report = json!({ "levels": levels, "holds": holds });
    emit(&to_json(&report), &a.output, stdout)?;
    for l in &levels {
        if let Some(mask) = l.cond41_violations.first() {
            return Err(Error::ThresholdViolation {
                which: "cond41",
                mask: mask.clone(),
            }
            .into());
        }
        if let Some(mask) = l.pm_violations.first() {
            return Err(Error::ThresholdViolation {
                which: "pm",
                mask: mask.clone(),
            }
            .into());
        }
    }
    Ok(())
}

fn write_file(path: &PathBuf, text: &str) -> CliResult<()> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn read_mask(path: &PathBuf) -> CliResult<BipartiteMask> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(text.parse()?)
}

fn witness_json(sample: &MaskedMatrixSample) -> CliResult<Value> {
    let n = sample.n();
    let rows: Vec<Vec<f64>> = (0..n).map(|j| sample.values().row(j).to_vec()).collect();
    let mut ev: Vec<[f64; 2]> = eigenvalues(sample.values())?
        .iter()
        .map(|z| [z.re, z.im])
        .collect();
    ev.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    Ok(json!({ "values": rows, "eigenvalues": ev }))
}

fn graph(a: &GraphArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let g = read_mask(&a.input)?;
    if a.dump_matrix.is_some() && a.check != Check::Witness {
        return Err(CliError::Usage(
            "--dump-matrix needs --check witness".into(),
        ));
    }
    let mut report = json!({ "n": g.n(), "symmetric": g.is_symmetric() });
    let fields = match a.check {
        Check::Pm => {
            let m = maximum_matching(&g);
            let violator = hall_violation_witness(&g, g.n() <= MAX_EXHAUSTIVE_N)?;
            json!({
                "check": "pm",
                "holds": m.is_perfect(),
                "matching": m.pairs().collect::<Vec<_>>(),
                "hall_violator": violator,
            })
        }
        Check::Cond41 => {
            let cert = condition_4_1_certificate(&g);
            json!({
                "check": "cond41",
                "holds": cert.is_some(),
                "removed": cert.as_ref().and_then(|c| c.removed),
                "assignment": cert.map(|c| c.assignment),
            })
        }
        Check::Cond411 => {
            let w = condition_4_11(&g)?;
            json!({ "check": "cond411", "holds": w.is_some(), "witness": w })
        }
        Check::Cond53 => {
            let w = condition_5_3(&g)?;
            json!({ "check": "cond53", "holds": w.is_some(), "witness": w })
        }
        Check::Witness => {
            let sample = if g.is_symmetric() {
                symmetric_distinct_witness(&g)?
            } else {
                distinct_witness_for_mask(&g)?
            };
            if let (Some(path), Some(s)) = (&a.dump_matrix, &sample) {
                write_file(path, &s.dump())?;
            }
            let body = sample.as_ref().map(witness_json).transpose()?;
            json!({ "check": "witness", "holds": sample.is_some(), "witness": body })
        }
    };
    let obj = report.as_object_mut().expect("object");
    obj.extend(fields.as_object().expect("object").clone());
    emit(&to_json(&report), &a.output, stdout)
}

fn discriminant_cmd(a: &DiscriminantArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let report = if a.exact {
        let coeffs = a
            .coeffs
            .iter()
            .map(|t| {
                parse_rational(t).ok_or_else(|| CliError::Usage(format!("bad rational {t:?}")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        let p = Polynomial::new(coeffs)?;
        json!({
            "discriminant": discriminant(&p)?.to_string(),
            "multiple_root": has_multiple_root(&p, 0.0)?,
        })
    } else {
        let coeffs = a
            .coeffs
            .iter()
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("bad number {t:?}")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        let p = Polynomial::new(coeffs)?;
        json!({
            "discriminant": discriminant(&p)?,
            "multiple_root": has_multiple_root(&p, DEFAULT_ROOT_TOL)?,
        })
    };
    emit(&to_json(&report), &a.output, stdout)
}
