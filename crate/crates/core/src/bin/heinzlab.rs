use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{error, info};

use heinzlab::campaign::eval::{run_eval, EvalInput, EvalOp, Method};
use heinzlab::campaign::{run_campaign, CampaignConfig, Suite};
use heinzlab::inequality::search::write_violations_csv;
use heinzlab::inequality::{reference_counterexample, reference_pair, GapFunction, NuGrid};
use heinzlab::linalg::Field;
use heinzlab::monotone::MonotoneFunctionSpec;
use heinzlab::HeinzError;

const EXIT_FAILURES: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_BRACKET: u8 = 4;

/// Heinz means and matrix inequality verification harness.
#[derive(Parser)]
#[command(name = "heinzlab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite over seeded random ensembles.
    Verify(CampaignArgs),
    /// Scan the 3x3 counterexample and locate the edge of its violation window.
    Counterexample {
        #[arg(long, default_value_t = 21)]
        grid_points: usize,
        /// Write the scan CSV here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate one operation on matrices read from a JSON file.
    Eval(EvalArgs),
    /// Search for pairs violating the per-index geometric/Heinz comparison.
    Search(CampaignArgs),
}

#[derive(Args)]
struct CampaignArgs {
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    suite: Option<Suite>,
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    nu_grid_points: Option<usize>,
    #[arg(long, value_enum)]
    field: Option<FieldArg>,
    /// Matrix rank for the search ensemble (default: full).
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    j_max: Option<usize>,
    #[arg(long)]
    refine_steps: Option<usize>,
    /// Use the built-in 3x3 pair as the first search trial.
    #[arg(long)]
    inject_reference: bool,
    /// Report path; a `.csv` companion is written next to it.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Real,
    Complex,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    Heinz,
    Power,
    Norm,
    Monotone,
}

#[derive(Args)]
struct EvalArgs {
    /// JSON file with `A` and optionally `B`, `X`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    op: OpArg,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    /// `ky_fan:K`, `schatten:P`, `operator` or `trace`.
    #[arg(long)]
    norm: Option<String>,
    /// Monotone function as inline JSON, or `@path` to read it from a file.
    #[arg(long)]
    function: Option<String>,
    #[arg(long, value_enum, default_value = "spectral")]
    method: MethodArg,
    #[arg(long, default_value_t = 1e-6)]
    quadrature_rel: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Spectral,
    Integral,
}

/// Exit code for an error from the library.
fn error_code(e: &HeinzError) -> u8 {
    match e {
        HeinzError::Config(_)
        | HeinzError::Schema(_)
        | HeinzError::DimensionMismatch { .. }
        | HeinzError::NotSquare { .. }
        | HeinzError::NonFinite
        | HeinzError::NotPsd { .. }
        | HeinzError::ParamOutOfRange { .. }
        | HeinzError::KyFanIndex { .. }
        | HeinzError::InvalidFunction(_)
        | HeinzError::SingularNegativePower { .. } => EXIT_CONFIG,
        HeinzError::Bracket { .. } => EXIT_BRACKET,
        HeinzError::Convergence { .. } | HeinzError::Singular { .. } | HeinzError::Quadrature { .. } => EXIT_NUMERICAL,
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<HeinzError> for Failure {
    fn from(e: HeinzError) -> Self {
        Self {
            code: error_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: format!("i/o error: {e}"),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn campaign_config(args: &CampaignArgs, default_suite: Suite) -> Result<CampaignConfig, HeinzError> {
    let mut cfg = match &args.config {
        Some(path) => CampaignConfig::from_file(path)?,
        None => CampaignConfig {
            suite: default_suite,
            ..CampaignConfig::default()
        },
    };
    if let Some(s) = args.suite {
        cfg.suite = s;
    }
    if let Some(d) = &args.dims {
        cfg.dims = d.clone();
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(n) = args.nu_grid_points {
        cfg.nu_grid_points = n;
    }
    if let Some(f) = args.field {
        cfg.field = match f {
            FieldArg::Real => Field::Real,
            FieldArg::Complex => Field::Complex,
        };
    }
    if args.rank.is_some() {
        cfg.search.rank = args.rank;
    }
    if args.j_max.is_some() {
        cfg.search.j_max = args.j_max;
    }
    if let Some(r) = args.refine_steps {
        cfg.search.refine_steps = r;
    }
    if args.inject_reference {
        cfg.search.inject_reference = true;
    }
    if args.output.is_some() {
        cfg.output_path = args.output.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn companion(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn cmd_verify(args: &CampaignArgs) -> CmdResult {
    let cfg = campaign_config(args, Suite::All)?;
    let report = run_campaign(&cfg)?;
    info!(
        "{} checks, {} failures, wall time {:.3}s",
        report.total(),
        report.failures(),
        report.wall_time.as_secs_f64()
    );
    match &cfg.output_path {
        Some(path) => {
            fs::write(path, report.to_json())?;
            let mut csv = Vec::new();
            report.write_checks_csv(&mut csv)?;
            fs::write(companion(path, ".csv"), csv)?;
            if !report.violations.is_empty() {
                let mut v = Vec::new();
                report.write_violations_csv(&mut v)?;
                fs::write(companion(path, ".violations.csv"), v)?;
            }
        }
        None => io::stdout().write_all(report.to_json().as_bytes())?,
    }
    for c in report.checks.iter().filter(|c| c.fail > 0) {
        error!("{}/{}: {} of {} failed", c.suite, c.name, c.fail, c.total);
    }
    Ok(if report.passed() { 0 } else { EXIT_FAILURES })
}

fn cmd_search(args: &CampaignArgs) -> CmdResult {
    let mut cfg = campaign_config(args, Suite::Search)?;
    cfg.suite = Suite::Search;
    let report = run_campaign(&cfg)?;
    info!(
        "{} violations, wall time {:.3}s",
        report.violations.len(),
        report.wall_time.as_secs_f64()
    );
    let mut csv = Vec::new();
    write_violations_csv(&report.violations, &mut csv)?;
    match &cfg.output_path {
        Some(path) => fs::write(path, csv)?,
        None => io::stdout().write_all(&csv)?,
    }
    Ok(0)
}

fn cmd_counterexample(grid_points: usize, output: Option<&Path>) -> CmdResult {
    if grid_points < 3 {
        return Err(HeinzError::Config(format!("grid_points = {grid_points}, need at least 3")).into());
    }
    let report = reference_counterexample(&NuGrid::uniform(grid_points)?)?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    match output {
        Some(path) => fs::write(path, csv)?,
        None => io::stdout().write_all(&csv)?,
    }
    let (a, b) = reference_pair();
    let g_005 = GapFunction::new(&a, &b, 2)?.eval(0.05)?;
    let in_window = report.threshold > 0.12 && report.threshold < 0.14;
    info!("threshold {:.6}, g(0.05) = {g_005:e}", report.threshold);
    if in_window && g_005 < 0.0 {
        Ok(0)
    } else {
        error!("threshold outside (0.12, 0.14) or no violation at 0.05");
        Ok(EXIT_FAILURES)
    }
}

fn parse_function(text: &str) -> Result<MonotoneFunctionSpec, Failure> {
    let json = match text.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)?,
        None => text.to_owned(),
    };
    serde_json::from_str(&json).map_err(|e| HeinzError::Schema(format!("function: {e}")).into())
}

fn missing(flag: &str) -> Failure {
    HeinzError::Config(format!("--{flag} is required for this operation")).into()
}

fn cmd_eval(args: &EvalArgs) -> CmdResult {
    let text = fs::read_to_string(&args.input)?;
    let input = EvalInput::parse(&text)?;
    let op = match args.op {
        OpArg::Heinz => EvalOp::Heinz {
            nu: args.nu.ok_or_else(|| missing("nu"))?,
        },
        OpArg::Power => EvalOp::Power {
            p: args.p.ok_or_else(|| missing("p"))?,
        },
        OpArg::Norm => EvalOp::Norm {
            norm: args.norm.clone().ok_or_else(|| missing("norm"))?,
        },
        OpArg::Monotone => EvalOp::Monotone {
            function: parse_function(args.function.as_deref().ok_or_else(|| missing("function"))?)?,
            method: match args.method {
                MethodArg::Spectral => Method::Spectral,
                MethodArg::Integral => Method::Integral,
            },
            quadrature_rel: args.quadrature_rel,
        },
    };
    let out = run_eval(&input, &op)?;
    let mut stdout = io::stdout();
    serde_json::to_writer_pretty(&mut stdout, &out).map_err(io::Error::from)?;
    writeln!(stdout)?;
    Ok(0)
}

fn configure_threads() {
    let Ok(value) = std::env::var("HEINZLAB_THREADS") else {
        return;
    };
    match value.trim().parse::<usize>() {
        Ok(0) => {}
        Ok(n) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                error!("cannot configure {n} threads: {e}");
            }
        }
        Err(_) => error!("ignoring HEINZLAB_THREADS={value:?}: not a non-negative integer"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    configure_threads();
    let result = match &cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Counterexample { grid_points, output } => cmd_counterexample(*grid_points, output.as_deref()),
        Command::Eval(args) => cmd_eval(args),
        Command::Search(args) => cmd_search(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            error!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}
