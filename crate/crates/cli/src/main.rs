use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rational_feast::analysis::{
    factor_report, gap_from_r, table_csv, table_one, zolotarev_error_bounds, zolotarev_r_from_g,
};
use rational_feast::feast::{feast_solve, FeastConfig, SpectralInterval};
use rational_feast::filters::{FilterKind, FilterSpec, RationalFilter, Shape};
use rational_feast::linalg::{load_matrix_market, HermitianPencil};
use rational_feast::loadbalance::{plan_partition, PlanOptions};
use rational_feast::{json, Error};

const EXIT_NUMERIC: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

/// Rational filter design, convergence-factor tables and FEAST eigensolves.
#[derive(Debug, Parser)]
#[command(name = "rational-feast", version)]
struct Cli {
    /// Worker threads for the shifted solves (default: all cores).
    /// RATIONAL_FEAST_THREADS overrides this flag.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a filter, write it as JSON and print a summary.
    FilterDesign(FilterDesignArgs),
    /// Worst-case convergence factors for every (G, m) pair, as CSV.
    FactorTable(FactorTableArgs),
    /// Solve a Hermitian pencil for the eigenpairs inside an interval.
    Solve(SolveArgs),
    /// Partition an interval into parts covered by translated Zolotarev filters.
    Plan(PlanArgs),
}

#[derive(Debug, Args)]
struct FilterArgs {
    /// gauss, trapezoid or zolotarev.
    #[arg(long, default_value = "zolotarev")]
    kind: FilterKind,
    /// Half-degree: the filter has 2m poles.
    #[arg(long, default_value_t = 8)]
    m: usize,
    /// S for gauss/trapezoid ("inf" allowed), R for zolotarev.
    #[arg(long)]
    shape: Option<Shape>,
    /// Zolotarev only: gap parameter G, converted to R.
    #[arg(long, conflicts_with = "shape")]
    gap: Option<f64>,
}

impl FilterArgs {
    fn spec(&self) -> Result<FilterSpec, Error> {
        let shape = match (self.kind, self.shape, self.gap) {
            (FilterKind::Zolotarev, _, Some(g)) => Shape::Finite(zolotarev_r_from_g(g)?),
            (_, _, Some(_)) => {
                return Err(Error::Config(
                    "--gap only applies to zolotarev filters".into(),
                ));
            }
            (_, Some(s), None) => s,
            (FilterKind::Zolotarev, None, None) => Shape::Finite(1e6),
            (_, None, None) => Shape::Infinite,
        };
        FilterSpec::new(self.kind, self.m, shape)
    }
}

#[derive(Debug, Args)]
struct FilterDesignArgs {
    #[command(flatten)]
    filter: FilterArgs,
    /// Output JSON path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct FactorTableArgs {
    /// Comma-separated gap parameters.
    #[arg(long = "G", value_delimiter = ',', num_args = 1.., required = true)]
    g: Vec<f64>,
    /// Comma-separated half-degrees.
    #[arg(long = "m", value_delimiter = ',', num_args = 1.., required = true)]
    m: Vec<usize>,
    /// Output CSV path (stdout when omitted). A full-precision JSON copy
    /// is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Matrix Market file for A.
    #[arg(long = "A")]
    a: PathBuf,
    /// Matrix Market file for B (identity when omitted).
    #[arg(long = "B")]
    b: Option<PathBuf>,
    /// Search interval: lambda_min lambda_max.
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], allow_negative_numbers = true, required = true)]
    interval: Vec<f64>,
    #[command(flatten)]
    filter: FilterArgs,
    /// Subspace size.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 20)]
    max_iter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report JSON path.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Residual trace CSV path (default: next to the report, `<stem>.trace.csv`).
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PlanArgs {
    /// Global interval: lambda_min lambda_max.
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], allow_negative_numbers = true, required = true)]
    interval: Vec<f64>,
    /// Number of parts.
    #[arg(long)]
    parts: usize,
    #[arg(long)]
    m: usize,
    /// Zolotarev range parameter.
    #[arg(long = "R", conflicts_with = "gap")]
    r: Option<f64>,
    /// Gap parameter G, converted to R.
    #[arg(long)]
    gap: Option<f64>,
    /// Estimated eigenvalue count per part (default: 0 for every part).
    #[arg(long, value_delimiter = ',')]
    counts: Option<Vec<usize>>,
    /// Interior breakpoints; equal-width parts when omitted.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    breakpoints: Option<Vec<f64>>,
    /// Widen each owned part by this fraction of its width on both sides.
    #[arg(long, default_value_t = 0.0)]
    overlap: f64,
    /// Output JSON path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. }
            | Error::InvalidSpec(_)
            | Error::DimensionMismatch(_)
            | Error::NotHermitian(_)
            | Error::NotPositiveDefinite { .. }
            | Error::Parse { .. }
            | Error::Config(_)
            | Error::Io(_)
            | Error::Json(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads(cli.threads) {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_USAGE);
    }
    let outcome = match cli.command {
        Command::FilterDesign(args) => filter_design(args).map(|()| true),
        Command::FactorTable(args) => factor_table(args).map(|()| true),
        Command::Solve(args) => solve(args),
        Command::Plan(args) => plan(args).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_NOT_CONVERGED),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}

fn configure_threads(flag: Option<usize>) -> Result<(), String> {
    let threads = match std::env::var("RATIONAL_FEAST_THREADS") {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
            format!("RATIONAL_FEAST_THREADS must be a non-negative integer, got {v:?}")
        })?),
        Err(_) => flag,
    };
    if let Some(n) = threads.filter(|&n| n > 0) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn filter_design(args: FilterDesignArgs) -> Result<(), Failure> {
    let spec = args.filter.spec()?;
    let filter = spec.build()?;
    filter.write_json(&args.out)?;
    let mut line = format!(
        "{} m={} shape={}: {} poles, r(-1)={:.6} r(1)={:.6}",
        spec.kind,
        spec.m,
        spec.shape,
        filter.poles().len(),
        filter.eval_real(-1.0),
        filter.eval_real(1.0)
    );
    if spec.kind == FilterKind::Zolotarev {
        let g = gap_from_r(spec.shape.value())?;
        let (lo, hi) = zolotarev_error_bounds(spec.m, g)?;
        let report = factor_report(&filter, g)?;
        line.push_str(&format!(
            ", G={g:.6}, E' bounds [{lo:.3e}, {hi:.3e}], factor {:.3e}",
            report.factor_worst
        ));
    }
    println!("{line}");
    Ok(())
}

fn factor_table(args: FactorTableArgs) -> Result<(), Failure> {
    let rows = table_one(&args.g, &args.m)?;
    let csv = table_csv(&rows);
    match args.out {
        Some(path) => {
            std::fs::write(&path, csv).map_err(Error::from)?;
            json::write_file(path.with_extension("json"), &rows)?;
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn interval_from(values: &[f64]) -> Result<SpectralInterval, Error> {
    SpectralInterval::new(values[0], values[1])
}

fn load_pencil(a: &Path, b: Option<&Path>) -> Result<HermitianPencil, Error> {
    let a = load_matrix_market(a)?;
    let b = b.map(load_matrix_market).transpose()?;
    HermitianPencil::new(a, b.map(Into::into))
}

fn solve(args: SolveArgs) -> Result<bool, Failure> {
    let interval = interval_from(&args.interval)?;
    let filter: RationalFilter = args.filter.spec()?.build()?;
    let pencil = load_pencil(&args.a, args.b.as_deref())?;
    let config = FeastConfig {
        filter,
        subspace_size: args.n,
        tol: args.tol,
        max_iter: args.max_iter,
        seed: args.seed,
    };
    let report = feast_solve(&pencil, &interval, &config)?;

    if let Some(path) = &args.report {
        std::fs::write(path, report.to_json()?).map_err(Error::from)?;
    }
    let trace_path = args
        .trace
        .clone()
        .or_else(|| args.report.as_ref().map(|p| p.with_extension("trace.csv")));
    if let Some(path) = trace_path {
        std::fs::write(path, report.trace_csv()).map_err(Error::from)?;
    }

    let status = if report.converged {
        "converged"
    } else {
        "not converged"
    };
    println!(
        "{status} after {} iterations: {} eigenpairs in [{}, {}]",
        report.iteration_count(),
        report.eigenpairs.values.len(),
        interval.lambda_min,
        interval.lambda_max
    );
    for (v, r) in report
        .eigenpairs
        .values
        .iter()
        .zip(&report.eigenpairs.residuals)
    {
        println!("{v:.15e}  residual {r:.3e}");
    }
    if let Some(f) = report.observed_factor {
        println!("observed contraction factor {f:.3e}");
    }
    Ok(report.converged)
}

fn plan(args: PlanArgs) -> Result<(), Failure> {
    let global = interval_from(&args.interval)?;
    let r = match (args.r, args.gap) {
        (Some(r), _) => r,
        (None, Some(g)) => zolotarev_r_from_g(g)?,
        (None, None) => 1e6,
    };
    let counts = args.counts.unwrap_or_else(|| vec![0; args.parts]);
    let options = PlanOptions {
        breakpoints: args.breakpoints,
        overlap: args.overlap,
    };
    let plan = plan_partition(&global, args.parts, args.m, r, &counts, &options)?;
    match args.out {
        Some(path) => json::write_file(path, &plan)?,
        None => print!("{}", plan.to_json()?),
    }
    for (i, p) in plan.parts.iter().enumerate() {
        eprintln!(
            "part {i}: owned [{}, {}], search [{:.6}, {:.6}], factor {:.3e}, n {}",
            p.owned.lambda_min,
            p.owned.lambda_max,
            p.interval.lambda_min,
            p.interval.lambda_max,
            p.predicted_factor,
            p.suggested_n
        );
    }
    Ok(())
}
