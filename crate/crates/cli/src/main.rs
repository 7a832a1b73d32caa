use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use toeplab::{compute, list_experiments, run_experiment, CliError, ComputeRequest, ExperimentReport, RunConfig, Verb};
use toeplab_core::GridConfig;

/// `println!` that ignores a closed stdout.
macro_rules! say {
    ($($t:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

/// Exit code for bad arguments, unknown experiments and invalid configurations.
const USAGE_EXIT: u8 = 3;

#[derive(Parser)]
#[command(name = "toeplab", version, about = "Numerical laboratory for Toeplitz kernels in H²")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct GridArgs {
    /// Number of boundary samples (power of two).
    #[arg(long)]
    grid_size: Option<usize>,
    /// Number of retained Taylor coefficients.
    #[arg(long)]
    truncation: Option<usize>,
    #[arg(long)]
    tol_residual: Option<f64>,
    #[arg(long, default_value_t = toeplab::DEFAULT_SEED)]
    seed: u64,
}

impl GridArgs {
    fn grid(&self) -> GridConfig {
        let mut g = GridConfig::default();
        if let Some(m) = self.grid_size {
            g.grid_size = m;
        }
        if let Some(n) = self.truncation {
            g.truncation = n;
        }
        if let Some(t) = self.tol_residual {
            g.tol_residual = t;
        }
        g
    }
}

#[derive(Subcommand)]
enum Command {
    /// List registered experiments.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Run one experiment and print its report.
    Run {
        id: String,
        #[command(flatten)]
        grid: GridArgs,
        /// Experiment parameter as key=value; repeatable.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, String)>,
        /// Write the JSON report to a file, or `-` for stdout.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Compute on a symbol or function given as a JSON descriptor.
    Compute {
        /// kernel, inner-outer (or factor), crofoot, conjugate, maximal-test
        verb: String,
        #[arg(long)]
        symbol: Option<String>,
        #[arg(long)]
        function: Option<String>,
        /// Point of the disk as `re,im`.
        #[arg(long, value_parser = parse_complex, default_value = "0,0")]
        lambda: Complex64,
        /// Finite-section size for kernel computations.
        #[arg(long, default_value_t = 128)]
        size: usize,
        #[command(flatten)]
        grid: GridArgs,
    },
}

fn parse_param(s: &str) -> Result<(String, String), String> {
    s.split_once('=').map(|(k, v)| (k.to_string(), v.to_string())).ok_or_else(|| format!("expected key=value, got {s:?}"))
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let p = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok(Complex64::new(p(re)?, p(im)?))
}

fn print_summary(r: &ExperimentReport) {
    say!("{} {:?} ({:.3}s)", r.experiment_id, r.status, r.wall_time);
    for (name, m) in &r.metrics {
        let mark = if m.passed { "ok  " } else { "FAIL" };
        say!("  {mark} {name} = {:.6e}  {:?}", m.value, m.bound);
    }
    for n in &r.notes {
        say!("  note: {n}");
    }
}

fn emit(r: &ExperimentReport, json: Option<&PathBuf>) -> Result<(), CliError> {
    match json {
        Some(p) if p.as_os_str() == "-" => say!("{}", r.to_json()),
        Some(p) => {
            std::fs::write(p, r.to_json()).map_err(|e| CliError::ConfigInvalid(format!("{}: {e}", p.display())))?;
            print_summary(r);
        }
        None => print_summary(r),
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<ExperimentReport, CliError> {
    match cli.command {
        Command::List { .. } => unreachable!("handled before execute"),
        Command::Run { id, grid, params, json } => {
            let rc = RunConfig { grid: grid.grid(), seed: grid.seed, params: params.into_iter().collect::<BTreeMap<_, _>>() };
            let r = run_experiment(&id, &rc)?;
            emit(&r, json.as_ref())?;
            Ok(r)
        }
        Command::Compute { verb, symbol, function, lambda, size, grid } => {
            let req = ComputeRequest { verb: verb.parse::<Verb>()?, symbol, function, lambda, size, grid: grid.grid(), seed: grid.seed };
            let r = compute(&req)?;
            say!("{}", r.to_json());
            Ok(r)
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_EXIT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Command::List { json } = cli.command {
        let list = list_experiments();
        let mut out = std::io::stdout().lock();
        if json {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&list).expect("listing serialises"));
        } else {
            for e in list {
                let _ = writeln!(out, "{:<32} {}", e.id, e.description);
            }
        }
        return ExitCode::SUCCESS;
    }
    match execute(cli) {
        Ok(r) => ExitCode::from(r.status.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { USAGE_EXIT } else { 1 })
        }
    }
}
