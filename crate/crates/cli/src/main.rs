use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wavefront::runner::{run_random_suite_with, run_scenario, write_atomic, Check, Mode, Scenario};

#[derive(Parser)]
#[command(name = "wavefront", version, about = "Front tracking and L1 stability checks for scalar conservation laws")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory (overrides the scenario's `out`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks listed in one scenario file.
    Run { scenario: PathBuf },
    /// Randomized Burgers suite.
    Suite {
        #[arg(short, long, default_value_t = 20)]
        n: usize,
    },
    /// h-refinement study over the scenario's `h` list.
    Sweep { scenario: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Float,
    Rational,
}

fn load(path: &PathBuf, cli: &Cli) -> Result<Scenario, wavefront::Error> {
    let mut sc = Scenario::load(path)?;
    if let Some(m) = cli.mode {
        sc.mode = match m {
            ModeArg::Float => Mode::Float,
            ModeArg::Rational => Mode::Rational,
        };
    }
    if let Some(t) = cli.tolerance {
        sc.tolerance = t;
    }
    if let Some(s) = cli.seed {
        sc.seed = s;
    }
    Ok(sc)
}

fn run(cli: &Cli) -> Result<bool, wavefront::Error> {
    match &cli.command {
        Command::Run { scenario } => {
            let sc = load(scenario, cli)?;
            let outcome = run_scenario(&sc, cli.out.as_deref())?;
            for c in &outcome.checks {
                println!("{:<18} {}  {}", c.check.as_str(), if c.passed { "pass" } else { "FAIL" }, c.file.display());
            }
            Ok(outcome.passed)
        }
        Command::Sweep { scenario } => {
            let mut sc = load(scenario, cli)?;
            sc.checks = vec![Check::Theorem31, Check::LimitStudy];
            let outcome = run_scenario(&sc, cli.out.as_deref())?;
            for c in &outcome.checks {
                println!("{:<18} {}  {}", c.check.as_str(), if c.passed { "pass" } else { "FAIL" }, c.file.display());
            }
            Ok(outcome.passed)
        }
        Command::Suite { n } => {
            let summary = run_random_suite_with(*n, cli.seed.unwrap_or(0), cli.tolerance.unwrap_or(1e-8))?;
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            let path = dir.join("suite_summary.json");
            write_atomic(&path, &summary.to_json())?;
            println!("{}/{} scenarios passed  {}", summary.passes, summary.n, path.display());
            Ok(summary.failures == 0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
