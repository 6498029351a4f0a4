use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use farside::scenario::{self, ScenarioConfig, BUILTINS};
use farside::{Error, Result};

/// Laser power beaming from EML2 to the lunar far side.
#[derive(Debug, Parser)]
#[command(name = "farside", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coverage timeline and worst-sample per-cell dump.
    Coverage(RunArgs),
    /// Per-satellite Earth and ground-station visibility trace.
    Visibility(RunArgs),
    /// Analytic vs Monte Carlo CDF of the harvested power.
    PowerCdf(RunArgs),
    /// Check a configuration; exits 0 only if there are no errors or warnings.
    Validate(Source),
    /// Print the builtin scenarios.
    ListScenarios,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// TOML scenario file.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Builtin scenario name.
    #[arg(long, value_name = "NAME")]
    scenario: Option<String>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    source: Source,
    /// Output directory (default: config `output_dir`, else out/<name>).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads (default: all hardware threads).
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Overrides the pointing seed.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
}

fn load(source: &Source) -> Result<ScenarioConfig> {
    match (&source.config, &source.scenario) {
        (Some(path), _) => ScenarioConfig::from_path(path),
        (None, Some(name)) => scenario::builtin(name),
        (None, None) => unreachable!("clap enforces one source"),
    }
}

type Runner = fn(&ScenarioConfig, &Path) -> Result<scenario::RunSummary>;

fn run(args: &RunArgs, runner: Runner) -> Result<()> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.into())
            .build_global()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let mut cfg = load(&args.source)?;
    if let Some(seed) = args.seed {
        cfg.pointing.seed = seed;
    }
    let dir = scenario::output_dir(&cfg, args.out.as_deref());
    let summary = runner(&cfg, &dir)?;
    let json = serde_json::to_string_pretty(&summary).map_err(|e| Error::Serialize(e.to_string()))?;
    println!("{json}");
    eprintln!("wrote {}", dir.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Coverage(a) => run(a, scenario::run_coverage),
        Command::Visibility(a) => run(a, scenario::run_visibility),
        Command::PowerCdf(a) => run(a, scenario::run_power_cdf),
        Command::Validate(source) => match load(source) {
            Ok(cfg) => {
                let report = scenario::validate(&cfg);
                print!("{report}");
                return ExitCode::from(if report.is_clean() { 0 } else { 1 });
            }
            Err(e) => Err(e),
        },
        Command::ListScenarios => {
            for b in BUILTINS {
                println!("{:<24} {:<11} {}", b.name, b.command, b.description);
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
