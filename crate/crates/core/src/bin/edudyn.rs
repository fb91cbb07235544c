use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use edudyn::config::{load_config, presets, ConfigError, ConfigSources, Experiment};
use edudyn::experiment::run;
use edudyn::output::{validate_csv, OutputError};
use edudyn::ModelError;

/// Educational-choice dynamics: simulations, sweeps and stability checks.
#[derive(Parser)]
#[command(name = "edudyn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orbit of the 1-D or 2-D map after a burn-in.
    Simulate(RunArgs),
    /// Map curve and cobweb staircase.
    Cobweb(RunArgs),
    /// Fixed points with slope and classification.
    FixedPoints(RunArgs),
    /// Trapping interval of a unimodal map.
    AbsorbingInterval(RunArgs),
    /// Bifurcation sweep over one parameter.
    Bifurcate(RunArgs),
    /// Schur conditions at every 2-D fixed point.
    Stability(RunArgs),
    /// Switching-intensity thresholds at every 2-D fixed point.
    MuThreshold(RunArgs),
    /// Response of stable fixed points to kappa.
    ComparativeStatics(RunArgs),
    /// Run whatever experiment the configuration names.
    Run(RunArgs),
    /// Re-parse output files against their schemas.
    Validate { files: Vec<PathBuf> },
    /// List bundled presets.
    Presets,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override one key after loading, e.g. `--set model.sigma=12`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

enum Failure {
    Config(ConfigError),
    Model(ModelError),
    Output(String, OutputError),
    Io(String),
    Usage(String),
}

impl Failure {
    fn record(&self, experiment: Option<Experiment>) -> serde_json::Value {
        let (kind, message) = match self {
            Failure::Config(e) => (e.kind(), e.to_string()),
            Failure::Model(e) => (e.kind(), e.to_string()),
            Failure::Output(path, e) => ("invalid_output", format!("{path}: {e}")),
            Failure::Io(m) => ("io", m.clone()),
            Failure::Usage(m) => ("usage", m.clone()),
        };
        json!({
            "error": kind,
            "message": message,
            "experiment": experiment.map(|e| e.name()),
        })
    }
}

fn threads() -> Result<Option<usize>, Failure> {
    match std::env::var("EDUDYN_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Failure::Usage(format!("EDUDYN_THREADS must be a positive integer, got `{v}`"))),
        },
    }
}

fn execute(args: &RunArgs, experiment: Option<Experiment>) -> Result<(), Failure> {
    let sources = ConfigSources {
        preset: args.preset.as_deref(),
        file: args.config.as_deref(),
        experiment,
        overrides: args.set.iter().map(String::as_str).collect(),
    };
    let cfg = load_config(&sources).map_err(Failure::Config)?;
    let files = run(&cfg, threads()?).map_err(Failure::Model)?;
    std::fs::create_dir_all(&args.out)
        .map_err(|e| Failure::Io(format!("{}: {e}", args.out.display())))?;
    for f in files {
        let path = args.out.join(&f.name);
        std::fs::write(&path, &f.contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn validate(files: &[PathBuf]) -> Result<(), Failure> {
    if files.is_empty() {
        return Err(Failure::Usage("no files given".into()));
    }
    for path in files {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{shown}: {e}")))?;
        let v = validate_csv(&text).map_err(|e| Failure::Output(shown.clone(), e))?;
        println!("{shown}: {} rows, schema {}", v.rows, v.schema);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, result) = match &cli.command {
        Command::Simulate(a) => (Some(Experiment::Simulate), execute(a, Some(Experiment::Simulate))),
        Command::Cobweb(a) => (Some(Experiment::Cobweb), execute(a, Some(Experiment::Cobweb))),
        Command::FixedPoints(a) => (Some(Experiment::FixedPoints), execute(a, Some(Experiment::FixedPoints))),
        Command::AbsorbingInterval(a) => (
            Some(Experiment::AbsorbingInterval),
            execute(a, Some(Experiment::AbsorbingInterval)),
        ),
        Command::Bifurcate(a) => (Some(Experiment::Bifurcate), execute(a, Some(Experiment::Bifurcate))),
        Command::Stability(a) => (Some(Experiment::Stability), execute(a, Some(Experiment::Stability))),
        Command::MuThreshold(a) => (Some(Experiment::MuThreshold), execute(a, Some(Experiment::MuThreshold))),
        Command::ComparativeStatics(a) => (
            Some(Experiment::ComparativeStatics),
            execute(a, Some(Experiment::ComparativeStatics)),
        ),
        Command::Run(a) => (None, execute(a, None)),
        Command::Validate { files } => (None, validate(files)),
        Command::Presets => {
            for (name, summary) in presets() {
                println!("{name:<18} {summary}");
            }
            (None, Ok(()))
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.record(experiment));
            ExitCode::FAILURE
        }
    }
}
