use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use cachenet::config::keys_help;
use cachenet::{exit, run, CliError, ConfigError, Experiment, ExperimentConfig, Settings};
use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::{CommandFactory, FromArgMatches, Parser};

/// Closed forms, Monte Carlo validation and deployment optimization for
/// cache-aided two-tier cellular networks.
#[derive(Debug, Parser)]
#[command(name = "cachenet", version)]
struct Args {
    /// Experiment to run; overrides `experiment` in the config.
    #[arg(value_parser = PossibleValuesParser::new(Experiment::NAMES).map(|s| s.parse::<Experiment>().expect("listed name")))]
    experiment: Option<Experiment>,
    /// Configuration file; all keys take their defaults when omitted.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Output directory (overrides `out_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Monte Carlo seed (overrides `seed`).
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo trials per cell (overrides `trials`).
    #[arg(long)]
    trials: Option<u64>,
    /// Single budget in $/m² (overrides the `budget` list).
    #[arg(long)]
    budget: Option<f64>,
    /// Also write the interferer layout of this trial index.
    #[arg(long, value_name = "TRIAL")]
    dump_trial: Option<u64>,
}

fn load(args: &Args) -> Result<ExperimentConfig, CliError> {
    let mut settings = match &args.config {
        Some(path) => read_settings(path)?,
        None => Settings::default(),
    };
    if let Some(out) = &args.out {
        settings.set("out_dir", out.display().to_string())?;
    }
    if let Some(seed) = args.seed {
        settings.set("seed", seed.to_string())?;
    }
    if let Some(trials) = args.trials {
        settings.set("trials", trials.to_string())?;
    }
    if let Some(budget) = args.budget {
        settings.set("budget", budget.to_string())?;
    }
    Ok(ExperimentConfig::from_settings(&settings)?)
}

fn read_settings(path: &Path) -> Result<Settings, ConfigError> {
    let text = fs::read_to_string(path).map_err(|e| ConfigError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    if text.trim().is_empty() {
        return Err(ConfigError::Empty {
            path: path.display().to_string(),
        });
    }
    Settings::parse(&text)
}

fn main() -> ExitCode {
    let command = Args::command().after_long_help(keys_help());
    let args = match Args::from_arg_matches(&command.get_matches()) {
        Ok(a) => a,
        Err(e) => e.exit(),
    };

    let outcome = load(&args).and_then(|config| {
        let experiment = args.experiment.or(config.experiment).ok_or(CliError::NoExperiment)?;
        let started = Instant::now();
        let report = run(&config, experiment, args.dump_trial)?;
        for file in &report.files {
            println!("{}", file.display());
        }
        if let Some(v) = &report.validation {
            for &(policy, passed, total) in &v.policies {
                eprintln!("{}: {passed}/{total} cells within band", policy.name());
            }
        }
        eprintln!("{experiment} finished in {:.1} s", started.elapsed().as_secs_f64());
        Ok(report.exit_code())
    });

    match outcome {
        Ok(code) => {
            if code == exit::VALIDATION {
                eprintln!("validation failed");
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("cachenet: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
