use std::path::PathBuf;
use std::process::ExitCode;

use bec_decay::RunMode;
use bec_decay_cli::config::{parse_config, preset, ProfileChoice};
use bec_decay_cli::scenario::{run_scenario, RunError, RunOptions};
use clap::{ArgGroup, Parser};

/// Simulates the decay of a trapped Bose condensate and its thermal cloud.
#[derive(Debug, Parser)]
#[command(name = "simulate", version)]
#[command(group(ArgGroup::new("source").required(true).args(["config", "preset"])))]
struct Args {
    /// Run configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in scenario.
    #[arg(long, value_parser = ["fig1", "fig2"])]
    preset: Option<String>,
    /// Run only this mode: full, simple-attribution, simple-literal, pure-condensate or ideal.
    #[arg(long)]
    mode: Option<RunMode>,
    /// Output directory, overriding `output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Append e-folding lifetimes to `lifetimes.csv`.
    #[arg(long)]
    lifetime: bool,
    /// Condensate profile used for the comparison output.
    #[arg(long)]
    profile: Option<ProfileChoice>,
}

fn run(args: Args) -> Result<(), RunError> {
    let config = match (&args.config, &args.preset) {
        (Some(path), _) => parse_config(path)?,
        (None, Some(name)) => preset(name)?,
        (None, None) => unreachable!("clap requires one source"),
    };
    let opts =
        RunOptions { mode_override: args.mode, out_dir: args.out, lifetime: args.lifetime, profile: args.profile };
    let report = run_scenario(&config, &opts)?;
    println!(
        "{}: N_C(0) = {:.4e}, N_T(0) = {:.4e}, T(0) = {:.4} uK",
        config.name,
        report.initial.n_c,
        report.initial.n_t,
        report.initial.temperature * 1e6
    );
    for t in &report.trajectories {
        let lifetime = t.lifetime().map_or_else(|| "not reached".to_string(), |l| format!("{l:.4} s"));
        println!("  {:<18} lifetime {lifetime}, {}", t.mode.label(), t.termination);
    }
    for f in &report.files {
        println!("  wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
