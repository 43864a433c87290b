//! `crosslate`: synthesis, zero-crossing detection, interferograms,
//! analytic tables, streaming and delay experiments.
//!
//! Every subcommand takes an optional JSON config (`--config`, carrying
//! `"schema": 1`) and `key=value` overrides, prints one `key=value` summary
//! line and exits with 2 on a bad config, 3 on a numerical failure and 1
//! when `--check` finds a violated threshold.

mod commands;
mod config;
mod curves;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::load;
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "crosslate", version, about = "Zero-crossing waveform interferometry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// JSON config file with "schema": 1.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Exit with status 1 when a `check` threshold in the config is violated.
    #[arg(long)]
    check: bool,
    /// Overrides as key=value; dotted keys address nested objects.
    #[arg(value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a waveform. Keys: model.family and model parameters,
    /// samples, dt, seed, output (raw f64 plus .json sidecar), csv.
    Synth(Common),
    /// Detect zero crossings. Keys: input, output (CSV), threshold.
    Crossings(Common),
    /// Empirical crosslation. Keys: input, output (.json exact, else CSV),
    /// half_window, variant (crosslation|up_only|down_only|slew|local_structure),
    /// timing (interpolated|midpoint), exec.
    Crosslate(Common),
    /// Autoference of a waveform and its Hilbert image. Keys: input, output,
    /// half_window, variant (autoference|sign|weighted|slew).
    Autoference(Common),
    /// Complex crosslation envelope, or the delay envelope when `received`
    /// is given. Keys: input, received, output, nyquist_output, half_window,
    /// estimator.
    Envelope(Common),
    /// Power spectral density recovered from the crosslation. Keys: input,
    /// output, half_window, mu.
    Spectrum(Common),
    /// Resolution gains. Keys: family (butterworth|modified_lorentzian),
    /// kappa, gamma or params, empirical, empirical_at, output,
    /// check.expected, check.tolerance.
    Resolution(Common),
    /// Degrees of freedom and expected crossing count. Keys: model,
    /// duration, gamma_star.
    Dof(Common),
    /// Streaming crosslator over raw little-endian f64 samples on stdin;
    /// CSV frames separated by blank lines. Keys: dt, taps, placement,
    /// averaging, frame_every, output. The summary goes to stderr when
    /// frames go to stdout.
    Stream(Common),
    /// Monte-Carlo delay estimation. Keys: experiment (model, duration, dt,
    /// delay, snr_db, trials, estimator, ...), trials_output, report_output,
    /// check.max_below_bound_stderrs.
    DelaySim(Common),
    /// Closed-form curves as CSV. Keys: curve (structure_functions,
    /// butterworth_density, butterworth_gain, bandlimited_helix,
    /// bandlimited_envelopes, lorentzian_gain, lorentzian_dof,
    /// lorentzian_helix, lorentzian_envelopes), output, points, range.
    Curves(Common),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let line = match cli.command {
        Command::Synth(c) => commands::synth(load(c.config.as_deref(), &c.overrides)?)?,
        Command::Crossings(c) => commands::crossings(load(c.config.as_deref(), &c.overrides)?)?,
        Command::Crosslate(c) => commands::crosslate(load(c.config.as_deref(), &c.overrides)?)?,
        Command::Autoference(c) => commands::autoference(load(c.config.as_deref(), &c.overrides)?)?,
        Command::Envelope(c) => commands::envelope(load(c.config.as_deref(), &c.overrides)?)?,
        Command::Spectrum(c) => commands::spectrum(load(c.config.as_deref(), &c.overrides)?)?,
        Command::Resolution(c) => commands::resolution(load(c.config.as_deref(), &c.overrides)?, c.check)?,
        Command::Dof(c) => commands::dof(load(c.config.as_deref(), &c.overrides)?)?,
        Command::Stream(c) => {
            let (line, to_stderr) = commands::stream(load(c.config.as_deref(), &c.overrides)?, std::io::stdin().lock())?;
            if to_stderr {
                eprintln!("{line}");
                return Ok(());
            }
            line
        }
        Command::DelaySim(c) => commands::delay_sim(load(c.config.as_deref(), &c.overrides)?, c.check)?,
        Command::Curves(c) => {
            let cfg: curves::CurvesConfig = load(c.config.as_deref(), &c.overrides)?;
            let (text, rows) = curves::tabulate(&cfg)?;
            crosslation::io::write_text(&cfg.output, &text)?;
            format!("command=curves curve={} rows={rows} output={}", curves::name(cfg.curve), cfg.output.display())
        }
    };
    println!("{line}");
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("crosslate: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
