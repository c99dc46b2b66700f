use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::Parser;

use swiptlink_cli::config_file::{Mode, RunConfig};
use swiptlink_cli::run::{
    calibrate_transmit_power, run_optimize, run_outage_check, run_sweep, run_validate,
    ReferenceTargets, SNR_WINDOW_DB,
};

/// Link-level simulator for a secure OFDM NOMA downlink with wireless
/// power transfer: parameter sweeps, constrained max-min optimization,
/// invariant self-checks, and outage-approximation validation.
#[derive(Parser, Debug)]
#[command(name = "swiptlink", version)]
struct Cli {
    /// Run configuration file (flat key-value with sections).
    #[arg(long)]
    config: PathBuf,

    /// Override the config file's mode.
    #[arg(long, value_parser = ["sweep", "optimize", "validate", "outage-check"])]
    mode: Option<String>,

    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Override the Monte Carlo trials per point.
    #[arg(long)]
    trials: Option<u64>,

    /// Override the output directory.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Replace P_t with the value calibrated to the midpoint of the
    /// near-user SNR window (optionally "LO:HI" in dB, default 27:45).
    #[arg(long, value_name = "LO:HI", num_args = 0..=1, default_missing_value = "")]
    calibrate_snr: Option<String>,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    let mut run = RunConfig::from_file(&cli.config)?;

    if let Some(mode) = &cli.mode {
        run.mode = Mode::parse(mode)?;
    }
    if let Some(seed) = cli.seed {
        run.seed = seed;
    }
    if let Some(trials) = cli.trials {
        run.trials = trials;
    }
    if let Some(out) = cli.out {
        run.out_dir = out;
    }
    if let Some(window) = &cli.calibrate_snr {
        let (lo, hi) = parse_window(window)?;
        let p_t = calibrate_transmit_power(&run.system, lo, hi);
        eprintln!("calibrated P_t = {p_t:.6e} W (near-user SNR window {lo}..{hi} dB)");
        run.system.p_t = p_t;
        // The calibrated power becomes part of the effective config text so
        // output metadata reflects it.
        run.canonical
            .push_str(&format!("calibrated.P_t={p_t:e}\n"));
    }

    match run.mode {
        Mode::Sweep => {
            let rows = run_sweep(&run)?;
            eprintln!(
                "sweep: {} rows -> {}",
                rows.len(),
                run.out_dir.join("sweep.csv").display()
            );
        }
        Mode::Optimize => {
            let output = run_optimize(&run, Some(ReferenceTargets::baseline()))?;
            let best = output.result.best();
            println!(
                "best: rho={} theta_g={} beta_u={} beta_g={} N_u={} N_g={} -> objective {:.4} (feasible: {})",
                best.tx.rho,
                best.tx.theta_g,
                best.tx.beta_u,
                best.tx.beta_g,
                best.tx.n_u,
                best.tx.n_g,
                best.objective,
                best.feasible
            );
            eprintln!(
                "optimize: {} points ({} simulated) in {} ms -> {}",
                output.result.all_points.len(),
                output.result.points_simulated,
                output.result.wall_ms,
                run.out_dir.join("grid.csv").display()
            );
            if let Some(report) = &output.deviation_report {
                eprintln!("deviation report written to {}", report.display());
            }
        }
        Mode::Validate => {
            let results = run_validate(&run);
            let mut failed = false;
            for r in &results {
                println!(
                    "{} {}: {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                );
                failed |= !r.passed;
            }
            if failed {
                return Ok(ExitCode::FAILURE);
            }
        }
        Mode::OutageCheck => {
            let rows = run_outage_check(&run)?;
            let worst = rows.iter().map(|r| r.abs_diff).fold(0.0f64, f64::max);
            println!("outage-check: {} rows, max |closed - oracle| = {worst:.3e}", rows.len());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_window(s: &str) -> Result<(f64, f64)> {
    if s.is_empty() {
        return Ok(SNR_WINDOW_DB);
    }
    let Some((lo, hi)) = s.split_once(':') else {
        bail!("expected LO:HI in dB, got '{s}'");
    };
    Ok((lo.trim().parse()?, hi.trim().parse()?))
}
