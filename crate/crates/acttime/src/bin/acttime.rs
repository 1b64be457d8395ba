//! Thin command-line front end over the library pipelines.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use acttime::activation::ActivationKind;
use acttime::harness::{self, ExperimentConfig};
use acttime::leakage::distinguish;
use acttime::profile::paper_profiles;
use acttime::trace::TimingTrace;
use acttime::{DelayDistribution, Error, Result};

#[derive(Parser)]
#[command(name = "acttime", version, about = "Activation-function timing side-channel simulator and countermeasure toolkit")]
struct Cli {
    /// Base seed for all campaign randomness.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Experiment configuration file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (default: $ACTTIME_OUT or ./acttime-out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Unprotected timing campaigns and the aggregate summary table.
    Profile,
    /// Derive delay parameters from unprotected traces (from a trace
    /// directory, or from fresh simulated campaigns).
    Calibrate {
        /// Directory of unprotected trace CSVs to pool.
        trace_dir: Option<PathBuf>,
    },
    /// Protected campaigns with the configured delay profile.
    Protect,
    /// Fixed-vs-random TVLA suite, without and with the countermeasure.
    Tvla,
    /// Classify a timing trace by nearest expected activation mean.
    Distinguish {
        /// Trace CSV with the observed timings.
        samples: PathBuf,
        /// Score under the hypothesis that the calibrated
        /// countermeasure is active.
        #[arg(long)]
        protected: bool,
    },
    /// Countermeasure cost report for a network description.
    Overhead {
        /// Network description file (TOML); built-in VGG-19 tail
        /// scenario when omitted.
        #[arg(long)]
        network: Option<PathBuf>,
    },
    /// The full pipeline: profile, calibrate, protect, TVLA, overhead.
    Repro,
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn out_dir(cli: &Cli, config: &ExperimentConfig) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| config.out_dir.clone())
        .or_else(|| std::env::var_os("ACTTIME_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("acttime-out"))
}

fn run(cli: &Cli) -> Result<()> {
    let config = load_config(cli)?;
    let out = out_dir(cli, &config);
    match &cli.command {
        Command::Profile => {
            let result = harness::run_figure1(&config, &out)?;
            print_summary(&result.summary);
        }
        Command::Calibrate { trace_dir } => {
            let report = match trace_dir {
                Some(dir) => harness::calibrate_from_dir(dir, &out)?,
                None => harness::run_calibration(&config, &out)?,
            };
            println!("{}", report.to_toml());
        }
        Command::Protect => {
            let result = harness::run_protected(&config, &out)?;
            println!(
                "delay profile: mean {} s, variance {} s^2",
                result.distribution.mean, result.distribution.variance
            );
            print_summary(&result.summary);
        }
        Command::Tvla => {
            let report = harness::run_tvla_suite(&config, &out)?;
            for e in &report.entries {
                let arm = if e.protected { "protected  " } else { "unprotected" };
                println!(
                    "{:8} {arm}  t = {:>10.3}  leaks = {}{}",
                    e.kind,
                    e.t_statistic,
                    e.leaks,
                    if e.low_power { "  (low power)" } else { "" }
                );
            }
        }
        Command::Distinguish { samples, protected } => {
            let trace = TimingTrace::load(samples)?;
            let candidates: Vec<_> = ActivationKind::ALL
                .iter()
                .map(|k| &paper_profiles()[k])
                .collect();
            let hypothesis = protected.then(DelayDistribution::paper_calibrated);
            let verdict = distinguish(&trace.durations(), &candidates, hypothesis.as_ref())?;
            println!("{}", serde_json::to_string_pretty(&verdict).expect("verdict serializes"));
        }
        Command::Overhead { network } => {
            let mut config = config;
            if network.is_some() {
                config.overhead.network_file = network.clone();
            }
            let report = harness::run_overhead(&config, &out)?;
            for layer in &report.layers {
                println!(
                    "layer {} ({}): neuron {:.5}-{:.5} s -> {:.5}-{:.5} s, overhead {:.2}%-{:.2}% (span {:.2}%-{:.2}%)",
                    layer.layer_index,
                    layer.activation,
                    layer.neuron_baseline.min,
                    layer.neuron_baseline.max,
                    layer.neuron_protected.min,
                    layer.neuron_protected.max,
                    layer.overhead_pct.min,
                    layer.overhead_pct.max,
                    layer.overhead_span_pct.min,
                    layer.overhead_span_pct.max,
                );
            }
        }
        Command::Repro => {
            let result = harness::run_repro(&config, &out)?;
            print_summary(&result.figure1.summary);
            println!(
                "calibrated delay: mean {} s, variance {} s^2",
                result.calibration.result.mean, result.calibration.result.variance
            );
            print_summary(&result.protected.summary);
            for e in &result.tvla.entries {
                let arm = if e.protected { "protected  " } else { "unprotected" };
                println!("{:8} {arm}  t = {:>10.3}  leaks = {}", e.kind, e.t_statistic, e.leaks);
            }
            println!("outputs written to {}", out.display());
        }
    }
    Ok(())
}

fn print_summary(summary: &harness::SummaryTable) {
    let label = if summary.protected { "protected" } else { "unprotected" };
    println!("{label} computation time (ms):");
    println!("{:<10} {:>10} {:>10} {:>10}", "function", "mean", "min", "max");
    for row in &summary.rows {
        println!(
            "{:<10} {:>10.4} {:>10.4} {:>10.4}",
            row.kind, row.mean_ms, row.min_ms, row.max_ms
        );
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let mut source = std::error::Error::source(&err);
            while let Some(cause) = source {
                eprintln!("  caused by: {cause}");
                source = cause.source();
            }
            ExitCode::from(Error::exit_code(&err) as u8)
        }
    }
}
