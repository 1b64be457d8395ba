//! The whole workflow in one run: unprotected campaigns, delay
//! calibration, protected campaigns, the leakage assessment suite, and
//! the overhead report. Traces, plot data, and reports are written to
//! ./acttime-out; rerunning produces byte-identical files.
//!
//! Run with: cargo run --example full_repro

use std::path::Path;

use acttime::harness::{run_repro, ExperimentConfig};

fn main() -> acttime::Result<()> {
    let config = ExperimentConfig::default();
    let out = Path::new("acttime-out");
    let result = run_repro(&config, out)?;

    println!("unprotected means (ms):");
    for row in &result.figure1.summary.rows {
        println!("  {:<8} {:.4}", row.kind, row.mean_ms);
    }
    println!(
        "calibrated delay: mean {} s, variance {} s^2",
        result.calibration.result.mean, result.calibration.result.variance
    );
    println!("protected means (ms):");
    for row in &result.protected.summary.rows {
        println!("  {:<8} {:.4}", row.kind, row.mean_ms);
    }
    println!("leakage (|t| > {} leaks):", result.tvla.threshold);
    for e in &result.tvla.entries {
        let arm = if e.protected { "protected  " } else { "unprotected" };
        println!("  {:<8} {arm} t = {:>9.2}", e.kind, e.t_statistic);
    }
    let layer = &result.overhead.layers[0];
    println!(
        "overhead: {:.2}%-{:.2}%",
        layer.overhead_pct.min, layer.overhead_pct.max
    );
    println!("\nall outputs in {}", out.display());
    Ok(())
}
