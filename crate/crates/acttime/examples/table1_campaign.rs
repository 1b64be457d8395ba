//! Capture unprotected timing campaigns for all three activation
//! functions and print the aggregate summary (mean/min/max in ms).
//!
//! Run with: cargo run --example table1_campaign

use acttime::activation::ActivationKind;
use acttime::profile::paper_profiles;
use acttime::trace::{capture_trace, InputSampler};

fn main() -> acttime::Result<()> {
    let sampler = InputSampler::Uniform { lo: -2.0, hi: 2.0 };
    println!("{:<10} {:>10} {:>10} {:>10} {:>8}", "function", "mean", "min", "max", "n");
    for kind in ActivationKind::ALL {
        let profile = &paper_profiles()[&kind];
        let trace = capture_trace(profile, 2000, sampler, 42)?;
        let stats = trace.stats();
        println!(
            "{:<10} {:>10.4} {:>10.4} {:>10.4} {:>8}",
            kind,
            stats.mean() * 1e3,
            stats.min() * 1e3,
            stats.max() * 1e3,
            stats.count()
        );
    }
    println!("\n(times in ms; rerun with the same seed for identical numbers)");
    Ok(())
}
