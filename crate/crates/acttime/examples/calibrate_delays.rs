//! Derive the random-delay parameters from pooled unprotected
//! campaigns: find the timing clusters, take slowest-minus-fastest
//! cluster averages for the mean, and set the variance from the order
//! of magnitude of the overall timing range.
//!
//! Run with: cargo run --example calibrate_delays

use acttime::activation::ActivationKind;
use acttime::countermeasure::{calibrate, find_timing_clusters};
use acttime::profile::paper_profiles;
use acttime::trace::{capture_trace, InputSampler};

fn main() -> acttime::Result<()> {
    let sampler = InputSampler::Uniform { lo: -2.0, hi: 2.0 };
    let mut pooled = Vec::new();
    for kind in ActivationKind::ALL {
        let trace = capture_trace(&paper_profiles()[&kind], 2000, sampler, 7)?;
        pooled.extend(trace.durations());
    }

    let clusters = find_timing_clusters(&pooled, 8);
    println!("pooled timing clusters ({} samples):", pooled.len());
    for c in &clusters {
        println!("  center {:.4e} s  ({} members)", c.center, c.members.len());
    }

    let report = calibrate(&pooled)?;
    println!("\nfastest cluster average t_f = {:.4e} s", report.t_f);
    println!("slowest cluster average t_s = {:.4e} s", report.t_s);
    println!("timing range delta_t        = {:.4e} s (order of magnitude {})", report.delta_t, report.magnitude);
    println!("\ncalibrated delay profile: mean {} s, variance {} s^2", report.result.mean, report.result.variance);
    Ok(())
}
