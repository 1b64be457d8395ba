//! Optional host-clock measurement backend.
//!
//! Measures actual wall-clock time of the reference activation
//! implementations with a monotonic high-resolution clock. Results are
//! qualitative only: they depend on the host CPU, load, and compiler,
//! are not reproducible across machines, and are excluded from the
//! acceptance checks.

use std::hint::black_box;
use std::time::Instant;

use crate::activation::{evaluate, ActivationKind};
use crate::error::{Error, Result};

/// A host timing measurement with its reliability flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HostMeasurement {
    /// Median duration of one evaluation, in seconds.
    pub seconds: f64,
    /// Set when the clock could not resolve a single evaluation and the
    /// median is dominated by clock granularity.
    pub resolution_warning: bool,
}

/// Median wall-clock duration of evaluating `kind` at `x` over
/// `repetitions` runs.
pub fn measure_host_time(kind: ActivationKind, x: f64, repetitions: usize) -> Result<HostMeasurement> {
    if repetitions == 0 {
        return Err(Error::Data("host measurement needs at least 1 repetition".into()));
    }
    evaluate(kind, x)?; // surface domain errors before timing
    let mut durations = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        let start = Instant::now();
        let y = evaluate(black_box(kind), black_box(x))?;
        let elapsed = start.elapsed();
        black_box(y);
        durations.push(elapsed.as_secs_f64());
    }
    durations.sort_by(f64::total_cmp);
    let median = durations[durations.len() / 2];
    Ok(HostMeasurement {
        seconds: median,
        resolution_warning: median <= 0.0 || median < clock_granularity(),
    })
}

/// Smallest non-zero interval the monotonic clock reports, estimated
/// once per call site invocation.
fn clock_granularity() -> f64 {
    let mut smallest = f64::INFINITY;
    for _ in 0..64 {
        let start = Instant::now();
        let mut d = start.elapsed();
        while d.is_zero() {
            d = start.elapsed();
        }
        smallest = smallest.min(d.as_secs_f64());
    }
    smallest
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measurement_is_positive_or_flagged() {
        let m = measure_host_time(ActivationKind::ReLU, 1.0, 1000).unwrap();
        assert!(m.seconds >= 0.0);
        if !m.resolution_warning {
            assert!(m.seconds > 0.0);
        }
    }

    #[test]
    fn zero_repetitions_rejected() {
        assert!(measure_host_time(ActivationKind::Tanh, 0.0, 0).is_err());
    }

    #[test]
    fn non_finite_input_rejected() {
        assert!(measure_host_time(ActivationKind::Sigmoid, f64::NAN, 10).is_err());
    }
}
