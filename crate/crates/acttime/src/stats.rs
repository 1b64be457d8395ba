//! Streaming summary statistics (Welford's algorithm).

/// Online mean/variance accumulator, numerically stable for the
/// microsecond-scale durations this toolkit works with.
#[derive(Debug, Clone, Default)]
pub struct RunningStats {
    count: u64,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
}

impl RunningStats {
    pub fn new() -> Self {
        RunningStats {
            count: 0,
            mean: 0.0,
            m2: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
        if x < self.min {
            self.min = x;
        }
        if x > self.max {
            self.max = x;
        }
    }

    pub fn from_slice(xs: &[f64]) -> Self {
        let mut s = Self::new();
        for &x in xs {
            s.push(x);
        }
        s
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Bessel-corrected sample variance; 0 for fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count > 1 {
            self.m2 / (self.count - 1) as f64
        } else {
            0.0
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_two_pass_computation() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0, -1.0, 0.5];
        let s = RunningStats::from_slice(&xs);
        let mean: f64 = xs.iter().sum::<f64>() / xs.len() as f64;
        let var: f64 =
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        assert!((s.mean() - mean).abs() < 1e-12);
        assert!((s.variance() - var).abs() < 1e-12);
        assert_eq!(s.min(), -1.0);
        assert_eq!(s.max(), 5.0);
        assert_eq!(s.count(), 7);
    }

    #[test]
    fn stable_with_large_offset() {
        // durations around 6e-4 with jitter 1e-8 on top of an offset
        let xs: Vec<f64> = (0..1000).map(|i| 6e-4 + (i as f64) * 1e-8).collect();
        let s = RunningStats::from_slice(&xs);
        assert!(s.variance() > 0.0);
        assert!((s.mean() - (6e-4 + 999.0 * 1e-8 / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn single_sample_has_zero_variance() {
        let s = RunningStats::from_slice(&[3.0]);
        assert_eq!(s.variance(), 0.0);
        assert_eq!(s.mean(), 3.0);
    }
}
