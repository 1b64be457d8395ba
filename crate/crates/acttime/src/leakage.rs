//! Leakage assessment (fixed-vs-random Welch t-test, TVLA style) and
//! the timing distinguisher the countermeasure must defeat.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::countermeasure::DelayDistribution;
use crate::error::{Error, Result};
use crate::profile::TimingProfile;
use crate::stats::RunningStats;

/// |t| above this value indicates data-dependent leakage.
pub const TVLA_THRESHOLD: f64 = 4.5;

/// Campaigns smaller than this per set get a low-power warning flag.
pub const LOW_POWER_MIN: usize = 100;

/// Result of one fixed-vs-random t-test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TvlaResult {
    pub t_statistic: f64,
    pub n_fixed: usize,
    pub n_random: usize,
    pub threshold: f64,
    /// True iff `|t| > threshold` (strict: landing exactly on the
    /// threshold does not count as crossing it).
    pub leaks: bool,
    /// Optional label for per-function reporting.
    pub window: Option<String>,
    /// Set when either population is too small for a meaningful test.
    pub low_power: bool,
}

/// Welch's t-statistic between two populations, with Bessel-corrected
/// sample variances:
/// `t = (mean(xs) - mean(ys)) / sqrt(var(xs)/|xs| + var(ys)/|ys|)`.
///
/// Two degenerate zero-variance populations compare as `t = 0` when
/// their means agree and as an infinite-magnitude leak when they do not.
pub fn welch_t(xs: &[f64], ys: &[f64]) -> Result<TvlaResult> {
    if xs.len() < 2 || ys.len() < 2 {
        return Err(Error::Data(format!(
            "welch t-test needs at least 2 samples per set, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let sx = RunningStats::from_slice(xs);
    let sy = RunningStats::from_slice(ys);
    let num = sx.mean() - sy.mean();
    let denom = (sx.variance() / xs.len() as f64 + sy.variance() / ys.len() as f64).sqrt();
    let t = if denom > 0.0 {
        num / denom
    } else if num == 0.0 {
        0.0
    } else {
        num.signum() * f64::INFINITY
    };
    Ok(TvlaResult {
        t_statistic: t,
        n_fixed: xs.len(),
        n_random: ys.len(),
        threshold: TVLA_THRESHOLD,
        leaks: t.abs() > TVLA_THRESHOLD,
        window: None,
        low_power: xs.len() < LOW_POWER_MIN || ys.len() < LOW_POWER_MIN,
    })
}

/// Whether observations are single activation calls or sums over a
/// layer's worth of calls (emulating whole-inference timing).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Aggregate {
    PerCall,
    PerLayer { neurons: usize },
}

impl Default for Aggregate {
    fn default() -> Self {
        Aggregate::PerCall
    }
}

/// Options for one TVLA campaign against a timing profile.
#[derive(Debug, Clone)]
pub struct TvlaCampaign<'a> {
    pub profile: &'a TimingProfile,
    pub countermeasure: Option<DelayDistribution>,
    pub n_per_set: usize,
    /// Fixed input for the x-population; drawn from the input domain
    /// with the campaign seed when `None`, then held for the campaign.
    pub fixed_input: Option<f64>,
    pub aggregate: Aggregate,
}

impl<'a> TvlaCampaign<'a> {
    pub fn new(profile: &'a TimingProfile) -> Self {
        TvlaCampaign {
            profile,
            countermeasure: None,
            n_per_set: 5000,
            fixed_input: None,
            aggregate: Aggregate::PerCall,
        }
    }

    /// Run the campaign: `n_per_set` timings at the fixed input against
    /// `n_per_set` timings at fresh uniform-random inputs, the
    /// countermeasure (when present) applied to both sets. Returns the
    /// test result and the fixed input actually used. Deterministic
    /// per seed.
    pub fn run(&self, seed: u64) -> Result<(TvlaResult, f64)> {
        if self.n_per_set < 2 {
            return Err(Error::Data("TVLA needs at least 2 timings per set".into()));
        }
        let domain = self.profile.input_domain;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let fixed = match self.fixed_input {
            Some(x) => {
                self.profile.cluster_for(x)?;
                x
            }
            None => rng.gen_range(domain.lo..=domain.hi),
        };
        let neurons = match self.aggregate {
            Aggregate::PerCall => 1,
            Aggregate::PerLayer { neurons } => {
                if neurons == 0 {
                    return Err(Error::Config("per-layer aggregation needs at least 1 neuron".into()));
                }
                neurons
            }
        };
        // Per-layer mode feeds each neuron its own input; the fixed
        // population fixes the whole input vector for the campaign.
        let fixed_vector: Vec<f64> = std::iter::once(fixed)
            .chain((1..neurons).map(|_| rng.gen_range(domain.lo..=domain.hi)))
            .collect();

        let observe = |inputs: &[f64], rng: &mut ChaCha12Rng| -> Result<f64> {
            let mut total = 0.0;
            for &x in inputs {
                total += self.profile.sample_time(x, rng)?;
                if let Some(dist) = &self.countermeasure {
                    total += dist.sample(rng)?;
                }
            }
            Ok(total)
        };

        let mut xs = Vec::with_capacity(self.n_per_set);
        for _ in 0..self.n_per_set {
            xs.push(observe(&fixed_vector, &mut rng)?);
        }
        let mut ys = Vec::with_capacity(self.n_per_set);
        let mut fresh = vec![0.0; neurons];
        for _ in 0..self.n_per_set {
            for slot in fresh.iter_mut() {
                *slot = rng.gen_range(domain.lo..=domain.hi);
            }
            ys.push(observe(&fresh, &mut rng)?);
        }
        let mut result = welch_t(&xs, &ys)?;
        result.window = Some(self.profile.kind.clone());
        Ok((result, fixed))
    }
}

/// Outcome of the activation-function distinguisher.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistinguisherVerdict {
    pub predicted: String,
    /// Distance of the observed sample mean from each candidate's
    /// expected mean; candidate order also breaks score ties.
    pub scores: BTreeMap<String, f64>,
    pub n_queries: usize,
}

/// Classify timing samples by nearest expected aggregate mean.
///
/// When the attacker hypothesizes the countermeasure is active, each
/// candidate's expected mean is shifted by the analytic mean of the
/// (truncated) delay distribution.
pub fn distinguish(
    samples: &[f64],
    candidates: &[&TimingProfile],
    protected_hypothesis: Option<&DelayDistribution>,
) -> Result<DistinguisherVerdict> {
    if candidates.is_empty() {
        return Err(Error::Config("distinguisher needs candidate profiles".into()));
    }
    if samples.is_empty() {
        return Err(Error::Data("distinguisher needs at least one timing sample".into()));
    }
    let shift = protected_hypothesis.map_or(0.0, DelayDistribution::truncated_mean);
    let sample_mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let mut scores = BTreeMap::new();
    for p in candidates {
        scores.insert(p.kind.clone(), (sample_mean - p.aggregate_mean() - shift).abs());
    }
    // BTreeMap iteration is ordered by candidate name, so the first
    // strict minimum wins ties deterministically.
    let predicted = scores
        .iter()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k.clone())
        .expect("non-empty candidate set");
    Ok(DistinguisherVerdict {
        predicted,
        scores,
        n_queries: samples.len(),
    })
}

/// Confusion statistics from repeated distinguisher trials with known
/// ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyTable {
    /// `confusion[truth][predicted]` = trial count.
    pub confusion: BTreeMap<String, BTreeMap<String, u32>>,
    pub per_kind_accuracy: BTreeMap<String, f64>,
    pub overall_accuracy: f64,
    pub queries_per_trial: usize,
    pub trials_per_kind: usize,
    pub seed: u64,
}

/// Monte-Carlo evaluation of the distinguisher over every candidate as
/// ground truth. When `countermeasure` is supplied, the simulated
/// victim applies it and the attacker receives it as hypothesis.
pub fn accuracy_sweep(
    candidates: &[&TimingProfile],
    countermeasure: Option<&DelayDistribution>,
    queries_per_trial: usize,
    trials: usize,
    seed: u64,
) -> Result<AccuracyTable> {
    if trials == 0 {
        return Err(Error::Data("accuracy sweep needs at least one trial".into()));
    }
    if queries_per_trial == 0 {
        return Err(Error::Data("accuracy sweep needs at least one query per trial".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut confusion: BTreeMap<String, BTreeMap<String, u32>> = BTreeMap::new();
    let mut samples = Vec::with_capacity(queries_per_trial);
    for truth in candidates {
        let row = confusion.entry(truth.kind.clone()).or_default();
        for _ in 0..trials {
            samples.clear();
            for _ in 0..queries_per_trial {
                let x = rng.gen_range(truth.input_domain.lo..=truth.input_domain.hi);
                let mut d = truth.sample_time(x, &mut rng)?;
                if let Some(dist) = countermeasure {
                    d += dist.sample(&mut rng)?;
                }
                samples.push(d);
            }
            let verdict = distinguish(&samples, candidates, countermeasure)?;
            *row.entry(verdict.predicted).or_default() += 1;
        }
    }
    let mut per_kind = BTreeMap::new();
    let mut correct_total = 0u32;
    for truth in candidates {
        let row = &confusion[&truth.kind];
        let correct = *row.get(&truth.kind).unwrap_or(&0);
        correct_total += correct;
        per_kind.insert(truth.kind.clone(), correct as f64 / trials as f64);
    }
    Ok(AccuracyTable {
        confusion,
        per_kind_accuracy: per_kind,
        overall_accuracy: correct_total as f64 / (trials * candidates.len()) as f64,
        queries_per_trial,
        trials_per_kind: trials,
        seed,
    })
}
