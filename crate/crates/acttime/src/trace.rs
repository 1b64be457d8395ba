//! Timing campaigns: capture of (input, duration) traces and their
//! on-disk form (CSV plus a sidecar metadata document).

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::TimingProfile;
use crate::stats::RunningStats;

/// How campaign inputs are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InputSampler {
    /// Fresh uniform draw from `[lo, hi]` for every entry.
    Uniform { lo: f64, hi: f64 },
    /// The same input for every entry (TVLA fixed set).
    Fixed { x: f64 },
}

impl InputSampler {
    pub fn validate(&self, profile: &TimingProfile) -> Result<()> {
        match *self {
            InputSampler::Uniform { lo, hi } => {
                if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                    return Err(Error::Config(format!("bad uniform input range [{lo}, {hi}]")));
                }
                if lo < profile.input_domain.lo || hi > profile.input_domain.hi {
                    return Err(Error::Config(format!(
                        "input range [{lo}, {hi}] exceeds profile domain [{}, {}]",
                        profile.input_domain.lo, profile.input_domain.hi
                    )));
                }
            }
            InputSampler::Fixed { x } => {
                profile.cluster_for(x)?;
            }
        }
        Ok(())
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            InputSampler::Uniform { lo, hi } => rng.gen_range(lo..=hi),
            InputSampler::Fixed { x } => x,
        }
    }
}

/// One campaign's worth of (input, duration) samples.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingTrace {
    pub kind: String,
    pub profile_id: String,
    pub protected: bool,
    pub seed: u64,
    /// (input, duration in seconds) pairs, in capture order.
    pub entries: Vec<(f64, f64)>,
}

impl TimingTrace {
    pub fn durations(&self) -> Vec<f64> {
        self.entries.iter().map(|&(_, d)| d).collect()
    }

    pub fn stats(&self) -> RunningStats {
        let mut s = RunningStats::new();
        for &(_, d) in &self.entries {
            s.push(d);
        }
        s
    }

    /// Write the entries as CSV (`input,duration_s`) and a sidecar
    /// metadata document at `<path>.meta.toml`.
    pub fn save(&self, path: &Path, descriptor: &InputSampler) -> Result<()> {
        let mut body = String::from("input,duration_s\n");
        for &(x, d) in &self.entries {
            body.push_str(&format!("{x},{d}\n"));
        }
        crate::harness::fsio::write_atomic(path, body.as_bytes())?;

        let meta = TraceMeta {
            schema_version: 1,
            kind: self.kind.clone(),
            profile_id: self.profile_id.clone(),
            protected: self.protected,
            seed: self.seed,
            n: self.entries.len(),
            campaign: *descriptor,
        };
        let meta_path = meta_path_for(path);
        let text = toml::to_string_pretty(&meta).expect("metadata serializes");
        crate::harness::fsio::write_atomic(&meta_path, text.as_bytes())
    }

    /// Read a trace back from CSV; metadata comes from the sidecar if
    /// present, otherwise defaults are used.
    pub fn load(path: &Path) -> Result<TimingTrace> {
        // distinguish an unreadable file (io) from malformed contents (parse)
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
        let mut entries = Vec::new();
        for record in reader.deserialize::<(f64, f64)>() {
            let (x, d) = record.map_err(|e| Error::Parse {
                path: path.into(),
                message: e.to_string(),
            })?;
            entries.push((x, d));
        }
        let meta_path = meta_path_for(path);
        let meta: Option<TraceMeta> = match std::fs::read_to_string(&meta_path) {
            Ok(text) => Some(toml::from_str(&text).map_err(|e| Error::Parse {
                path: meta_path.clone(),
                message: e.to_string(),
            })?),
            Err(_) => None,
        };
        let meta = meta.unwrap_or(TraceMeta {
            schema_version: 1,
            kind: "unknown".into(),
            profile_id: "unknown".into(),
            protected: false,
            seed: 0,
            n: entries.len(),
            campaign: InputSampler::Uniform { lo: -2.0, hi: 2.0 },
        });
        Ok(TimingTrace {
            kind: meta.kind,
            profile_id: meta.profile_id,
            protected: meta.protected,
            seed: meta.seed,
            entries,
        })
    }
}

fn meta_path_for(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.toml");
    std::path::PathBuf::from(s)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceMeta {
    schema_version: u32,
    kind: String,
    profile_id: String,
    protected: bool,
    seed: u64,
    n: usize,
    campaign: InputSampler,
}

/// Capture `n` simulated (input, duration) pairs from a profile.
/// Reproducible: the same (profile, n, sampler, seed) yields a
/// bit-identical trace.
pub fn capture_trace(
    profile: &TimingProfile,
    n: usize,
    sampler: InputSampler,
    seed: u64,
) -> Result<TimingTrace> {
    if n == 0 {
        return Err(Error::Data("campaign size must be at least 1".into()));
    }
    sampler.validate(profile)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(n);
    for _ in 0..n {
        let x = sampler.draw(&mut rng);
        let d = profile.sample_time(x, &mut rng)?;
        entries.push((x, d));
    }
    Ok(TimingTrace {
        kind: profile.kind.clone(),
        profile_id: profile.id.clone(),
        protected: false,
        seed,
        entries,
    })
}
