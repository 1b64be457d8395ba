//! Cluster-based statistical timing profiles.
//!
//! Execution time of an activation function is modeled as a set of
//! input-dependent clusters: the input deterministically selects a
//! cluster, and the duration is the cluster mean plus bounded uniform
//! jitter. The built-in profiles live in `data/paper_profiles_v1.toml`
//! and reproduce the published aggregate statistics.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::activation::ActivationKind;
use crate::error::{Error, Result};

const PAPER_PROFILES_V1: &str = include_str!("../data/paper_profiles_v1.toml");

/// Closed input interval `[lo, hi]`; membership within a profile is
/// left-open except at the profile's domain minimum, so adjacent
/// cluster intervals sharing an endpoint stay disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    fn contains(&self, x: f64, domain_lo: f64) -> bool {
        (x > self.lo || (x == self.lo && self.lo <= domain_lo)) && x <= self.hi
    }
}

/// One timing cluster: the input region it covers, its mean duration,
/// and the half-width of the uniform jitter around that mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingCluster {
    pub intervals: Vec<Interval>,
    /// Mean duration in seconds.
    pub mean: f64,
    /// Jitter half-width in seconds; samples lie in `[mean - spread, mean + spread]`.
    pub spread: f64,
}

impl TimingCluster {
    /// Fraction of the input domain this cluster covers.
    pub fn weight(&self, domain: Interval) -> f64 {
        self.intervals.iter().map(Interval::length).sum::<f64>() / domain.length()
    }
}

/// Statistical timing model of one activation function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingProfile {
    pub id: String,
    /// Activation identifier; the three core kinds use their canonical
    /// names, user-registered profiles may use any name.
    pub kind: String,
    pub input_domain: Interval,
    pub clusters: Vec<TimingCluster>,
    /// Free-text calibration note.
    pub provenance: String,
}

impl TimingProfile {
    /// Check the structural invariants: at least one cluster, positive
    /// means, bounded spreads, disjoint intervals covering the domain.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::ProfileIntegrity(format!("{}: {msg}", self.id)));
        if self.clusters.is_empty() {
            return fail("no clusters".into());
        }
        if self.input_domain.length() <= 0.0 {
            return fail("empty input domain".into());
        }
        let mut spans: Vec<Interval> = Vec::new();
        for c in &self.clusters {
            if !(c.mean > 0.0) {
                return fail(format!("cluster mean {} not positive", c.mean));
            }
            if c.spread < 0.0 || c.spread >= c.mean {
                return fail(format!("spread {} out of [0, mean)", c.spread));
            }
            if c.intervals.is_empty() {
                return fail("cluster with no input region".into());
            }
            for iv in &c.intervals {
                if !(iv.lo < iv.hi) {
                    return fail(format!("bad interval [{}, {}]", iv.lo, iv.hi));
                }
                spans.push(*iv);
            }
        }
        spans.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let eps = 1e-9 * self.input_domain.length();
        if (spans[0].lo - self.input_domain.lo).abs() > eps {
            return fail("clusters do not start at the domain minimum".into());
        }
        for w in spans.windows(2) {
            if w[1].lo < w[0].hi - eps {
                return fail(format!(
                    "overlapping intervals at [{}, {}] / [{}, {}]",
                    w[0].lo, w[0].hi, w[1].lo, w[1].hi
                ));
            }
            if w[1].lo > w[0].hi + eps {
                return fail(format!("coverage hole between {} and {}", w[0].hi, w[1].lo));
            }
        }
        if (spans.last().unwrap().hi - self.input_domain.hi).abs() > eps {
            return fail("clusters do not reach the domain maximum".into());
        }
        Ok(())
    }

    /// The cluster selected by input `x`; selection is deterministic in `x`.
    pub fn cluster_for(&self, x: f64) -> Result<&TimingCluster> {
        if !x.is_finite() || x < self.input_domain.lo || x > self.input_domain.hi {
            return Err(Error::Domain(format!(
                "input {x} outside profile domain [{}, {}]",
                self.input_domain.lo, self.input_domain.hi
            )));
        }
        self.clusters
            .iter()
            .find(|c| c.intervals.iter().any(|iv| iv.contains(x, self.input_domain.lo)))
            .ok_or_else(|| {
                Error::ProfileIntegrity(format!("{}: input {x} falls in no cluster", self.id))
            })
    }

    /// Simulated duration for input `x`: cluster mean plus uniform
    /// jitter in `[-spread, +spread]`.
    pub fn sample_time<R: Rng>(&self, x: f64, rng: &mut R) -> Result<f64> {
        let c = self.cluster_for(x)?;
        let jitter = if c.spread > 0.0 {
            rng.gen_range(-c.spread..=c.spread)
        } else {
            0.0
        };
        Ok(c.mean + jitter)
    }

    /// Expected mean duration under uniform inputs over the domain.
    pub fn aggregate_mean(&self) -> f64 {
        self.clusters
            .iter()
            .map(|c| c.weight(self.input_domain) * c.mean)
            .sum()
    }

    /// Smallest duration the profile can produce.
    pub fn aggregate_min(&self) -> f64 {
        self.clusters
            .iter()
            .map(|c| c.mean - c.spread)
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest duration the profile can produce.
    pub fn aggregate_max(&self) -> f64 {
        self.clusters
            .iter()
            .map(|c| c.mean + c.spread)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn to_toml(&self) -> String {
        let doc = ProfileFile {
            schema_version: 1,
            profile: vec![ProfileDoc::from(self)],
        };
        toml::to_string_pretty(&doc).expect("profile serialization cannot fail")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        crate::harness::fsio::write_atomic(path, self.to_toml().as_bytes())
    }

    pub fn load(path: &Path) -> Result<TimingProfile> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let doc: ProfileFile = toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.into(),
            message: e.to_string(),
        })?;
        let p = doc
            .profile
            .into_iter()
            .next()
            .ok_or_else(|| Error::Parse {
                path: path.into(),
                message: "no profile in file".into(),
            })?;
        let profile = p.into_profile();
        profile.validate()?;
        Ok(profile)
    }
}

// On-disk representation of the calibration file.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    schema_version: u32,
    profile: Vec<ProfileDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileDoc {
    id: String,
    kind: String,
    input_domain: [f64; 2],
    provenance: String,
    clusters: Vec<ClusterDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClusterDoc {
    intervals: Vec<[f64; 2]>,
    mean_s: f64,
    spread_s: f64,
}

impl From<&TimingProfile> for ProfileDoc {
    fn from(p: &TimingProfile) -> Self {
        ProfileDoc {
            id: p.id.clone(),
            kind: p.kind.clone(),
            input_domain: [p.input_domain.lo, p.input_domain.hi],
            provenance: p.provenance.clone(),
            clusters: p
                .clusters
                .iter()
                .map(|c| ClusterDoc {
                    intervals: c.intervals.iter().map(|iv| [iv.lo, iv.hi]).collect(),
                    mean_s: c.mean,
                    spread_s: c.spread,
                })
                .collect(),
        }
    }
}

impl ProfileDoc {
    fn into_profile(self) -> TimingProfile {
        TimingProfile {
            id: self.id,
            kind: self.kind,
            input_domain: Interval::new(self.input_domain[0], self.input_domain[1]),
            clusters: self
                .clusters
                .into_iter()
                .map(|c| TimingCluster {
                    intervals: c
                        .intervals
                        .into_iter()
                        .map(|iv| Interval::new(iv[0], iv[1]))
                        .collect(),
                    mean: c.mean_s,
                    spread: c.spread_s,
                })
                .collect(),
            provenance: self.provenance,
        }
    }
}

/// The built-in profiles calibrated to the published tables, keyed by
/// activation kind.
pub fn paper_profiles() -> &'static BTreeMap<ActivationKind, TimingProfile> {
    static PROFILES: OnceLock<BTreeMap<ActivationKind, TimingProfile>> = OnceLock::new();
    PROFILES.get_or_init(|| {
        let doc: ProfileFile =
            toml::from_str(PAPER_PROFILES_V1).expect("built-in profile data is valid");
        doc.profile
            .into_iter()
            .map(|p| {
                let profile = p.into_profile();
                profile.validate().expect("built-in profiles are valid");
                let kind = ActivationKind::parse(&profile.kind)
                    .expect("built-in profiles use core kinds");
                (kind, profile)
            })
            .collect()
    })
}
