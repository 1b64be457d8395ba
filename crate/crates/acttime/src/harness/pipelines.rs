//! End-to-end experiment pipelines: unprotected profiling, delay
//! calibration, protected campaigns, the TVLA suite, and the overhead
//! report, each writing traces, plot data, and report documents into
//! an output directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::activation::ActivationKind;
use crate::countermeasure::{calibrate, protect_trace, CalibrationReport, DelayDistribution};
use crate::error::{Error, Result};
use crate::leakage::{TvlaCampaign, TVLA_THRESHOLD};
use crate::overhead::{
    overhead_report, LayerSpec, NetworkCostModel, OverheadReport, PAPER_PROTECTED_ACTIVATION,
    PAPER_UNPROTECTED_ACTIVATION,
};
use crate::profile::paper_profiles;
use crate::trace::{capture_trace, InputSampler, TimingTrace};

use super::config::{CountermeasureMode, ExperimentConfig};
use super::fsio::{subseed, write_atomic};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One row of a summary table, in milliseconds to match the published
/// tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub kind: String,
    pub mean_ms: f64,
    pub min_ms: f64,
    pub max_ms: f64,
    pub std_ms: f64,
    pub n: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub tool_version: String,
    pub config_digest: String,
    pub protected: bool,
    pub rows: Vec<SummaryRow>,
}

fn summary_row(trace: &TimingTrace) -> SummaryRow {
    let stats = trace.stats();
    SummaryRow {
        kind: trace.kind.clone(),
        mean_ms: stats.mean() * 1e3,
        min_ms: stats.min() * 1e3,
        max_ms: stats.max() * 1e3,
        std_ms: stats.std_dev() * 1e3,
        n: trace.entries.len(),
        seed: trace.seed,
    }
}

fn uniform(config: &ExperimentConfig) -> InputSampler {
    let [lo, hi] = config.campaign.input_domain;
    InputSampler::Uniform { lo, hi }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

fn write_scatter(path: &Path, trace: &TimingTrace) -> Result<()> {
    let mut body = String::from("# input duration_s\n");
    for &(x, d) in &trace.entries {
        body.push_str(&format!("{x} {d}\n"));
    }
    write_atomic(path, body.as_bytes())
}

pub struct Figure1Output {
    pub summary: SummaryTable,
    pub traces: BTreeMap<ActivationKind, TimingTrace>,
}

/// Uniform-input campaigns for all three activations: per-function
/// scatter data, trace CSVs, and a summary table in the published
/// format (mean/min/max in ms).
pub fn run_figure1(config: &ExperimentConfig, out_dir: &Path) -> Result<Figure1Output> {
    let digest = config.digest();
    let mut traces = BTreeMap::new();
    let mut rows = Vec::new();
    for kind in ActivationKind::ALL {
        let profile = &paper_profiles()[&kind];
        let seed = subseed(config.seed, &format!("figure1-{kind}"));
        let trace = capture_trace(profile, config.campaign.n_profile, uniform(config), seed)?;
        trace.save(
            &out_dir.join("traces").join(format!("{kind}_unprotected.csv")),
            &uniform(config),
        )?;
        write_scatter(&out_dir.join("plots").join(format!("figure1_{kind}.dat")), &trace)?;
        rows.push(summary_row(&trace));
        traces.insert(kind, trace);
    }
    let summary = SummaryTable {
        tool_version: TOOL_VERSION.into(),
        config_digest: digest,
        protected: false,
        rows,
    };
    write_json(&out_dir.join("reports").join("table1.json"), &summary)?;
    Ok(Figure1Output { summary, traces })
}

/// Run calibration on pooled unprotected campaign data and persist the
/// report.
pub fn run_calibration(config: &ExperimentConfig, out_dir: &Path) -> Result<CalibrationReport> {
    let mut pooled = Vec::new();
    for kind in ActivationKind::ALL {
        let profile = &paper_profiles()[&kind];
        let seed = subseed(config.seed, &format!("calibrate-{kind}"));
        let trace = capture_trace(profile, config.campaign.n_profile, uniform(config), seed)?;
        pooled.extend(trace.durations());
    }
    let report = calibrate(&pooled)?;
    report.save(&out_dir.join("reports").join("calibration.toml"))?;
    Ok(report)
}

/// Resolve a countermeasure mode to concrete delay parameters,
/// auto-calibrating from fresh unprotected campaigns when asked.
pub fn resolve_distribution(
    config: &ExperimentConfig,
    mode: CountermeasureMode,
    out_dir: &Path,
) -> Result<DelayDistribution> {
    Ok(match mode {
        CountermeasureMode::Table2Regime => DelayDistribution::table2_regime(),
        CountermeasureMode::PaperCalibrated => DelayDistribution::paper_calibrated(),
        CountermeasureMode::Explicit => config.explicit_distribution()?,
        CountermeasureMode::AutoCalibrate => run_calibration(config, out_dir)?.result,
    })
}

pub struct ProtectedOutput {
    pub summary: SummaryTable,
    pub distribution: DelayDistribution,
    pub traces: BTreeMap<ActivationKind, TimingTrace>,
}

/// Protected campaigns for all three activations with the configured
/// delay profile; summary in the published protected-table format.
pub fn run_protected(config: &ExperimentConfig, out_dir: &Path) -> Result<ProtectedOutput> {
    let dist = resolve_distribution(config, config.countermeasure.protect, out_dir)?;
    let digest = config.digest();
    let mut traces = BTreeMap::new();
    let mut rows = Vec::new();
    for kind in ActivationKind::ALL {
        let profile = &paper_profiles()[&kind];
        let base_seed = subseed(config.seed, &format!("protect-base-{kind}"));
        let delay_seed = subseed(config.seed, &format!("protect-delay-{kind}"));
        let base = capture_trace(profile, config.campaign.n_profile, uniform(config), base_seed)?;
        let mut rng = ChaCha12Rng::seed_from_u64(delay_seed);
        let protected = protect_trace(&base, &dist, delay_seed, &mut rng)?;
        protected.save(
            &out_dir.join("traces").join(format!("{kind}_protected.csv")),
            &uniform(config),
        )?;
        write_scatter(
            &out_dir.join("plots").join(format!("figure2_{kind}.dat")),
            &protected,
        )?;
        rows.push(summary_row(&protected));
        traces.insert(kind, protected);
    }
    let summary = SummaryTable {
        tool_version: TOOL_VERSION.into(),
        config_digest: digest,
        protected: true,
        rows,
    };
    write_json(&out_dir.join("reports").join("table2.json"), &summary)?;
    Ok(ProtectedOutput {
        summary,
        distribution: dist,
        traces,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TvlaEntry {
    pub kind: String,
    pub protected: bool,
    pub t_statistic: f64,
    pub leaks: bool,
    pub low_power: bool,
    pub fixed_input: f64,
    pub n_per_set: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TvlaSuiteReport {
    pub tool_version: String,
    pub config_digest: String,
    pub threshold: f64,
    pub entries: Vec<TvlaEntry>,
}

/// Six fixed-vs-random campaigns: three activations, each without and
/// with the countermeasure, sharing the fixed input per activation.
pub fn run_tvla_suite(config: &ExperimentConfig, out_dir: &Path) -> Result<TvlaSuiteReport> {
    let dist = resolve_distribution(config, config.countermeasure.tvla, out_dir)?;
    let mut entries = Vec::new();
    for kind in ActivationKind::ALL {
        let profile = &paper_profiles()[&kind];
        let seed = subseed(config.seed, &format!("tvla-{kind}"));
        let mut campaign = TvlaCampaign::new(profile);
        campaign.n_per_set = config.campaign.n_tvla_per_set;
        let (unprotected, fixed) = campaign.run(seed)?;
        entries.push(TvlaEntry {
            kind: kind.name().into(),
            protected: false,
            t_statistic: unprotected.t_statistic,
            leaks: unprotected.leaks,
            low_power: unprotected.low_power,
            fixed_input: fixed,
            n_per_set: campaign.n_per_set,
            seed,
        });
        campaign.countermeasure = Some(dist);
        campaign.fixed_input = Some(fixed);
        let (protected, _) = campaign.run(seed)?;
        entries.push(TvlaEntry {
            kind: kind.name().into(),
            protected: true,
            t_statistic: protected.t_statistic,
            leaks: protected.leaks,
            low_power: protected.low_power,
            fixed_input: fixed,
            n_per_set: campaign.n_per_set,
            seed,
        });
    }
    let report = TvlaSuiteReport {
        tool_version: TOOL_VERSION.into(),
        config_digest: config.digest(),
        threshold: TVLA_THRESHOLD,
        entries,
    };
    write_json(&out_dir.join("reports").join("tvla.json"), &report)?;
    let mut plot = String::from("# label t_value\n");
    for e in &report.entries {
        let arm = if e.protected { "protected" } else { "unprotected" };
        plot.push_str(&format!("{}-{arm} {}\n", e.kind, e.t_statistic));
    }
    plot.push_str(&format!("threshold {TVLA_THRESHOLD}\n"));
    write_atomic(&out_dir.join("plots").join("tvla.dat"), plot.as_bytes())?;
    Ok(report)
}

// On-disk network description for the overhead verb.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkFile {
    schema_version: u32,
    mult_time_s: f64,
    add_time_s: f64,
    #[serde(default)]
    mac_sig_figs: Option<u32>,
    layers: Vec<LayerSpec>,
}

/// Load a network cost model from a description file.
pub fn load_network(path: &Path) -> Result<NetworkCostModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file: NetworkFile = toml::from_str(&text).map_err(|e| Error::Parse {
        path: path.into(),
        message: e.to_string(),
    })?;
    if file.schema_version != 1 {
        return Err(Error::Config(format!(
            "unsupported network schema_version {}",
            file.schema_version
        )));
    }
    let mut model = NetworkCostModel::new(file.mult_time_s, file.add_time_s, file.layers)?;
    model.mac_sig_figs = file.mac_sig_figs;
    Ok(model)
}

#[derive(Debug, Serialize)]
pub struct OverheadDocument {
    pub tool_version: String,
    pub config_digest: String,
    #[serde(flatten)]
    pub report: OverheadReport,
}

/// Overhead report for the configured network (the VGG-19 tail
/// scenario by default) using the published activation time ranges.
pub fn run_overhead(config: &ExperimentConfig, out_dir: &Path) -> Result<OverheadReport> {
    let model = match &config.overhead.network_file {
        Some(path) => load_network(path)?,
        None => NetworkCostModel::vgg19_scenario(),
    };
    let report = overhead_report(&model, PAPER_UNPROTECTED_ACTIVATION, PAPER_PROTECTED_ACTIVATION)?;
    let doc = OverheadDocument {
        tool_version: TOOL_VERSION.into(),
        config_digest: config.digest(),
        report: report.clone(),
    };
    write_json(&out_dir.join("reports").join("overhead.json"), &doc)?;
    Ok(report)
}

pub struct ReproOutput {
    pub figure1: Figure1Output,
    pub calibration: CalibrationReport,
    pub protected: ProtectedOutput,
    pub tvla: TvlaSuiteReport,
    pub overhead: OverheadReport,
}

/// The full published workflow: unprotected campaigns and summary,
/// delay calibration, protected campaigns and summary, the TVLA suite,
/// and the overhead report.
pub fn run_repro(config: &ExperimentConfig, out_dir: &Path) -> Result<ReproOutput> {
    let figure1 = run_figure1(config, out_dir)?;
    let pooled: Vec<f64> = ActivationKind::ALL
        .iter()
        .flat_map(|k| figure1.traces[k].durations())
        .collect();
    let calibration = calibrate(&pooled)?;
    calibration.save(&out_dir.join("reports").join("calibration.toml"))?;
    let protected = run_protected(config, out_dir)?;
    let tvla = run_tvla_suite(config, out_dir)?;
    let overhead = run_overhead(config, out_dir)?;
    Ok(ReproOutput {
        figure1,
        calibration,
        protected,
        tvla,
        overhead,
    })
}

/// Pool the durations of every trace CSV in a directory and calibrate
/// the delay distribution from them.
pub fn calibrate_from_dir(dir: &Path, out_dir: &Path) -> Result<CalibrationReport> {
    let mut pooled = Vec::new();
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "csv"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::Data(format!("no trace CSVs found in {}", dir.display())));
    }
    for path in &paths {
        let trace = TimingTrace::load(path)?;
        if trace.protected {
            return Err(Error::Data(format!(
                "{} is already protected; calibration needs unprotected timings",
                path.display()
            )));
        }
        pooled.extend(trace.durations());
    }
    let report = calibrate(&pooled)?;
    report.save(&out_dir.join("reports").join("calibration.toml"))?;
    Ok(report)
}
