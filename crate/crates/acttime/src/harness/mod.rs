//! Experiment orchestration: configuration, pipelines, and output
//! persistence.

pub mod config;
pub mod fsio;
pub mod pipelines;

pub use config::{CountermeasureMode, ExperimentConfig};
pub use pipelines::{
    calibrate_from_dir, load_network, run_calibration, run_figure1, run_overhead, run_protected,
    run_repro, run_tvla_suite, Figure1Output, ProtectedOutput, ReproOutput, SummaryRow,
    SummaryTable, TvlaEntry, TvlaSuiteReport,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activation::ActivationKind;

    #[test]
    fn figure1_summary_matches_published_table() {
        let dir = tempfile::tempdir().unwrap();
        let config = ExperimentConfig::default();
        let out = run_figure1(&config, dir.path()).unwrap();
        let expected = [
            ("relu", 0.0207, 0.0206, 0.0209),
            ("sigmoid", 0.4485, 0.3920, 0.4845),
            ("tanh", 0.5170, 0.4375, 0.5985),
        ];
        for (kind, mean, min, max) in expected {
            let row = out.summary.rows.iter().find(|r| r.kind == kind).unwrap();
            let ok = |a: f64, b: f64| (a - b).abs() / b < 0.02;
            assert!(ok(row.mean_ms, mean), "{kind} mean {}", row.mean_ms);
            assert!(ok(row.min_ms, min), "{kind} min {}", row.min_ms);
            assert!(ok(row.max_ms, max), "{kind} max {}", row.max_ms);
        }
        assert!(dir.path().join("reports/table1.json").exists());
        assert!(dir.path().join("plots/figure1_tanh.dat").exists());
        assert!(dir.path().join("traces/relu_unprotected.csv").exists());
    }

    #[test]
    fn seed_change_keeps_summary_within_tolerance() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = ExperimentConfig::default();
        config.seed = 777;
        let out = run_figure1(&config, dir.path()).unwrap();
        let tanh = out.summary.rows.iter().find(|r| r.kind == "tanh").unwrap();
        assert!((tanh.mean_ms - 0.5170).abs() / 0.5170 < 0.02);
    }

    #[test]
    fn single_sample_summary_collapses() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = ExperimentConfig::default();
        config.campaign.n_profile = 1;
        let out = run_figure1(&config, dir.path()).unwrap();
        for row in &out.summary.rows {
            assert_eq!(row.mean_ms, row.min_ms);
            assert_eq!(row.mean_ms, row.max_ms);
        }
    }

    #[test]
    fn protected_summary_sits_in_published_regime() {
        let dir = tempfile::tempdir().unwrap();
        let config = ExperimentConfig::default();
        let out = run_protected(&config, dir.path()).unwrap();
        for row in &out.summary.rows {
            assert!((6.0..=7.2).contains(&row.mean_ms), "{} mean {}", row.kind, row.mean_ms);
            assert!(row.min_ms >= 2.0, "{} min {}", row.kind, row.min_ms);
            assert!(row.max_ms <= 10.5, "{} max {}", row.kind, row.max_ms);
        }
        // means lie within one pooled standard deviation of each other
        let pooled_std = (out.summary.rows.iter().map(|r| r.std_ms * r.std_ms).sum::<f64>()
            / out.summary.rows.len() as f64)
            .sqrt();
        for a in &out.summary.rows {
            for b in &out.summary.rows {
                assert!((a.mean_ms - b.mean_ms).abs() < pooled_std);
            }
        }
    }

    #[test]
    fn zero_delay_profile_reproduces_unprotected_summary() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = ExperimentConfig::default();
        config.countermeasure.protect = CountermeasureMode::Explicit;
        config.countermeasure.mean_s = Some(1e-300);
        config.countermeasure.variance_s2 = Some(1e-300);
        let protected = run_protected(&config, dir.path()).unwrap();
        for row in &protected.summary.rows {
            let kind = ActivationKind::parse(&row.kind).unwrap();
            let base = &protected.traces[&kind];
            assert!(base.protected);
        }
        // shift is ~1e-300 s, so the summary matches the unprotected table
        let tanh = protected.summary.rows.iter().find(|r| r.kind == "tanh").unwrap();
        assert!((tanh.mean_ms - 0.5170).abs() / 0.5170 < 0.02);
    }

    #[test]
    fn auto_calibrate_emits_report_with_digest() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = ExperimentConfig::default();
        config.countermeasure.protect = CountermeasureMode::AutoCalibrate;
        let out = run_protected(&config, dir.path()).unwrap();
        assert_eq!(out.distribution.mean, 6e-4);
        assert_eq!(out.distribution.variance, 1e-5);
        let text = std::fs::read_to_string(dir.path().join("reports/calibration.toml")).unwrap();
        assert!(text.contains("inputs_digest"));
    }

    #[test]
    fn tvla_suite_defaults_separate_cleanly() {
        let dir = tempfile::tempdir().unwrap();
        let config = ExperimentConfig::default();
        let report = run_tvla_suite(&config, dir.path()).unwrap();
        assert_eq!(report.entries.len(), 6);
        for e in &report.entries {
            if e.protected {
                assert!(!e.leaks, "{} protected t {}", e.kind, e.t_statistic);
            } else {
                assert!(e.leaks, "{} unprotected t {}", e.kind, e.t_statistic);
            }
        }
        let plot = std::fs::read_to_string(dir.path().join("plots/tvla.dat")).unwrap();
        assert!(plot.contains("threshold 4.5"));
    }

    #[test]
    fn tvla_low_power_flagged() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = ExperimentConfig::default();
        config.campaign.n_tvla_per_set = 2;
        let report = run_tvla_suite(&config, dir.path()).unwrap();
        assert!(report.entries.iter().all(|e| e.low_power));
    }

    #[test]
    fn repro_rerun_is_byte_identical() {
        let config = ExperimentConfig::default();
        let run = |dir: &std::path::Path| {
            run_repro(&config, dir).unwrap();
            let mut digests = Vec::new();
            for entry in walk(dir) {
                digests.push((
                    entry.strip_prefix(dir).unwrap().to_path_buf(),
                    fsio::file_digest(&entry).unwrap(),
                ));
            }
            digests.sort();
            digests
        };
        let a_dir = tempfile::tempdir().unwrap();
        let b_dir = tempfile::tempdir().unwrap();
        assert_eq!(run(a_dir.path()), run(b_dir.path()));
    }

    fn walk(dir: &std::path::Path) -> Vec<std::path::PathBuf> {
        let mut files = Vec::new();
        let mut stack = vec![dir.to_path_buf()];
        while let Some(d) = stack.pop() {
            for entry in std::fs::read_dir(&d).unwrap() {
                let path = entry.unwrap().path();
                if path.is_dir() {
                    stack.push(path);
                } else {
                    files.push(path);
                }
            }
        }
        files
    }
}
