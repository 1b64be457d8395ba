//! Deployment cost model: what the random-delay countermeasure costs
//! per neuron and per layer once the multiply-accumulate work of a
//! fully-connected layer is accounted for.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Published per-operation costs for the reference target.
pub const PAPER_MULT_TIME: f64 = 1.165e-5;
pub const PAPER_ADD_TIME: f64 = 1.124e-5;

/// Published activation-time range without the countermeasure, seconds.
pub const PAPER_UNPROTECTED_ACTIVATION: TimeRange = TimeRange {
    min: 0.21e-4,
    max: 5.99e-4,
};
/// Published activation-time range with the countermeasure, seconds.
pub const PAPER_PROTECTED_ACTIVATION: TimeRange = TimeRange {
    min: 3.11e-3,
    max: 10.01e-3,
};

/// Closed `[min, max]` duration range in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeRange {
    pub min: f64,
    pub max: f64,
}

impl TimeRange {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min <= max) {
            return Err(Error::Config(format!("inverted time range [{min}, {max}]")));
        }
        Ok(TimeRange { min, max })
    }

    fn shift(self, offset: f64) -> TimeRange {
        TimeRange {
            min: self.min + offset,
            max: self.max + offset,
        }
    }

    fn scale(self, k: f64) -> TimeRange {
        TimeRange {
            min: self.min * k,
            max: self.max * k,
        }
    }
}

/// One fully-connected layer: inputs per neuron and neuron count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub fan_in: u64,
    pub neuron_count: u64,
    pub activation: String,
}

/// Per-operation costs and layer shapes for overhead computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkCostModel {
    /// Seconds per multiplication.
    pub mult_time: f64,
    /// Seconds per addition.
    pub add_time: f64,
    pub layers: Vec<LayerSpec>,
    /// When set, the multiply-accumulate total is rounded to this many
    /// significant figures before the activation time is added. The
    /// published worked example quotes the MAC total as "about 0.09 s"
    /// and derives its ranges from that rounded figure; one significant
    /// figure reproduces that arithmetic.
    pub mac_sig_figs: Option<u32>,
}

impl NetworkCostModel {
    pub fn new(mult_time: f64, add_time: f64, layers: Vec<LayerSpec>) -> Result<Self> {
        if !(mult_time > 0.0) || !(add_time > 0.0) {
            return Err(Error::Config("operation times must be positive".into()));
        }
        if layers.iter().any(|l| l.fan_in == 0 || l.neuron_count == 0) {
            return Err(Error::Config("layers need fan_in >= 1 and neuron_count >= 1".into()));
        }
        Ok(NetworkCostModel {
            mult_time,
            add_time,
            layers,
            mac_sig_figs: None,
        })
    }

    /// The VGG-19 tail scenario from the published worked example: 1000
    /// output neurons, each fed by the 4096-neuron hidden layer.
    pub fn vgg19_scenario() -> Self {
        let mut model = NetworkCostModel::new(
            PAPER_MULT_TIME,
            PAPER_ADD_TIME,
            vec![LayerSpec {
                fan_in: 4096,
                neuron_count: 1000,
                activation: "relu".into(),
            }],
        )
        .expect("static scenario is valid");
        model.mac_sig_figs = Some(1);
        model
    }

    fn layer(&self, index: usize) -> Result<&LayerSpec> {
        self.layers
            .get(index)
            .ok_or_else(|| Error::Config(format!("no layer with index {index}")))
    }

    /// Multiply-accumulate time for one neuron of a layer, with the
    /// optional significant-figure rounding applied.
    pub fn mac_time(&self, layer_index: usize) -> Result<f64> {
        let layer = self.layer(layer_index)?;
        let exact = layer.fan_in as f64 * (self.mult_time + self.add_time);
        Ok(match self.mac_sig_figs {
            Some(n) => round_sig_figs(exact, n),
            None => exact,
        })
    }

    /// Total time range for one neuron: MAC work plus the activation
    /// time range, element-wise.
    pub fn neuron_time_range(&self, layer_index: usize, activation: TimeRange) -> Result<TimeRange> {
        Ok(activation.shift(self.mac_time(layer_index)?))
    }
}

fn round_sig_figs(x: f64, n: u32) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let e = x.abs().log10().floor() as i32;
    let factor = 10f64.powi(n as i32 - 1 - e);
    (x * factor).round() / factor
}

/// Percentage range `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PercentRange {
    pub min: f64,
    pub max: f64,
}

/// Overhead figures for one layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerOverhead {
    pub layer_index: usize,
    pub activation: String,
    pub neuron_baseline: TimeRange,
    pub neuron_protected: TimeRange,
    pub layer_baseline: TimeRange,
    pub layer_protected: TimeRange,
    /// Endpoint-wise overhead: (protected.min - baseline.min)/baseline.min
    /// and the analogue for the maxima.
    pub overhead_pct: PercentRange,
    /// Extreme-ratio span: slowest protected against fastest baseline
    /// and vice versa; this is how the published 2.6%-11% figure pairs
    /// the ranges.
    pub overhead_span_pct: PercentRange,
}

/// Countermeasure cost report across all layers of a model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverheadReport {
    pub layers: Vec<LayerOverhead>,
    pub note: String,
}

impl OverheadReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Compute the overhead report for a model, given the per-call
/// activation time ranges without and with the countermeasure
/// (one pair applied to every layer).
pub fn overhead_report(
    model: &NetworkCostModel,
    unprotected: TimeRange,
    protected: TimeRange,
) -> Result<OverheadReport> {
    if !(unprotected.min <= unprotected.max) || !(protected.min <= protected.max) {
        return Err(Error::Config("inverted activation time range".into()));
    }
    if protected.min < unprotected.min || protected.max < unprotected.max {
        return Err(Error::Config(
            "protected activation range must dominate the unprotected range".into(),
        ));
    }
    let mut layers = Vec::with_capacity(model.layers.len());
    for (i, spec) in model.layers.iter().enumerate() {
        let baseline = model.neuron_time_range(i, unprotected)?;
        let shielded = model.neuron_time_range(i, protected)?;
        if !(baseline.min > 0.0) {
            return Err(Error::DegenerateData(
                "baseline neuron time is zero; overhead is undefined".into(),
            ));
        }
        let pct = |p: f64, b: f64| (p - b) / b * 100.0;
        layers.push(LayerOverhead {
            layer_index: i,
            activation: spec.activation.clone(),
            neuron_baseline: baseline,
            neuron_protected: shielded,
            layer_baseline: baseline.scale(spec.neuron_count as f64),
            layer_protected: shielded.scale(spec.neuron_count as f64),
            overhead_pct: PercentRange {
                min: pct(shielded.min, baseline.min),
                max: pct(shielded.max, baseline.max),
            },
            overhead_span_pct: PercentRange {
                min: pct(shielded.min, baseline.max),
                max: pct(shielded.max, baseline.min),
            },
        });
    }
    Ok(OverheadReport {
        layers,
        note: "timing of arithmetic only; memory operations are excluded, so overhead on a \
               full computation would be lower"
            .into(),
    })
}
