//! Reference implementations of the activation functions under study.
//!
//! These serve as functional ground truth and as the compute kernel for
//! the optional host-clock measurement backend. They are not the source
//! of simulated timings; see [`crate::profile`] for that.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent arguments are clamped to this magnitude before calling
/// `exp`; sigmoid and tanh saturate far below it, so the clamp does not
/// change values at 1e-12 tolerance.
const EXP_CLAMP: f64 = 500.0;

/// The three activation functions with data-dependent timing behavior.
///
/// This enumeration is closed; additional activations enter the toolkit
/// through user-registered timing profiles, not through this type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ActivationKind {
    ReLU,
    Sigmoid,
    Tanh,
}

impl ActivationKind {
    /// All members, in the fixed tie-break order used by the distinguisher.
    pub const ALL: [ActivationKind; 3] = [
        ActivationKind::ReLU,
        ActivationKind::Sigmoid,
        ActivationKind::Tanh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ActivationKind::ReLU => "relu",
            ActivationKind::Sigmoid => "sigmoid",
            ActivationKind::Tanh => "tanh",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "relu" => Ok(ActivationKind::ReLU),
            "sigmoid" => Ok(ActivationKind::Sigmoid),
            "tanh" => Ok(ActivationKind::Tanh),
            other => Err(Error::Config(format!("unknown activation '{other}'"))),
        }
    }
}

impl std::fmt::Display for ActivationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // honor width/alignment flags so names line up in tables
        f.pad(self.name())
    }
}

fn clamped_exp(x: f64) -> f64 {
    x.clamp(-EXP_CLAMP, EXP_CLAMP).exp()
}

/// Evaluate an activation function at `x`.
///
/// Returns a domain error for non-finite input; the result is finite
/// for every finite input.
pub fn evaluate(kind: ActivationKind, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("non-finite activation input {x}")));
    }
    Ok(match kind {
        ActivationKind::ReLU => {
            if x <= 0.0 {
                0.0
            } else {
                x
            }
        }
        ActivationKind::Sigmoid => 1.0 / (1.0 + clamped_exp(-x)),
        ActivationKind::Tanh => {
            let (ex, enx) = (clamped_exp(x), clamped_exp(-x));
            (ex - enx) / (ex + enx)
        }
    })
}
