use serde::{Deserialize, Serialize};

/// `T(i) = 10 * exp(-i / 5)`.
pub fn default_temperature(i: usize) -> f64 {
    10.0 * (-(i as f64) / 5.0).exp()
}

/// Temperature as a function of the 1-based iteration index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TemperatureSchedule {
    /// `initial * exp(-i / decay)`.
    Exponential {
        initial: f64,
        decay: f64,
    },
    Constant {
        value: f64,
    },
}

impl Default for TemperatureSchedule {
    fn default() -> Self {
        Self::Exponential {
            initial: 10.0,
            decay: 5.0,
        }
    }
}

impl TemperatureSchedule {
    pub fn zero() -> Self {
        Self::Constant { value: 0.0 }
    }

    pub fn temperature(&self, i: usize) -> f64 {
        match *self {
            Self::Exponential { initial, decay } => initial * (-(i as f64) / decay).exp(),
            Self::Constant { value } => value,
        }
    }

    pub fn is_valid(&self) -> bool {
        match *self {
            Self::Exponential { initial, decay } => {
                initial >= 0.0 && initial.is_finite() && decay > 0.0 && decay.is_finite()
            }
            Self::Constant { value } => value >= 0.0 && value.is_finite(),
        }
    }
}

/// Annealing acceptance for a non-improving candidate. At `T = 0` the
/// probability is zero and `draw` is never called.
pub(crate) fn accept_worse(delta: f64, temperature: f64, draw: impl FnOnce() -> f64) -> bool {
    if temperature <= 0.0 {
        return false;
    }
    (delta / temperature).exp() >= draw()
}
