//! Min-max scaling between raw engineering units and the network's [0, 1] range.

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum NormError {
    #[error("value {value} outside [{lo}, {hi}]")]
    BoundsViolation { value: f64, lo: f64, hi: f64 },
    #[error("empty or inverted range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MinMax {
    pub lo: f64,
    pub hi: f64,
}

impl MinMax {
    pub fn new(lo: f64, hi: f64) -> Result<Self, NormError> {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(NormError::InvalidRange { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn normalize(&self, x: f64) -> Result<f64, NormError> {
        if !self.contains(x) {
            return Err(NormError::BoundsViolation { value: x, lo: self.lo, hi: self.hi });
        }
        Ok(self.normalize_unchecked(x))
    }

    /// Scales without checking the envelope; used on network outputs, which
    /// may legitimately stray slightly outside [0, 1].
    pub fn normalize_unchecked(&self, x: f64) -> f64 {
        (x - self.lo) / (self.hi - self.lo)
    }

    pub fn denormalize(&self, y: f64) -> f64 {
        self.lo + y * (self.hi - self.lo)
    }
}

/// Fixed envelopes for the network's inputs (irradiance, temperature) and
/// output (MPP power).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NormBounds {
    pub irradiance: MinMax,
    pub temperature: MinMax,
    pub power: MinMax,
}

impl NormBounds {
    /// G ∈ [0, 1200] W/m², T ∈ [253, 348] K, P ∈ [0, 1.1·p_max] W.
    pub fn for_array(p_max: f64) -> Self {
        Self {
            irradiance: MinMax { lo: 0.0, hi: 1200.0 },
            temperature: MinMax { lo: 253.0, hi: 348.0 },
            power: MinMax { lo: 0.0, hi: 1.1 * p_max },
        }
    }

    pub fn normalize_input(&self, g: f64, t: f64) -> Result<[f64; 2], NormError> {
        Ok([self.irradiance.normalize(g)?, self.temperature.normalize(t)?])
    }
}
