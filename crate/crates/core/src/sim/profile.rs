use alloc::vec::Vec;

use super::SimError;
use crate::pv::EnvSample;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Interpolation {
    Step,
    Linear,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Breakpoint {
    /// s
    pub t: f64,
    pub env: EnvSample,
}

/// Environment over time: breakpoints strictly increasing in `t`, the first
/// at `t = 0`; the last value is held to the end of the run.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawProfile"))]
pub struct EnvProfile {
    duration: f64,
    breakpoints: Vec<Breakpoint>,
    interpolation: Interpolation,
}

#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct RawProfile {
    duration: f64,
    breakpoints: Vec<Breakpoint>,
    interpolation: Interpolation,
}

#[cfg(feature = "serde")]
impl TryFrom<RawProfile> for EnvProfile {
    type Error = SimError;

    fn try_from(raw: RawProfile) -> Result<Self, SimError> {
        EnvProfile::new(raw.duration, raw.breakpoints, raw.interpolation)
    }
}

impl EnvProfile {
    pub fn new(duration: f64, breakpoints: Vec<Breakpoint>, interpolation: Interpolation) -> Result<Self, SimError> {
        if !(duration >= 0.0) || !duration.is_finite() {
            return Err(SimError::Config("duration must be non-negative"));
        }
        let first = breakpoints.first().ok_or(SimError::Config("profile needs at least one breakpoint"))?;
        if first.t != 0.0 {
            return Err(SimError::Config("first breakpoint must be at t = 0"));
        }
        if breakpoints.windows(2).any(|w| !(w[1].t > w[0].t)) {
            return Err(SimError::Config("breakpoints must be strictly increasing in time"));
        }
        let width = first.env.g.len();
        for bp in &breakpoints {
            if bp.env.g.len() != width {
                return Err(SimError::Config("breakpoints disagree on substring count"));
            }
            bp.env.validate().map_err(|_| SimError::Config("invalid environment sample"))?;
        }
        Ok(Self { duration, breakpoints, interpolation })
    }

    pub fn constant(env: EnvSample, duration: f64) -> Result<Self, SimError> {
        Self::new(duration, alloc::vec![Breakpoint { t: 0.0, env }], Interpolation::Step)
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    /// Environment at time `t`.
    pub fn at(&self, t: f64) -> EnvSample {
        let idx = self.breakpoints.partition_point(|bp| bp.t <= t).saturating_sub(1);
        let here = &self.breakpoints[idx];
        match (self.interpolation, self.breakpoints.get(idx + 1)) {
            (Interpolation::Linear, Some(next)) if t > here.t => {
                let w = (t - here.t) / (next.t - here.t);
                let g = here.env.g.iter().zip(&next.env.g).map(|(a, b)| a + w * (b - a)).collect();
                EnvSample { g, t: here.env.t + w * (next.env.t - here.env.t) }
            }
            _ => here.env.clone(),
        }
    }
}
