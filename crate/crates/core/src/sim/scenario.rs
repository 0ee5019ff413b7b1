//! Environment profiles for the case studies.

use alloc::vec;
use alloc::vec::Vec;

use super::{Breakpoint, EnvProfile, Interpolation, SimError};
use crate::pv::{EnvSample, STC_TEMPERATURE};

/// Constant lead-in and lead-out around a ramp, s.
pub const RAMP_PAD: f64 = 1.0;

/// Linear irradiance ramp from `g_from` to `g_to` over `ramp_seconds`, with
/// one second of constant irradiance before and after.
pub fn scenario_ramp(g_from: f64, g_to: f64, ramp_seconds: f64, t_k: f64) -> Result<EnvProfile, SimError> {
    if !(ramp_seconds > 0.0) || !ramp_seconds.is_finite() {
        return Err(SimError::Config("ramp duration must be positive"));
    }
    let at = |t: f64, g: f64| Breakpoint { t, env: EnvSample::uniform(g, t_k) };
    EnvProfile::new(
        ramp_seconds + 2.0 * RAMP_PAD,
        vec![at(0.0, g_from), at(RAMP_PAD, g_from), at(RAMP_PAD + ramp_seconds, g_to)],
        Interpolation::Linear,
    )
}

/// Half the substrings at `g_full`, the other half at `g_shaded`, constant
/// for `duration`.
pub fn scenario_partial_shade(
    g_full: f64,
    g_shaded: f64,
    t_k: f64,
    duration: f64,
    n_substrings: usize,
) -> Result<EnvProfile, SimError> {
    if n_substrings == 0 || !n_substrings.is_multiple_of(2) {
        return Err(SimError::Config("partial shading needs an even substring count"));
    }
    let half = n_substrings / 2;
    let g: Vec<f64> = (0..n_substrings).map(|k| if k < half { g_full } else { g_shaded }).collect();
    EnvProfile::constant(EnvSample::per_substring(g, t_k), duration)
}

/// Constant uniform irradiance and temperature.
pub fn scenario_constant(g: f64, t_k: f64, duration: f64) -> Result<EnvProfile, SimError> {
    EnvProfile::constant(EnvSample::uniform(g, t_k), duration)
}

/// Step-and-ramp profile for the irradiance/temperature tracking case:
/// a settled start, a fast rise, a second of rapid irradiance swings,
/// then a joint irradiance fall and temperature rise, and a settled end.
pub fn scenario_case_one() -> EnvProfile {
    let t0 = STC_TEMPERATURE;
    let points: [(f64, f64, f64); 16] = [
        (0.0, 800.0, t0),
        (0.5, 800.0, t0),
        (0.8, 1000.0, t0 + 1.0),
        (1.0, 1000.0, t0 + 1.0),
        (1.1, 880.0, t0 + 1.0),
        (1.2, 1000.0, t0 + 1.0),
        (1.3, 860.0, t0 + 1.0),
        (1.4, 980.0, t0 + 1.0),
        (1.5, 840.0, t0 + 1.0),
        (1.6, 960.0, t0 + 1.0),
        (1.7, 850.0, t0 + 1.0),
        (1.8, 950.0, t0 + 1.0),
        (1.9, 880.0, t0 + 1.0),
        (2.0, 950.0, t0 + 1.5),
        (3.0, 600.0, t0 + 8.0),
        (3.5, 600.0, t0 + 8.0),
    ];
    let breakpoints = points.iter().map(|&(t, g, tk)| Breakpoint { t, env: EnvSample::uniform(g, tk) }).collect();
    EnvProfile::new(4.0, breakpoints, Interpolation::Linear).expect("static profile is valid")
}

/// Start and end of the fast-change window of [`scenario_case_one`], s.
pub const CASE_ONE_FAST_WINDOW: (f64, f64) = (1.0, 2.0);
