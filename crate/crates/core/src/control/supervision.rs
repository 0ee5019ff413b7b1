//! Short-circuit current supervision of a power reference.
//!
//! A power reference above what the array can deliver makes the PI loop slide
//! past the MPP toward short circuit. The supervisor watches the string
//! current against an irradiance/temperature estimate of the short-circuit
//! current and, while the current is too close to it, attenuates the
//! reference geometrically, approaching the feasible maximum from above.

use super::Measurement;

/// Estimated short-circuit current at irradiance `g` (W/m²) and temperature
/// `t` (K): `i_sc_stc · (g/1000)^1.01 · (t/300)^0.2775`.
pub fn compute_isc_real(g: f64, t: f64, i_sc_stc: f64) -> f64 {
    if g <= 0.0 {
        return 0.0;
    }
    i_sc_stc * libm::pow(g / 1000.0, 1.01) * libm::pow(t / 300.0, 0.2775)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SupervisionConfig {
    /// Attenuation factor per triggered supervision tick, in (0, 1).
    pub gamma: f64,
    /// Trigger when `i > threshold_frac · I_sc,real`.
    pub threshold_frac: f64,
    /// Short-circuit current at standard conditions, A.
    pub i_sc_stc: f64,
    /// Control periods per supervision tick.
    pub tick_period: u32,
    /// Irradiance change (W/m²) that releases a held attenuation.
    pub deadband_g: f64,
    /// Temperature change (K) that releases a held attenuation.
    pub deadband_t: f64,
}

impl Default for SupervisionConfig {
    fn default() -> Self {
        Self { gamma: 0.95, threshold_frac: 0.94, i_sc_stc: 15.0, tick_period: 10, deadband_g: 10.0, deadband_t: 1.0 }
    }
}

impl SupervisionConfig {
    pub fn validate(&self) -> Result<(), super::ControlError> {
        use super::ControlError::InvalidParameter;
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(InvalidParameter("gamma must lie in (0, 1)"));
        }
        if !(self.threshold_frac > 0.0) || !(self.i_sc_stc > 0.0) {
            return Err(InvalidParameter("threshold and i_sc_stc must be positive"));
        }
        if self.tick_period == 0 {
            return Err(InvalidParameter("tick_period must be at least 1"));
        }
        if !(self.deadband_g >= 0.0) || !(self.deadband_t >= 0.0) {
            return Err(InvalidParameter("dead-bands must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SupervisionState {
    /// Corrected reference, W.
    pub y_cor: f64,
    pub triggered: bool,
    /// Sensor reading at the last attenuation.
    anchor: Option<(f64, f64)>,
    /// Attenuations applied since construction.
    pub attenuations: u32,
}

impl SupervisionState {
    pub fn new() -> Self {
        Self::default()
    }

    /// A supervision tick: judge the current against the short-circuit
    /// estimate and update the corrected reference.
    pub fn supervise(&mut self, cfg: &SupervisionConfig, y: f64, meas: &Measurement) -> f64 {
        self.release_on_env_change(cfg, y, meas);
        let isc_real = compute_isc_real(meas.g, meas.t, cfg.i_sc_stc);
        if meas.i > cfg.threshold_frac * isc_real {
            let base = if self.triggered { self.y_cor } else { y };
            self.y_cor = cfg.gamma * base;
            self.triggered = true;
            self.anchor = Some((meas.g, meas.t));
            self.attenuations += 1;
        } else if !self.triggered {
            self.y_cor = y;
        }
        self.y_cor = self.y_cor.min(y);
        self.y_cor
    }

    /// A control period between supervision ticks: follow the raw reference
    /// unless an attenuation is being held.
    pub fn follow(&mut self, cfg: &SupervisionConfig, y: f64, meas: &Measurement) -> f64 {
        self.release_on_env_change(cfg, y, meas);
        self.y_cor = if self.triggered { self.y_cor.min(y) } else { y };
        self.y_cor
    }

    fn release_on_env_change(&mut self, cfg: &SupervisionConfig, y: f64, meas: &Measurement) {
        if let (true, Some((g, t))) = (self.triggered, self.anchor) {
            if (meas.g - g).abs() > cfg.deadband_g || (meas.t - t).abs() > cfg.deadband_t {
                self.triggered = false;
                self.anchor = None;
                self.y_cor = y;
            }
        }
    }
}
