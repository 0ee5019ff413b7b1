use super::{CommandKind, ControlError, Controller, ControllerCommand, Measurement};
use crate::pv::PvArrayConfig;

/// Incremental conductance: compares `ΔI/ΔV` with `−I/V`.
#[derive(Debug, Clone, PartialEq)]
pub struct IncCond {
    v_step: f64,
    /// Half-width of the hold band, A/V.
    delta: f64,
    /// Previous (v, i) and the reference emitted with it.
    last: Option<(f64, f64, f64)>,
}

impl IncCond {
    pub fn new(v_step: f64, delta: f64) -> Result<Self, ControlError> {
        if !(v_step > 0.0) || !v_step.is_finite() {
            return Err(ControlError::InvalidParameter("v_step must be positive"));
        }
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(ControlError::InvalidParameter("delta must be non-negative"));
        }
        Ok(Self { v_step, delta, last: None })
    }

    /// Hold band of `0.01 · i_sc / v_oc`.
    pub fn for_array(cfg: &PvArrayConfig, v_step: f64) -> Result<Self, ControlError> {
        Self::new(v_step, 0.01 * cfg.i_sc / cfg.v_oc)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    fn direction(&self, meas: &Measurement, v0: f64, i0: f64) -> f64 {
        let dv = meas.v - v0;
        let di = meas.i - i0;
        if dv == 0.0 {
            return signum_or_zero(di);
        }
        if meas.v <= 0.0 {
            return 1.0;
        }
        let mismatch = di / dv + meas.i / meas.v;
        if mismatch.abs() <= self.delta {
            0.0
        } else {
            signum_or_zero(mismatch)
        }
    }
}

fn signum_or_zero(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl Controller for IncCond {
    fn kind(&self) -> CommandKind {
        CommandKind::Voltage
    }

    fn step(&mut self, meas: &Measurement) -> Result<ControllerCommand, ControlError> {
        let reference = match self.last {
            // No history yet: step toward the knee. Starting from open
            // circuit (I = 0) the conductance test would read as an MPP.
            None => meas.v - self.v_step,
            Some((v0, i0, prev_ref)) => prev_ref + self.direction(meas, v0, i0) * self.v_step,
        };
        let cmd = ControllerCommand::voltage(reference);
        self.last = Some((meas.v, meas.i, cmd.value));
        Ok(cmd)
    }

    fn name(&self) -> &'static str {
        "inc-cond"
    }
}
