use super::{CommandKind, ControlError, Controller, ControllerCommand, Measurement};

/// Hill-climbing perturb-and-observe on the operating voltage.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbObserve {
    v_step: f64,
    direction: f64,
    /// Last emitted reference and the power measured when it was emitted.
    last: Option<(f64, f64)>,
}

impl PerturbObserve {
    pub fn new(v_step: f64) -> Result<Self, ControlError> {
        if !(v_step > 0.0) || !v_step.is_finite() {
            return Err(ControlError::InvalidParameter("v_step must be positive"));
        }
        Ok(Self { v_step, direction: 1.0, last: None })
    }

    pub fn v_step(&self) -> f64 {
        self.v_step
    }
}

impl Controller for PerturbObserve {
    fn kind(&self) -> CommandKind {
        CommandKind::Voltage
    }

    fn step(&mut self, meas: &Measurement) -> Result<ControllerCommand, ControlError> {
        let reference = match self.last {
            None => {
                self.direction = 1.0;
                meas.v + self.v_step
            }
            Some((prev_ref, prev_p)) => {
                if meas.p - prev_p <= 0.0 {
                    self.direction = -self.direction;
                }
                prev_ref + self.direction * self.v_step
            }
        };
        let cmd = ControllerCommand::voltage(reference);
        self.last = Some((cmd.value, meas.p));
        Ok(cmd)
    }

    fn name(&self) -> &'static str {
        "po"
    }
}
