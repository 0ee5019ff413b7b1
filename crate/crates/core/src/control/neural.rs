use super::{
    CommandKind, ControlError, Controller, ControllerCommand, Measurement, SupervisionConfig, SupervisionState,
};
use crate::nn::Network;

/// MPP power predicted by `net` for sensor reading `(g, t)`, in watts,
/// clamped to `[0, 1.5 · p_max]`.
pub fn nn_reference(net: &Network, g: f64, t: f64, p_max: f64) -> Result<f64, ControlError> {
    let bounds = net.bounds();
    let input = bounds.normalize_input(g, t)?;
    let y = net.forward(&input)?;
    Ok(bounds.power.denormalize(y).clamp(0.0, 1.5 * p_max))
}

/// Power-reference controller: network prediction, optionally corrected by
/// short-circuit current supervision.
#[derive(Debug, Clone)]
pub struct NnController {
    net: Network,
    p_max: f64,
    supervision: Option<(SupervisionConfig, SupervisionState)>,
    tick: u64,
    last_raw: f64,
}

impl NnController {
    pub fn new(net: Network, p_max: f64, supervision: Option<SupervisionConfig>) -> Result<Self, ControlError> {
        if !(p_max > 0.0) {
            return Err(ControlError::InvalidParameter("p_max must be positive"));
        }
        if let Some(cfg) = &supervision {
            cfg.validate()?;
        }
        Ok(Self {
            net,
            p_max,
            supervision: supervision.map(|cfg| (cfg, SupervisionState::new())),
            tick: 0,
            last_raw: 0.0,
        })
    }

    pub fn network(&self) -> &Network {
        &self.net
    }

    pub fn supervision(&self) -> Option<&SupervisionState> {
        self.supervision.as_ref().map(|(_, s)| s)
    }

    /// Uncorrected network output of the last step, W.
    pub fn last_raw_reference(&self) -> f64 {
        self.last_raw
    }
}

impl Controller for NnController {
    fn kind(&self) -> CommandKind {
        CommandKind::Power
    }

    fn step(&mut self, meas: &Measurement) -> Result<ControllerCommand, ControlError> {
        let y = nn_reference(&self.net, meas.g, meas.t, self.p_max)?;
        self.last_raw = y;
        let reference = match &mut self.supervision {
            None => y,
            Some((cfg, state)) => {
                if self.tick.is_multiple_of(u64::from(cfg.tick_period)) {
                    state.supervise(cfg, y, meas)
                } else {
                    state.follow(cfg, y, meas)
                }
            }
        };
        self.tick += 1;
        Ok(ControllerCommand::power(reference))
    }

    fn name(&self) -> &'static str {
        if self.supervision.is_some() {
            "rprop-nn"
        } else {
            "rprop-nn-unsupervised"
        }
    }
}
