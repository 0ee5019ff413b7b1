//! Fixed-step closed-loop simulation.
//!
//! The converter chain is reduced to one state, the array's operating
//! voltage. Voltage references are slewed toward directly; power references
//! drive a discrete PI loop on `p_ref − v·i` whose output moves the voltage.
//! Each tick: interpolate the environment, measure, ask the controller, record
//! a trace row, then advance the plant.

mod metrics;
mod profile;
pub mod scenario;

pub use metrics::{direction_reversals, metrics, operating_locus, ripple, Metrics};
pub use profile::{Breakpoint, EnvProfile, Interpolation};

use alloc::vec::Vec;

use crate::control::{CommandKind, ControlError, Controller, Measurement};
use crate::pv::{EnvSample, PvArray, PvError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    Config(&'static str),
    #[error("array model failed at tick {tick}: {source}")]
    Model { tick: usize, source: PvError },
    #[error("controller failed at tick {tick}: {source}")]
    Control { tick: usize, source: ControlError },
    #[error("controller switched reference kind at tick {tick}")]
    KindChanged { tick: usize },
    #[error("empty trace")]
    EmptyTrace,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct PlantConfig {
    /// Control and integration period, s.
    pub dt: f64,
    /// V/W
    pub pi_kp: f64,
    /// V/(W·s)
    pub pi_ki: f64,
    /// V/s
    pub v_slew_max: f64,
    /// Fraction of electrical power lost before delivery.
    pub loss_fraction: f64,
    /// Starting operating voltage as a fraction of the first tick's open
    /// circuit voltage.
    pub v_init_fraction: f64,
}

impl Default for PlantConfig {
    fn default() -> Self {
        Self { dt: 1e-3, pi_kp: 0.02, pi_ki: 2.0, v_slew_max: 200.0, loss_fraction: 0.02, v_init_fraction: 0.9 }
    }
}

impl PlantConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(SimError::Config("dt must be positive"));
        }
        if !(self.pi_kp >= 0.0 && self.pi_ki >= 0.0) {
            return Err(SimError::Config("PI gains must be non-negative"));
        }
        if !(self.v_slew_max > 0.0) {
            return Err(SimError::Config("slew limit must be positive"));
        }
        if !(0.0..0.1).contains(&self.loss_fraction) {
            return Err(SimError::Config("loss fraction must lie in [0, 0.1)"));
        }
        if !(0.0..=1.0).contains(&self.v_init_fraction) {
            return Err(SimError::Config("initial voltage fraction must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// One simulated control period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    /// s
    pub t: f64,
    /// Aggregate irradiance, W/m².
    pub g: f64,
    /// K
    pub t_k: f64,
    pub v: f64,
    pub i: f64,
    /// Delivered power after losses, W.
    pub p_actual: f64,
    /// Power reference; for voltage-reference controllers the electrical
    /// power at the operating point.
    pub p_ref: f64,
    /// Oracle global MPP power, W.
    pub p_mpp: f64,
    /// Raw command value (V or W).
    pub command: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimTrace {
    pub rows: Vec<TraceRow>,
    pub dt: f64,
    pub metrics: Metrics,
}

impl SimTrace {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// Rows with `t` in `[from, to)`.
    pub fn window(&self, from: f64, to: f64) -> &[TraceRow] {
        let start = self.rows.partition_point(|r| r.t < from);
        let end = self.rows.partition_point(|r| r.t < to);
        &self.rows[start..end]
    }
}

/// Runs `controller` against `array` under `env` for the profile's duration.
///
/// The operating voltage starts at `v_init_fraction` of open circuit.
pub fn run<C: Controller + ?Sized>(
    env: &EnvProfile,
    plant: &PlantConfig,
    controller: &mut C,
    array: &PvArray,
) -> Result<SimTrace, SimError> {
    plant.validate()?;
    let n_ticks = libm::round(env.duration() / plant.dt) as usize;
    let mut rows = Vec::with_capacity(n_ticks);
    if n_ticks == 0 {
        return Ok(SimTrace { rows, dt: plant.dt, metrics: Metrics::default() });
    }

    let kind = controller.kind();
    let mut v = f64::NAN;
    let mut prev_error: Option<f64> = None;
    let mut oracle: Option<(EnvSample, f64)> = None;

    for tick in 0..n_ticks {
        let t = tick as f64 * plant.dt;
        let sample = env.at(t);
        let model = array.at(&sample).map_err(|source| SimError::Model { tick, source })?;
        let v_oc = model.v_oc();
        v = if v.is_nan() { plant.v_init_fraction * v_oc } else { v.clamp(0.0, v_oc) };
        let i = model.current(v).map_err(|source| SimError::Model { tick, source })?;
        let p_el = v * i;
        let meas = Measurement::new(v, i, sample.aggregate_irradiance(), sample.t);

        let cmd = controller.step(&meas).map_err(|source| SimError::Control { tick, source })?;
        if cmd.kind != kind {
            return Err(SimError::KindChanged { tick });
        }

        let p_mpp = match &oracle {
            Some((cached, p)) if *cached == sample => *p,
            _ => {
                let (_, p) = model.find_mpp().map_err(|source| SimError::Model { tick, source })?;
                oracle = Some((sample.clone(), p));
                p
            }
        };

        rows.push(TraceRow {
            t,
            g: meas.g,
            t_k: meas.t,
            v,
            i,
            p_actual: p_el * (1.0 - plant.loss_fraction),
            p_ref: match kind {
                CommandKind::Power => cmd.value,
                CommandKind::Voltage => p_el,
            },
            p_mpp,
            command: cmd.value,
        });

        let dv = match kind {
            CommandKind::Voltage => cmd.value - v,
            CommandKind::Power => {
                // velocity-form PI; clamping the state is the anti-windup
                let error = cmd.value - p_el;
                let d_error = error - prev_error.unwrap_or(error);
                prev_error = Some(error);
                -(plant.pi_kp * d_error + plant.pi_ki * plant.dt * error)
            }
        };
        let max_dv = plant.v_slew_max * plant.dt;
        v = (v + dv.clamp(-max_dv, max_dv)).clamp(0.0, v_oc);
    }

    let metrics = metrics::compute(&rows, plant.dt);
    Ok(SimTrace { rows, dt: plant.dt, metrics })
}
