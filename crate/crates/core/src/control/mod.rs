//! MPPT strategies behind one stepping interface.
//!
//! A controller sees one [`Measurement`] per control period and answers with
//! a [`ControllerCommand`]: either an operating-voltage reference (P&O,
//! Inc-Cond) or a power reference (network controller) that the plant's PI
//! loop tracks.

mod inc_cond;
mod neural;
mod perturb_observe;
mod supervision;

pub use inc_cond::IncCond;
pub use neural::{nn_reference, NnController};
pub use perturb_observe::PerturbObserve;
pub use supervision::{compute_isc_real, SupervisionConfig, SupervisionState};

use crate::nn::NnError;
use crate::normalize::NormError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ControlError {
    #[error("invalid controller parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("sensor reading outside the network envelope: {0}")]
    Bounds(#[from] NormError),
    #[error(transparent)]
    Network(#[from] NnError),
}

/// Sensor view of one control period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub v: f64,
    pub i: f64,
    /// `v · i`
    pub p: f64,
    /// Aggregate irradiance reported by the pyranometer, W/m².
    pub g: f64,
    /// K
    pub t: f64,
}

impl Measurement {
    pub fn new(v: f64, i: f64, g: f64, t: f64) -> Self {
        Self { v, i, p: v * i, g, t }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum CommandKind {
    Voltage,
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerCommand {
    pub kind: CommandKind,
    /// V for voltage references, W for power references.
    pub value: f64,
}

impl ControllerCommand {
    pub fn voltage(v: f64) -> Self {
        Self { kind: CommandKind::Voltage, value: v.max(0.0) }
    }

    pub fn power(p: f64) -> Self {
        Self { kind: CommandKind::Power, value: p.max(0.0) }
    }
}

pub trait Controller {
    /// Reference kind emitted for the whole run.
    fn kind(&self) -> CommandKind;

    fn step(&mut self, meas: &Measurement) -> Result<ControllerCommand, ControlError>;

    fn name(&self) -> &'static str;
}

impl<C: Controller + ?Sized> Controller for alloc::boxed::Box<C> {
    fn kind(&self) -> CommandKind {
        (**self).kind()
    }

    fn step(&mut self, meas: &Measurement) -> Result<ControllerCommand, ControlError> {
        (**self).step(meas)
    }

    fn name(&self) -> &'static str {
        (**self).name()
    }
}
