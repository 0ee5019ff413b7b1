//! Photovoltaic maximum-power-point tracking toolkit.
//!
//! The crate is `no_std` (it needs `alloc`) and contains every numerical
//! piece of the toolkit:
//!
//! * [`pv`]: single-diode array model with per-substring bypass diodes, a
//!   datasheet calibrator and a global MPP search.
//! * [`nn`]: a small dense network trained with sign-driven resilient
//!   backpropagation (iRprop⁻).
//! * [`dataset`]: offline (irradiance, temperature) → MPP sweeps used as
//!   training data.
//! * [`control`]: perturb-and-observe, incremental conductance and the
//!   network-reference controller with short-circuit current supervision.
//! * [`sim`]: deterministic fixed-step closed-loop simulator, scenario
//!   generators and tracking metrics.
//!
//! File formats, configuration documents and the command line live in the
//! `mppt-cli` crate.

#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod control;
pub mod dataset;
pub mod nn;
pub mod normalize;
pub mod pv;
pub mod search;
pub mod sim;

pub use control::{
    compute_isc_real, nn_reference, CommandKind, ControlError, Controller, ControllerCommand, IncCond, Measurement,
    NnController, PerturbObserve, SupervisionConfig, SupervisionState,
};
pub use dataset::{DatasetError, DatasetSpec, DatasetSplit, MppSample};
pub use nn::{Activation, Network, NnError, RpropState, Sample, TrainConfig, TrainReport};
pub use normalize::{MinMax, NormBounds, NormError};
pub use pv::{calibrate, EnvSample, IvPoint, PvArray, PvArrayConfig, PvError};
pub use sim::{EnvProfile, Interpolation, Metrics, PlantConfig, SimError, SimTrace, TraceRow};
