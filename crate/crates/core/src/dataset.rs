//! Offline training data: MPPs of the uniformly lit array over an
//! (irradiance, temperature) grid.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::nn::Sample;
use crate::normalize::{NormBounds, NormError};
use crate::pv::{EnvSample, PvArray, PvError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DatasetError {
    #[error("invalid dataset spec: {0}")]
    InvalidSpec(&'static str),
    #[error(transparent)]
    Model(#[from] PvError),
    #[error(transparent)]
    Bounds(#[from] NormError),
}

/// One grid point and its oracle MPP.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MppSample {
    /// W/m²
    pub g: f64,
    /// K
    pub t: f64,
    pub v_mpp: f64,
    pub p_mpp: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DatasetSpec {
    pub g_min: f64,
    pub g_max: f64,
    pub g_step: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub t_step: f64,
    pub holdout_fraction: f64,
    pub rng_seed: u64,
}

impl Default for DatasetSpec {
    fn default() -> Self {
        Self {
            g_min: 100.0,
            g_max: 1000.0,
            g_step: 50.0,
            t_min: 273.0,
            t_max: 323.0,
            t_step: 5.0,
            holdout_fraction: 0.2,
            rng_seed: 42,
        }
    }
}

impl DatasetSpec {
    pub fn validate(&self) -> Result<(), DatasetError> {
        let all = [self.g_min, self.g_max, self.g_step, self.t_min, self.t_max, self.t_step, self.holdout_fraction];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(DatasetError::InvalidSpec("non-finite value"));
        }
        if self.g_step <= 0.0 || self.t_step <= 0.0 {
            return Err(DatasetError::InvalidSpec("steps must be positive"));
        }
        if self.g_min < 0.0 || self.g_max < self.g_min {
            return Err(DatasetError::InvalidSpec("irradiance range must be non-negative and ordered"));
        }
        if self.t_min <= 0.0 || self.t_max < self.t_min {
            return Err(DatasetError::InvalidSpec("temperature range must be positive and ordered"));
        }
        if !(0.0..1.0).contains(&self.holdout_fraction) {
            return Err(DatasetError::InvalidSpec("holdout fraction must lie in [0, 1)"));
        }
        Ok(())
    }

    pub fn irradiance_levels(&self) -> Vec<f64> {
        axis(self.g_min, self.g_max, self.g_step)
    }

    pub fn temperature_levels(&self) -> Vec<f64> {
        axis(self.t_min, self.t_max, self.t_step)
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.irradiance_levels().len() * self.temperature_levels().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = libm::floor((hi - lo) / step + 1e-9) as usize + 1;
    (0..n).map(|k| lo + k as f64 * step).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSplit {
    pub train: Vec<MppSample>,
    pub validation: Vec<MppSample>,
}

impl DatasetSplit {
    /// Training samples followed by validation samples.
    pub fn all(&self) -> Vec<MppSample> {
        self.train.iter().chain(&self.validation).copied().collect()
    }
}

/// Oracle MPP at every grid point (irradiance-major order).
pub fn sweep(spec: &DatasetSpec, array: &PvArray) -> Result<Vec<MppSample>, DatasetError> {
    spec.validate()?;
    let temps = spec.temperature_levels();
    let mut out = Vec::with_capacity(spec.len());
    for g in spec.irradiance_levels() {
        for &t in &temps {
            let (v_mpp, p_mpp) = array.find_mpp(&EnvSample::uniform(g, t))?;
            out.push(MppSample { g, t, v_mpp, p_mpp });
        }
    }
    Ok(out)
}

/// Sweeps the grid, shuffles with the spec's seed and splits off
/// `round(n · holdout_fraction)` validation samples from the tail.
pub fn generate(spec: &DatasetSpec, array: &PvArray) -> Result<DatasetSplit, DatasetError> {
    let mut samples = sweep(spec, array)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    samples.shuffle(&mut rng);
    let n_val = libm::round(samples.len() as f64 * spec.holdout_fraction) as usize;
    let validation = samples.split_off(samples.len() - n_val);
    Ok(DatasetSplit { train: samples, validation })
}

/// Maps raw samples to network samples: input (G, T), target P_mpp.
pub fn normalize_set(samples: &[MppSample], bounds: &NormBounds) -> Result<Vec<Sample>, DatasetError> {
    samples
        .iter()
        .map(|s| {
            let input = bounds.normalize_input(s.g, s.t)?;
            let target = bounds.power.normalize(s.p_mpp)?;
            Ok(Sample::new(input.to_vec(), target))
        })
        .collect()
}

/// Inverse of [`normalize_set`] for one sample: `(g, t, p_mpp)`.
pub fn denormalize_sample(sample: &Sample, bounds: &NormBounds) -> (f64, f64, f64) {
    (
        bounds.irradiance.denormalize(sample.input[0]),
        bounds.temperature.denormalize(sample.input[1]),
        bounds.power.denormalize(sample.target),
    )
}
