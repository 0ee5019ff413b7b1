//! On-disk formats: dataset, model, loss history, trace, locus and metrics.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use mppt_core::nn::Activation;
use mppt_core::{MppSample, Network, NormBounds, SimTrace};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct DatasetRow {
    g_wpm2: f64,
    t_k: f64,
    v_mpp_v: f64,
    p_mpp_w: f64,
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    Ok(BufWriter::new(File::create(path).map_err(|e| CliError::io(path, e))?))
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    CliError::Format { path: path.to_path_buf(), message: e.to_string() }
}

pub fn write_dataset(path: &Path, samples: &[MppSample]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    for s in samples {
        let row = DatasetRow { g_wpm2: s.g, t_k: s.t, v_mpp_v: s.v_mpp, p_mpp_w: s.p_mpp };
        w.serialize(row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn read_dataset(path: &Path) -> Result<Vec<MppSample>, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut r = csv::Reader::from_reader(file);
    r.deserialize::<DatasetRow>()
        .map(|row| {
            let row = row.map_err(|e| csv_error(path, e))?;
            Ok(MppSample { g: row.g_wpm2, t: row.t_k, v_mpp: row.v_mpp_v, p_mpp: row.p_mpp_w })
        })
        .collect()
}

/// Serialized network. Weights are stored per layer as row-major
/// `outputs × inputs` matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub layer_sizes: Vec<usize>,
    pub activations: Vec<Activation>,
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
    pub bounds: NormBounds,
}

impl ModelFile {
    pub fn from_network(net: &Network) -> Self {
        let layers = net.layers().len();
        Self {
            format_version: MODEL_FORMAT_VERSION,
            layer_sizes: net.layer_sizes(),
            activations: net.activations(),
            weights: (0..layers).map(|l| net.weights(l).to_vec()).collect(),
            biases: (0..layers).map(|l| net.biases(l).to_vec()).collect(),
            bounds: *net.bounds(),
        }
    }

    pub fn into_network(self) -> Result<Network, mppt_core::NnError> {
        Network::from_parts(&self.layer_sizes, &self.activations, &self.weights, &self.biases, self.bounds)
    }
}

pub fn write_model(path: &Path, net: &Network) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, &ModelFile::from_network(net))
        .map_err(|e| CliError::Format { path: path.to_path_buf(), message: e.to_string() })?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
}

pub fn read_model(path: &Path) -> Result<Network, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let file: ModelFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Format { path: path.to_path_buf(), message: e.to_string() })?;
    if file.format_version != MODEL_FORMAT_VERSION {
        return Err(CliError::Format {
            path: path.to_path_buf(),
            message: format!("unsupported model format version {}", file.format_version),
        });
    }
    file.into_network().map_err(|e| CliError::Format { path: path.to_path_buf(), message: e.to_string() })
}

pub fn write_history(path: &Path, history: &[f64]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["epoch", "loss"]).map_err(|e| csv_error(path, e))?;
    for (epoch, e) in history.iter().enumerate() {
        w.write_record([epoch.to_string(), e.to_string()]).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_trace(path: &Path, trace: &SimTrace) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["t_s", "g_wpm2", "t_k", "v_v", "i_a", "p_w", "p_ref_w", "p_mpp_w"])
        .map_err(|e| csv_error(path, e))?;
    for r in &trace.rows {
        let fields = [r.t, r.g, r.t_k, r.v, r.i, r.p_actual, r.p_ref, r.p_mpp];
        w.write_record(fields.iter().map(f64::to_string)).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_locus(path: &Path, locus: &[(f64, f64)]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["v_v", "p_w"]).map_err(|e| csv_error(path, e))?;
    for (v, p) in locus {
        w.write_record([v.to_string(), p.to_string()]).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| CliError::Format { path: path.to_path_buf(), message: e.to_string() })?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
}
