use std::path::{Path, PathBuf};

use mppt_core::dataset::{self, DatasetSpec};
use mppt_core::sim::{self, operating_locus, scenario};
use mppt_core::{
    calibrate, nn_reference, Metrics, MppSample, Network, NnError, NormBounds, PlantConfig, PvArray, PvArrayConfig,
    SimTrace, TrainConfig,
};
use serde::Serialize;

use crate::config::{build_controller, ControllerConfig, RunConfig};
use crate::{formats, CliError};

/// Relative power tolerance of the post-write oracle check.
const ORACLE_CHECK_TOL: f64 = 5e-4;

fn calibrated(cfg: &PvArrayConfig) -> Result<PvArray, CliError> {
    calibrate(cfg).map_err(|e| CliError::Config(format!("array: {e}")))
}

#[derive(Debug, Clone)]
pub struct GenerateArgs {
    pub spec: DatasetSpec,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerateReport {
    pub samples: usize,
    pub validation: usize,
    /// Rows whose re-read power disagrees with a fresh oracle evaluation.
    pub mismatches: usize,
}

/// Writes the training rows followed by the held-out rows, then re-reads the
/// file and checks every row against the oracle.
pub fn generate(args: &GenerateArgs) -> Result<GenerateReport, CliError> {
    args.spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let array = calibrated(&PvArrayConfig::default())?;
    let split = dataset::generate(&args.spec, &array).map_err(|e| CliError::Oracle(e.to_string()))?;
    let all = split.all();
    formats::write_dataset(&args.out, &all)?;

    let reread = formats::read_dataset(&args.out)?;
    let mut mismatches = 0;
    for s in &reread {
        let (_, p) =
            array.find_mpp(&mppt_core::EnvSample::uniform(s.g, s.t)).map_err(|e| CliError::Oracle(e.to_string()))?;
        if (s.p_mpp - p).abs() > ORACLE_CHECK_TOL * p.max(1e-9) {
            mismatches += 1;
        }
    }
    if reread.len() != all.len() {
        return Err(CliError::Oracle(format!("wrote {} rows, read back {}", all.len(), reread.len())));
    }
    if mismatches > 0 {
        return Err(CliError::Oracle(format!("{mismatches} rows disagree with the oracle")));
    }
    Ok(GenerateReport { samples: all.len(), validation: split.validation.len(), mismatches })
}

#[derive(Debug, Clone)]
pub struct TrainArgs {
    pub data: PathBuf,
    pub config: TrainConfig,
    /// Trailing fraction of the dataset held out for validation.
    pub holdout: f64,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    pub converged: bool,
    pub final_loss: f64,
    pub epochs: usize,
    /// Largest held-out |prediction − oracle| as a fraction of p_max.
    pub validation_max_error: f64,
    pub model_path: PathBuf,
    pub history_path: PathBuf,
}

/// `model.json` → `model.history.csv`.
pub fn history_path(model: &Path) -> PathBuf {
    model.with_extension("history.csv")
}

pub fn split_dataset(samples: Vec<MppSample>, holdout: f64) -> Result<(Vec<MppSample>, Vec<MppSample>), CliError> {
    if !(0.0..1.0).contains(&holdout) {
        return Err(CliError::Usage("holdout must lie in [0, 1)".into()));
    }
    let mut train = samples;
    let n_val = (train.len() as f64 * holdout).round() as usize;
    let validation = train.split_off(train.len() - n_val);
    if train.is_empty() {
        return Err(CliError::Usage("dataset has no training rows".into()));
    }
    Ok((train, validation))
}

pub fn validation_error(net: &Network, validation: &[MppSample], p_max: f64) -> Result<f64, CliError> {
    validation.iter().try_fold(0.0f64, |worst, s| {
        let y = nn_reference(net, s.g, s.t, p_max).map_err(|e| CliError::Config(format!("validation sample: {e}")))?;
        Ok(worst.max((y - s.p_mpp).abs() / p_max))
    })
}

/// Trains the 2-20-20-1 network and writes the model and its loss history.
/// Non-convergence still writes both files; the caller maps it to exit 3.
pub fn train(args: &TrainArgs) -> Result<TrainOutcome, CliError> {
    args.config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let samples = formats::read_dataset(&args.data)?;
    let (train_rows, validation) = split_dataset(samples, args.holdout)?;
    let p_max = PvArrayConfig::default().p_max;
    let bounds = NormBounds::for_array(p_max);
    let data = dataset::normalize_set(&train_rows, &bounds).map_err(|e| CliError::Config(e.to_string()))?;

    let mut net = Network::mppt(bounds, args.config.rng_seed);
    let (converged, history) = match net.train(&data, &args.config) {
        Ok(report) => (true, report.history),
        Err(NnError::DidNotConverge { history, .. }) => (false, history),
        Err(e) => return Err(CliError::Config(format!("training: {e}"))),
    };
    let history_path = history_path(&args.out);
    formats::write_model(&args.out, &net)?;
    formats::write_history(&history_path, &history)?;
    Ok(TrainOutcome {
        converged,
        final_loss: *history.last().expect("history holds the initial loss"),
        epochs: history.len() - 1,
        validation_max_error: validation_error(&net, &validation, p_max)?,
        model_path: args.out.clone(),
        history_path,
    })
}

#[derive(Debug, Serialize)]
pub struct MetricsDocument<'a, C: Serialize> {
    pub controller: &'a str,
    pub tracking_efficiency: f64,
    pub steady_state_ripple: f64,
    pub settle_time: f64,
    pub config: &'a C,
}

#[derive(Debug, Clone)]
pub struct SimulateOutcome {
    pub controller: &'static str,
    pub metrics: Metrics,
    pub trace_path: PathBuf,
    pub metrics_path: PathBuf,
    pub trace: SimTrace,
}

/// Runs one configured scenario and writes `trace.csv` and `metrics.json`
/// into the resolved output directory.
pub fn simulate(cfg: &RunConfig, out: Option<&Path>) -> Result<SimulateOutcome, CliError> {
    cfg.validate()?;
    let array = calibrated(&cfg.array)?;
    let profile = cfg.profile()?;
    let mut controller = cfg.controller()?;
    let trace = sim::run(&profile, &cfg.plant, &mut *controller, &array).map_err(CliError::Simulation)?;
    let dir = cfg.resolve_output_dir(out);
    let trace_path = dir.join("trace.csv");
    let metrics_path = dir.join("metrics.json");
    formats::write_trace(&trace_path, &trace)?;
    let m = trace.metrics;
    let doc = MetricsDocument {
        controller: controller.name(),
        tracking_efficiency: m.tracking_efficiency,
        steady_state_ripple: m.steady_state_ripple,
        settle_time: m.settle_time,
        config: cfg,
    };
    formats::write_json(&metrics_path, &doc)?;
    Ok(SimulateOutcome { controller: controller.name(), metrics: m, trace_path, metrics_path, trace })
}

#[derive(Debug, Clone)]
pub struct CompareArgs {
    pub model: PathBuf,
    pub out: PathBuf,
    pub with_ripple_test: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub scenario: String,
    pub controller: String,
    pub tracking_efficiency: Option<f64>,
    pub steady_state_ripple: Option<f64>,
    pub settle_time: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
    pub summary_path: PathBuf,
}

impl CompareReport {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    pub fn efficiency(&self, scenario: &str, controller: &str) -> Option<f64> {
        self.rows.iter().find(|r| r.scenario == scenario && r.controller == controller)?.tracking_efficiency
    }

    pub fn ripple(&self, scenario: &str, controller: &str) -> Option<f64> {
        self.rows.iter().find(|r| r.scenario == scenario && r.controller == controller)?.steady_state_ripple
    }
}

pub const COMPARE_CONTROLLERS: [&str; 3] = ["po", "inc-cond", "rprop-nn"];

/// Benchmark scenarios by name.
pub fn compare_scenarios(with_ripple_test: bool) -> Vec<(&'static str, mppt_core::EnvProfile)> {
    let t = mppt_core::pv::STC_TEMPERATURE;
    let mut out = vec![
        ("ramp-2s", scenario::scenario_ramp(300.0, 1000.0, 2.0, t).expect("valid ramp")),
        ("ramp-10s", scenario::scenario_ramp(300.0, 1000.0, 10.0, t).expect("valid ramp")),
    ];
    if with_ripple_test {
        out.push(("constant-stc", scenario::scenario_constant(1000.0, t, 3.0).expect("valid profile")));
    }
    out
}

/// Runs every controller over every benchmark scenario concurrently and
/// writes per-run traces and loci plus `summary.csv`, in scenario order.
pub fn compare(args: &CompareArgs) -> Result<CompareReport, CliError> {
    if !args.model.is_file() {
        return Err(CliError::Config(format!("model file not found: {}", args.model.display())));
    }
    formats::read_model(&args.model)?;
    let array_cfg = PvArrayConfig::default();
    let array = calibrated(&array_cfg)?;
    let plant = PlantConfig::default();
    let controllers: Vec<(&str, ControllerConfig)> = vec![
        ("po", ControllerConfig::Po { v_step: 0.05 }),
        ("inc-cond", ControllerConfig::IncCond { v_step: 0.05, delta: None }),
        (
            "rprop-nn",
            ControllerConfig::RpropNn {
                model_path: args.model.clone(),
                gamma: mppt_core::SupervisionConfig::default().gamma,
                threshold_frac: mppt_core::SupervisionConfig::default().threshold_frac,
                supervised: true,
            },
        ),
    ];
    let scenarios = compare_scenarios(args.with_ripple_test);

    let jobs: Vec<(&str, &mppt_core::EnvProfile, &str, &ControllerConfig)> = scenarios
        .iter()
        .flat_map(|(s, profile)| controllers.iter().map(move |(c, cfg)| (*s, profile, *c, cfg)))
        .collect();

    let results: Vec<Result<Metrics, String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(s, profile, c, cfg)| {
                let (array, array_cfg, plant) = (&array, &array_cfg, &plant);
                let dir = args.out.join(s).join(c);
                scope.spawn(move || -> Result<Metrics, String> {
                    let mut ctl = build_controller(cfg, array_cfg).map_err(|e| e.to_string())?;
                    let trace = sim::run(profile, plant, &mut *ctl, array).map_err(|e| e.to_string())?;
                    formats::write_trace(&dir.join("trace.csv"), &trace).map_err(|e| e.to_string())?;
                    let locus = operating_locus(&trace).map_err(|e| e.to_string())?;
                    formats::write_locus(&dir.join("locus.csv"), &locus).map_err(|e| e.to_string())?;
                    Ok(trace.metrics)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| Err("run panicked".into()))).collect()
    });

    let rows: Vec<CompareRow> = jobs
        .iter()
        .zip(results)
        .map(|(&(s, _, c, _), r)| match r {
            Ok(m) => CompareRow {
                scenario: s.into(),
                controller: c.into(),
                tracking_efficiency: Some(m.tracking_efficiency),
                steady_state_ripple: Some(m.steady_state_ripple),
                settle_time: Some(m.settle_time),
                error: None,
            },
            Err(e) => CompareRow {
                scenario: s.into(),
                controller: c.into(),
                tracking_efficiency: None,
                steady_state_ripple: None,
                settle_time: None,
                error: Some(e),
            },
        })
        .collect();

    let summary_path = args.out.join("summary.csv");
    write_summary(&summary_path, &rows)?;
    Ok(CompareReport { rows, summary_path })
}

fn write_summary(path: &Path, rows: &[CompareRow]) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| CliError::Format { path: path.to_path_buf(), message: e.to_string() })?;
    for row in rows {
        w.serialize(row).map_err(|e| CliError::Format { path: path.to_path_buf(), message: e.to_string() })?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}
