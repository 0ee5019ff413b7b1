use mppt_core::dataset::{self, DatasetSpec};
use mppt_core::pv::{calibrate, EnvSample, PvArray, PvArrayConfig};
use mppt_core::sim::{run, scenario, Breakpoint, EnvProfile, Interpolation, PlantConfig};
use mppt_core::{CommandKind, ControlError, Controller, ControllerCommand, IncCond, Measurement, PerturbObserve};
use proptest::prelude::*;

fn array() -> PvArray {
    calibrate(&PvArrayConfig::default()).unwrap()
}

#[test]
fn dataset_is_monotone_in_irradiance() {
    let spec = DatasetSpec::default();
    let samples = dataset::sweep(&spec, &array()).unwrap();
    assert_eq!(samples.len(), 209);
    for t in spec.temperature_levels() {
        let column: Vec<f64> = samples.iter().filter(|s| s.t == t).map(|s| s.p_mpp).collect();
        assert!(column.windows(2).all(|w| w[1] > w[0]), "t = {t}");
    }
    let stc = samples.iter().find(|s| s.g == 1000.0 && (s.t - 298.0).abs() < 1e-9).unwrap();
    // 298 K is 0.15 K above the datasheet temperature
    assert!((stc.p_mpp - 115.5).abs() / 115.5 < 0.01);
}

#[test]
fn dataset_is_warmer_is_weaker() {
    let samples = dataset::sweep(&DatasetSpec::default(), &array()).unwrap();
    let row: Vec<f64> = samples.iter().filter(|s| s.g == 800.0).map(|s| s.p_mpp).collect();
    assert!(row.windows(2).all(|w| w[1] < w[0]));
}

/// Emits the oracle MPP power for the sensed (uniform) environment.
struct OracleReference(PvArray, Option<((f64, f64), f64)>);

impl OracleReference {
    fn new(array: &PvArray) -> Self {
        Self(array.clone(), None)
    }
}

impl Controller for OracleReference {
    fn kind(&self) -> CommandKind {
        CommandKind::Power
    }

    fn step(&mut self, m: &Measurement) -> Result<ControllerCommand, ControlError> {
        let p = match self.1 {
            Some((key, p)) if key == (m.g, m.t) => p,
            _ => self.0.find_mpp(&EnvSample::uniform(m.g, m.t)).unwrap().1,
        };
        self.1 = Some(((m.g, m.t), p));
        Ok(ControllerCommand::power(p))
    }

    fn name(&self) -> &'static str {
        "oracle"
    }
}

/// Emits a fixed, arbitrary sequence of power references.
struct Scripted(Vec<f64>, usize);

impl Controller for Scripted {
    fn kind(&self) -> CommandKind {
        CommandKind::Power
    }

    fn step(&mut self, _: &Measurement) -> Result<ControllerCommand, ControlError> {
        self.1 += 1;
        Ok(ControllerCommand::power(self.0[(self.1 - 1) % self.0.len()]))
    }

    fn name(&self) -> &'static str {
        "scripted"
    }
}

#[test]
fn runs_are_deterministic() {
    let array = array();
    let profile = scenario::scenario_case_one();
    let plant = PlantConfig::default();
    let a = run(&profile, &plant, &mut IncCond::for_array(array.config(), 0.05).unwrap(), &array).unwrap();
    let b = run(&profile, &plant, &mut IncCond::for_array(array.config(), 0.05).unwrap(), &array).unwrap();
    assert_eq!(a, b);
}

#[test]
fn delivered_power_never_beats_the_oracle() {
    let array = array();
    let plant = PlantConfig::default();
    let shaded = scenario::scenario_partial_shade(1000.0, 500.0, 298.15, 1.0, 2).unwrap();
    let ramp = scenario::scenario_ramp(300.0, 1000.0, 2.0, 298.15).unwrap();
    for profile in [&shaded, &ramp] {
        let traces = [
            run(profile, &plant, &mut PerturbObserve::new(0.05).unwrap(), &array).unwrap(),
            run(profile, &plant, &mut IncCond::for_array(array.config(), 0.05).unwrap(), &array).unwrap(),
            run(profile, &plant, &mut OracleReference::new(&array), &array).unwrap(),
        ];
        for trace in &traces {
            assert!(trace.rows.iter().all(|r| r.p_actual <= 1.005 * r.p_mpp));
        }
    }
}

#[test]
fn oracle_reference_efficiency_on_constant_runs() {
    let array = array();
    let plant = PlantConfig::default();
    for (g, t) in [(1000.0, 298.15), (400.0, 310.0), (800.0, 273.0)] {
        let profile = scenario::scenario_constant(g, t, 2.0).unwrap();
        let trace = run(&profile, &plant, &mut OracleReference::new(&array), &array).unwrap();
        assert!(trace.metrics.tracking_efficiency >= 0.98 * (1.0 - plant.loss_fraction), "{g} {t}");
    }
}

#[test]
fn halving_dt_barely_moves_efficiency() {
    let array = array();
    let profile = scenario::scenario_case_one();
    let coarse = PlantConfig::default();
    let fine = PlantConfig { dt: coarse.dt / 2.0, ..coarse.clone() };
    let a = run(&profile, &coarse, &mut OracleReference::new(&array), &array).unwrap();
    let b = run(&profile, &fine, &mut OracleReference::new(&array), &array).unwrap();
    let (ea, eb) = (a.metrics.tracking_efficiency, b.metrics.tracking_efficiency);
    assert!((ea - eb).abs() / ea < 0.005, "{ea} vs {eb}");
}

#[test]
fn trace_rows_follow_the_tick_cadence() {
    let array = array();
    let profile = scenario::scenario_constant(600.0, 300.0, 0.5).unwrap();
    let trace = run(&profile, &PlantConfig::default(), &mut PerturbObserve::new(0.05).unwrap(), &array).unwrap();
    assert_eq!(trace.len(), 500);
    for (k, r) in trace.rows.iter().enumerate() {
        assert_eq!(r.t, k as f64 * 1e-3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn voltage_stays_in_range_for_any_reference(
        refs in proptest::collection::vec(-50.0f64..400.0, 1..40),
        g in 100.0f64..1100.0,
    ) {
        let array = array();
        let profile = EnvProfile::new(
            0.3,
            vec![Breakpoint { t: 0.0, env: EnvSample::uniform(g, 298.15) }],
            Interpolation::Step,
        ).unwrap();
        let trace = run(&profile, &PlantConfig::default(), &mut Scripted(refs, 0), &array).unwrap();
        let voc = array.v_oc_adjusted(&EnvSample::uniform(g, 298.15)).unwrap();
        prop_assert!(trace.rows.iter().all(|r| r.v >= 0.0 && r.v <= voc));
    }
}
