use mppt_core::control::{
    compute_isc_real, Controller, IncCond, Measurement, PerturbObserve, SupervisionConfig, SupervisionState,
};
use mppt_core::pv::{calibrate, EnvSample, PvArrayConfig};
use mppt_core::sim::{run, scenario, PlantConfig};
use proptest::prelude::*;

/// Closes the loop by hand: the next measurement sits exactly at the
/// previous voltage reference.
fn drive(ctl: &mut dyn Controller, g: f64, ticks: usize) -> (Vec<Measurement>, Vec<f64>) {
    let array = calibrate(&PvArrayConfig::default()).unwrap();
    let model = array.at(&EnvSample::uniform(g, 298.15)).unwrap();
    let mut v = 0.9 * model.v_oc();
    let mut meas = Vec::new();
    let mut refs = Vec::new();
    for _ in 0..ticks {
        let m = Measurement::new(v, model.current(v).unwrap(), g, 298.15);
        let cmd = ctl.step(&m).unwrap();
        meas.push(m);
        refs.push(cmd.value);
        v = cmd.value.clamp(0.0, model.v_oc());
    }
    (meas, refs)
}

#[test]
fn po_never_holds_a_reference() {
    let mut po = PerturbObserve::new(0.05).unwrap();
    let (_, refs) = drive(&mut po, 1000.0, 2000);
    assert!(refs.windows(3).all(|w| !(w[0] == w[1] && w[1] == w[2])));
}

#[test]
fn po_cycles_around_the_mpp() {
    let mut po = PerturbObserve::new(0.05).unwrap();
    let (_, refs) = drive(&mut po, 1000.0, 2000);
    let tail = &refs[1000..];
    let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!(hi - lo > 0.0);
    assert!(hi - lo <= 2.0 * 0.05 + 1e-9);
    assert!(lo - 0.05 <= 8.25 && 8.25 <= hi + 0.05);
}

#[test]
fn inc_cond_holds_once_settled() {
    for (g, step) in [(1000.0, 0.005), (1000.0, 0.05), (400.0, 0.01), (700.0, 0.05)] {
        let mut ic = IncCond::for_array(&PvArrayConfig::default(), step).unwrap();
        let (_, refs) = drive(&mut ic, g, 4000);
        if let Some(k) = refs.windows(2).position(|w| w[0] == w[1]) {
            assert!(refs[k..].iter().all(|&r| r == refs[k]), "g={g} step={step} left the band");
        } else {
            assert!(step > 0.005, "fine steps must reach the band");
        }
    }
}

#[test]
fn replay_reproduces_commands() {
    let mut po = PerturbObserve::new(0.05).unwrap();
    let (meas, refs) = drive(&mut po, 700.0, 500);
    let mut fresh = PerturbObserve::new(0.05).unwrap();
    let replay: Vec<f64> = meas.iter().map(|m| fresh.step(m).unwrap().value).collect();
    assert_eq!(replay, refs);

    let mut ic = IncCond::for_array(&PvArrayConfig::default(), 0.05).unwrap();
    let (meas, refs) = drive(&mut ic, 700.0, 500);
    let mut fresh = IncCond::for_array(&PvArrayConfig::default(), 0.05).unwrap();
    let replay: Vec<f64> = meas.iter().map(|m| fresh.step(m).unwrap().value).collect();
    assert_eq!(replay, refs);
}

#[test]
fn supervision_attenuates_geometrically() {
    let cfg = SupervisionConfig::default();
    let mut state = SupervisionState::new();
    let hot = Measurement::new(0.5, 14.9, 1000.0, 298.15);
    let mut expected = 100.0;
    for _ in 0..20 {
        expected *= cfg.gamma;
        let y = state.supervise(&cfg, 100.0, &hot);
        assert!((y - expected).abs() < 1e-12 * expected);
    }
}

#[test]
fn isc_real_grid_is_strictly_monotone() {
    let gs: Vec<f64> = (1..=100).map(|k| 12.0 * k as f64).collect();
    let ts: Vec<f64> = (0..100).map(|k| 253.0 + 0.95 * k as f64).collect();
    for w in gs.windows(2) {
        assert!(compute_isc_real(w[1], 300.0, 15.0) > compute_isc_real(w[0], 300.0, 15.0));
    }
    for w in ts.windows(2) {
        assert!(compute_isc_real(1000.0, w[1], 15.0) > compute_isc_real(1000.0, w[0], 15.0));
    }
}

#[test]
fn po_command_stream_in_closed_loop() {
    let array = calibrate(&PvArrayConfig::default()).unwrap();
    let profile = scenario::scenario_constant(1000.0, 298.15, 2.0).unwrap();
    let mut po = PerturbObserve::new(0.05).unwrap();
    let trace = run(&profile, &PlantConfig::default(), &mut po, &array).unwrap();
    let cmds: Vec<f64> = trace.rows.iter().map(|r| r.command).collect();
    assert!(cmds.windows(3).all(|w| !(w[0] == w[1] && w[1] == w[2])));
}

proptest! {
    #[test]
    fn corrected_reference_never_exceeds_raw(
        steps in proptest::collection::vec((0.0f64..200.0, 0.0f64..16.0, 0.0f64..1100.0), 1..100)
    ) {
        let cfg = SupervisionConfig::default();
        let mut state = SupervisionState::new();
        for (k, (y, i, g)) in steps.into_iter().enumerate() {
            let m = Measurement::new(5.0, i, g, 298.15);
            let out = if k % 10 == 0 { state.supervise(&cfg, y, &m) } else { state.follow(&cfg, y, &m) };
            prop_assert!(out <= y);
            if y > 0.0 {
                prop_assert!(out > 0.0);
            }
        }
    }
}
