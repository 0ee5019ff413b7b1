use mppt_core::pv::{calibrate, EnvSample, PvArray, PvArrayConfig, STC_TEMPERATURE};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn array() -> PvArray {
    calibrate(&PvArrayConfig::default()).unwrap()
}

/// Straight-line reading of the model: substring voltage explicit in the
/// string current, bypass clamp at zero, temperature scaling of a, Iph, I0.
struct Reference {
    iph: Vec<f64>,
    i0: f64,
    a_sub: f64,
    rs_sub: f64,
}

impl Reference {
    fn new(array: &PvArray, g: &[f64], t: f64) -> Self {
        let c = array.config();
        let n = c.n_substrings as f64;
        let dt = t - STC_TEMPERATURE;
        let isc_t = c.i_sc + c.temp_coeff_isc * dt;
        let voc_t = c.v_oc + c.temp_coeff_voc * dt;
        let a_t = array.thermal_voltage() * t / STC_TEMPERATURE;
        let iph_t = array.photo_current() * isc_t / c.i_sc;
        let i0 = iph_t / ((voc_t / a_t).exp() - 1.0);
        let iph = (0..c.n_substrings).map(|k| iph_t * g[if g.len() == 1 { 0 } else { k }] / 1000.0).collect();
        Self { iph, i0, a_sub: a_t / n, rs_sub: c.series_resistance / n }
    }

    fn voltage(&self, i: f64) -> f64 {
        self.iph
            .iter()
            .map(|&iph| {
                if iph - i + self.i0 <= 0.0 {
                    return 0.0;
                }
                (self.a_sub * ((iph - i) / self.i0 + 1.0).ln() - i * self.rs_sub).max(0.0)
            })
            .sum()
    }

    /// Bisection on the monotone V(I).
    fn current(&self, v: f64) -> f64 {
        let mut lo = 0.0;
        let mut hi = self.iph.iter().cloned().fold(0.0, f64::max) + self.i0;
        if self.voltage(0.0) <= v {
            return 0.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.voltage(mid) > v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Exhaustive 1 mV sweep.
    fn mpp(&self) -> (f64, f64) {
        let voc = self.voltage(0.0);
        let n = (voc / 1e-3) as usize;
        (0..=n).map(|k| k as f64 * 1e-3).map(|v| (v, v * self.current(v))).fold((0.0, 0.0), |b, x| {
            if x.1 > b.1 {
                x
            } else {
                b
            }
        })
    }
}

#[test]
fn mpp_matches_exhaustive_sweep() {
    let array = array();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let g = rng.random_range(100.0..1100.0);
        let t = rng.random_range(268.0..338.0);
        let (_, p) = array.find_mpp(&EnvSample::uniform(g, t)).unwrap();
        let (_, p_ref) = Reference::new(&array, &[g], t).mpp();
        assert!((p - p_ref).abs() / p_ref < 5e-4, "g={g} t={t} p={p} sweep={p_ref}");
        assert!(p >= p_ref * (1.0 - 1e-6), "search should not lose to a 1 mV grid");
    }
}

#[test]
fn shaded_mpp_matches_exhaustive_sweep() {
    let array = array();
    for (g1, g2) in [(1000.0, 500.0), (900.0, 200.0), (1000.0, 800.0), (600.0, 550.0)] {
        let env = EnvSample::per_substring(vec![g1, g2], 298.15);
        let (_, p) = array.find_mpp(&env).unwrap();
        let (_, p_ref) = Reference::new(&array, &[g1, g2], 298.15).mpp();
        assert!((p - p_ref).abs() / p_ref < 5e-4, "{g1}/{g2}: {p} vs {p_ref}");
    }
}

#[test]
fn current_matches_reference_curve() {
    let array = array();
    let env = EnvSample::per_substring(vec![1000.0, 400.0], 310.0);
    let model = array.at(&env).unwrap();
    let reference = Reference::new(&array, &env.g, env.t);
    for k in 0..=100 {
        let v = model.v_oc() * k as f64 / 100.0;
        let i = model.current(v).unwrap();
        assert!((i - reference.current(v)).abs() < 1e-7, "v={v}");
    }
}

#[test]
fn datasheet_points_at_stc() {
    let array = array();
    let model = array.at(&EnvSample::stc()).unwrap();
    assert!((model.current(0.0).unwrap() - 15.0).abs() / 15.0 < 0.005);
    assert!(model.current(10.0).unwrap().abs() < 0.005 * 15.0);
    let (v, p) = model.find_mpp().unwrap();
    assert!((v - 8.25).abs() / 8.25 < 0.01);
    assert!((p - 115.5).abs() / 115.5 < 0.01);
}

#[test]
fn shaded_peak_lies_between_uniform_peaks() {
    let array = array();
    let (_, full) = array.find_mpp(&EnvSample::uniform(1000.0, 298.15)).unwrap();
    let (_, half) = array.find_mpp(&EnvSample::uniform(500.0, 298.15)).unwrap();
    let (_, shaded) = array.find_mpp(&EnvSample::per_substring(vec![1000.0, 500.0], 298.15)).unwrap();
    assert!(half < shaded && shaded < full);
}

fn local_maxima(p: &[f64]) -> usize {
    (1..p.len() - 1).filter(|&k| p[k] > p[k - 1] && p[k] >= p[k + 1]).count()
}

#[test]
fn half_shading_gives_two_peaks() {
    let curve = array().pv_curve(&EnvSample::per_substring(vec![1000.0, 500.0], 298.15), 2000).unwrap();
    let p: Vec<f64> = curve.iter().map(|pt| pt.p).collect();
    assert_eq!(local_maxima(&p), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn current_is_monotone_in_voltage(g in 50.0f64..1200.0, t in 253.0f64..348.0) {
        let curve = array().pv_curve(&EnvSample::uniform(g, t), 400).unwrap();
        for w in curve.windows(2) {
            prop_assert!(w[1].i <= w[0].i + 1e-12);
        }
    }

    #[test]
    fn short_circuit_current_scales_with_irradiance(g in 10.0f64..1200.0, t in 253.0f64..348.0) {
        let array = array();
        let i1 = array.current(0.0, &EnvSample::uniform(g, t)).unwrap();
        let i2 = array.current(0.0, &EnvSample::uniform(0.5 * g, t)).unwrap();
        prop_assert!((i1 - 2.0 * i2).abs() <= 1e-6 * i1);
    }

    #[test]
    fn peaks_bounded_by_substring_count(g1 in 50.0f64..1200.0, g2 in 50.0f64..1200.0) {
        let curve = array().pv_curve(&EnvSample::per_substring(vec![g1, g2], 298.15), 1000).unwrap();
        let p: Vec<f64> = curve.iter().map(|pt| pt.p).collect();
        prop_assert!(local_maxima(&p) <= 2);
    }

    #[test]
    fn terminal_voltage_inverts_current(v_frac in 0.01f64..0.99, g in 100.0f64..1200.0) {
        let model = array().at(&EnvSample::uniform(g, 298.15)).unwrap();
        let v = v_frac * model.v_oc();
        let i = model.current(v).unwrap();
        let (v_back, dv_di) = model.terminal_voltage(i);
        // the solve stops on a current tolerance of 1e-10 A
        prop_assert!((v_back - v).abs() <= dv_di.abs() * 1e-10 + 1e-9);
    }
}
