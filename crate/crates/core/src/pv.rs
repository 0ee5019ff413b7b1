//! Electrical model of the PV array.
//!
//! Each substring is a five-parameter single-diode model (photo-current,
//! saturation current, modified ideality voltage, series resistance, infinite
//! shunt resistance). With no shunt branch the terminal voltage of a substring
//! is an explicit function of the string current:
//!
//! ```text
//! V_k(I) = a_k · ln((I_ph,k − I) / I_0 + 1) − I · R_s,k
//! ```
//!
//! Substrings share one current. An ideal bypass diode across each substring
//! clamps its voltage at zero once the string current exceeds what the
//! substring can carry, so the terminal voltage is `Σ max(0, V_k(I))`, which
//! is strictly decreasing wherever it is positive. [`OperatingModel::current`]
//! inverts it with a bracketed Newton iteration.

use alloc::vec::Vec;

use crate::search::{golden_section_max, local_maxima};

/// Irradiance at standard test conditions, W/m².
pub const STC_IRRADIANCE: f64 = 1000.0;
/// Cell temperature at standard test conditions, K.
pub const STC_TEMPERATURE: f64 = 298.15;

/// Boltzmann constant over the elementary charge, V/K.
const K_OVER_Q: f64 = 8.617_333_262e-5;

const NEWTON_MAX_ITER: usize = 100;
/// Convergence threshold on the Newton correction, A.
const CURRENT_TOL: f64 = 1e-10;

const CALIBRATION_MAX_ITER: usize = 100;

/// Grid size of the coarse MPP scan.
pub const MPP_GRID_POINTS: usize = 1000;
/// Voltage tolerance of the golden-section refinement, V.
pub const MPP_VOLTAGE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PvError {
    #[error("invalid array configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("calibration failed: {reason}")]
    CalibrationFailure { reason: &'static str },
    #[error("current solve did not converge at v = {v} V")]
    NonConvergence { v: f64 },
    #[error("invalid environment: {0}")]
    InvalidEnvironment(&'static str),
    #[error("environment has {got} irradiance values, array has {expected} substrings")]
    SubstringMismatch { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

/// Datasheet and structural parameters of the simulated array.
///
/// `series_resistance` and `diode_ideality` are outputs of [`calibrate`]; the
/// values carried by a raw datasheet are ignored by the fit.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct PvArrayConfig {
    pub v_oc: f64,
    pub i_sc: f64,
    pub v_mpp: f64,
    pub p_max: f64,
    /// Short-circuit current used by the supervision block.
    pub i_sc_stc: f64,
    pub n_substrings: usize,
    pub cells_per_substring: usize,
    /// Whole-string series resistance, Ω.
    pub series_resistance: f64,
    pub diode_ideality: f64,
    /// A/K
    pub temp_coeff_isc: f64,
    /// V/K
    pub temp_coeff_voc: f64,
}

impl Default for PvArrayConfig {
    fn default() -> Self {
        let v_oc = 10.0;
        let i_sc = 15.0;
        Self {
            v_oc,
            i_sc,
            v_mpp: 8.25,
            p_max: 115.5,
            i_sc_stc: i_sc,
            n_substrings: 2,
            cells_per_substring: 8,
            series_resistance: 0.0,
            diode_ideality: 1.0,
            temp_coeff_isc: 0.0005 * i_sc,
            temp_coeff_voc: -0.0023 * v_oc,
        }
    }
}

impl PvArrayConfig {
    pub fn validate(&self) -> Result<(), PvError> {
        let positive = [self.v_oc, self.i_sc, self.v_mpp, self.p_max, self.i_sc_stc];
        if positive.iter().any(|x| !x.is_finite() || *x <= 0.0) {
            return Err(PvError::InvalidConfig("electrical magnitudes must be positive"));
        }
        if self.v_mpp >= self.v_oc {
            return Err(PvError::InvalidConfig("v_mpp must be below v_oc"));
        }
        if self.n_substrings == 0 || self.cells_per_substring == 0 {
            return Err(PvError::InvalidConfig("substring and cell counts must be non-zero"));
        }
        if !self.temp_coeff_isc.is_finite() || !self.temp_coeff_voc.is_finite() {
            return Err(PvError::InvalidConfig("temperature coefficients must be finite"));
        }
        Ok(())
    }

    /// Current at the datasheet maximum power point.
    pub fn i_mpp(&self) -> f64 {
        self.p_max / self.v_mpp
    }
}

/// Irradiance per substring and cell temperature.
///
/// A single irradiance value is broadcast to every substring.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnvSample {
    /// W/m²
    pub g: Vec<f64>,
    /// K
    pub t: f64,
}

impl EnvSample {
    pub fn uniform(g: f64, t: f64) -> Self {
        Self { g: alloc::vec![g], t }
    }

    pub fn per_substring(g: Vec<f64>, t: f64) -> Self {
        Self { g, t }
    }

    pub fn stc() -> Self {
        Self::uniform(STC_IRRADIANCE, STC_TEMPERATURE)
    }

    pub fn validate(&self) -> Result<(), PvError> {
        if self.g.is_empty() {
            return Err(PvError::InvalidEnvironment("no irradiance values"));
        }
        if self.g.iter().any(|g| !g.is_finite() || *g < 0.0) {
            return Err(PvError::InvalidEnvironment("irradiance must be finite and non-negative"));
        }
        if !self.t.is_finite() || self.t <= 0.0 {
            return Err(PvError::InvalidEnvironment("temperature must be positive kelvin"));
        }
        Ok(())
    }

    /// Irradiance seen by substring `k` of `n`.
    pub fn irradiance(&self, k: usize, n: usize) -> Result<f64, PvError> {
        match self.g.len() {
            1 => Ok(self.g[0]),
            len if len == n => Ok(self.g[k]),
            got => Err(PvError::SubstringMismatch { expected: n, got }),
        }
    }

    /// Area-weighted mean irradiance: what a single pyranometer reports.
    pub fn aggregate_irradiance(&self) -> f64 {
        self.g.iter().sum::<f64>() / self.g.len() as f64
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { g: self.g.iter().map(|g| g * factor).collect(), t: self.t }
    }
}

/// One point of an I-V sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IvPoint {
    pub v: f64,
    pub i: f64,
    pub p: f64,
}

impl IvPoint {
    pub fn new(v: f64, i: f64) -> Self {
        Self { v, i, p: v * i }
    }
}

/// A calibrated array: datasheet plus the fitted single-diode parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PvArray {
    config: PvArrayConfig,
    /// String photo-current at STC, A.
    photo_current: f64,
    /// Saturation current at STC, A.
    saturation_current: f64,
    /// String modified ideality voltage `n·N_s·kT/q` at STC, V.
    thermal_voltage: f64,
}

/// Fits the single-diode parameters to the datasheet's short-circuit,
/// open-circuit and maximum-power points.
///
/// Photo-current and saturation current are eliminated analytically from the
/// short-circuit and open-circuit conditions; the remaining pair (ideality
/// voltage, series resistance) is solved by damped Newton on the MPP
/// conditions `I(V_mpp) = I_mpp` and `dP/dV(V_mpp) = 0`.
pub fn calibrate(datasheet: &PvArrayConfig) -> Result<PvArray, PvError> {
    datasheet.validate()?;
    let i_mpp = datasheet.i_mpp();
    if i_mpp >= datasheet.i_sc {
        return Err(PvError::CalibrationFailure { reason: "p_max exceeds v_mpp * i_sc" });
    }
    let fit = DiodeFit { v_oc: datasheet.v_oc, i_sc: datasheet.i_sc, v_mpp: datasheet.v_mpp, i_mpp };

    // Rs = 0 estimate: exp(-(Voc - Vmpp)/a) ≈ (Isc - Impp)/Isc
    let mut x = [(fit.v_oc - fit.v_mpp) / libm::log(fit.i_sc / (fit.i_sc - i_mpp)), 0.0];
    let mut r = fit.residual(x).ok_or(PvError::CalibrationFailure { reason: "bad initial guess" })?;

    let mut converged = false;
    for _ in 0..CALIBRATION_MAX_ITER {
        if norm(r) < 1e-12 {
            converged = true;
            break;
        }
        let jac = fit.jacobian(x).ok_or(PvError::CalibrationFailure { reason: "singular model" })?;
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(PvError::CalibrationFailure { reason: "singular jacobian" });
        }
        let step = [(r[0] * jac[1][1] - r[1] * jac[0][1]) / det, (jac[0][0] * r[1] - jac[1][0] * r[0]) / det];
        let mut damping = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial = [x[0] - damping * step[0], x[1] - damping * step[1]];
            if let Some(rt) = fit.residual(trial) {
                if norm(rt) < norm(r) {
                    x = trial;
                    r = rt;
                    accepted = true;
                    break;
                }
            }
            damping *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if !converged && norm(r) >= 1e-12 {
        return Err(PvError::CalibrationFailure { reason: "fit did not converge" });
    }

    let [a, rs] = x;
    if !(a > 0.0) || rs < 0.0 {
        return Err(PvError::CalibrationFailure { reason: "datasheet needs negative series resistance" });
    }
    let (photo_current, saturation_current) =
        fit.currents(a, rs).ok_or(PvError::CalibrationFailure { reason: "degenerate fit" })?;

    let cells = (datasheet.n_substrings * datasheet.cells_per_substring) as f64;
    let mut config = datasheet.clone();
    config.series_resistance = rs;
    config.diode_ideality = a / (cells * K_OVER_Q * STC_TEMPERATURE);

    Ok(PvArray { config, photo_current, saturation_current, thermal_voltage: a })
}

fn norm(r: [f64; 2]) -> f64 {
    r[0].abs().max(r[1].abs())
}

struct DiodeFit {
    v_oc: f64,
    i_sc: f64,
    v_mpp: f64,
    i_mpp: f64,
}

impl DiodeFit {
    /// (I_ph, I_0) satisfying I(0) = I_sc and I(V_oc) = 0.
    fn currents(&self, a: f64, rs: f64) -> Option<(f64, f64)> {
        if !(a > 1e-3) || !a.is_finite() || !rs.is_finite() {
            return None;
        }
        let e_oc = libm::expm1(self.v_oc / a);
        let e_sc = libm::expm1(self.i_sc * rs / a);
        let den = e_oc - e_sc;
        if !(den > 0.0) || !den.is_finite() {
            return None;
        }
        let i0 = self.i_sc / den;
        Some((i0 * e_oc, i0))
    }

    fn residual(&self, [a, rs]: [f64; 2]) -> Option<[f64; 2]> {
        let (iph, i0) = self.currents(a, rs)?;
        let e = libm::exp((self.v_mpp + self.i_mpp * rs) / a);
        let g = i0 / a * e;
        let r1 = iph - i0 * (e - 1.0) - self.i_mpp;
        let r2 = self.i_mpp - self.v_mpp * g / (1.0 + rs * g);
        let out = [r1 / self.i_sc, r2 / self.i_sc];
        (out[0].is_finite() && out[1].is_finite()).then_some(out)
    }

    fn jacobian(&self, x: [f64; 2]) -> Option<[[f64; 2]; 2]> {
        let h = [1e-7 * x[0].abs().max(1e-3), 1e-7 * x[1].abs().max(1e-3)];
        let mut jac = [[0.0; 2]; 2];
        for col in 0..2 {
            let mut hi = x;
            let mut lo = x;
            hi[col] += h[col];
            lo[col] -= h[col];
            let rh = self.residual(hi)?;
            let rl = self.residual(lo)?;
            for row in 0..2 {
                jac[row][col] = (rh[row] - rl[row]) / (2.0 * h[col]);
            }
        }
        Some(jac)
    }
}

impl PvArray {
    pub fn config(&self) -> &PvArrayConfig {
        &self.config
    }

    pub fn photo_current(&self) -> f64 {
        self.photo_current
    }

    pub fn saturation_current(&self) -> f64 {
        self.saturation_current
    }

    pub fn thermal_voltage(&self) -> f64 {
        self.thermal_voltage
    }

    /// The same array with its series resistance multiplied by `factor`,
    /// all other diode parameters unchanged (panel ageing).
    pub fn aged(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.config.series_resistance *= factor;
        out
    }

    /// Binds the model to one environment.
    pub fn at(&self, env: &EnvSample) -> Result<OperatingModel, PvError> {
        env.validate()?;
        let cfg = &self.config;
        let dt = env.t - STC_TEMPERATURE;
        let isc_t = cfg.i_sc + cfg.temp_coeff_isc * dt;
        let voc_t = cfg.v_oc + cfg.temp_coeff_voc * dt;
        if !(isc_t > 0.0) || !(voc_t > 0.0) {
            return Err(PvError::InvalidEnvironment("temperature outside the model's range"));
        }
        let a_t = self.thermal_voltage * env.t / STC_TEMPERATURE;
        let iph_t = self.photo_current * isc_t / cfg.i_sc;
        let i0_t = iph_t / libm::expm1(voc_t / a_t);
        if !(i0_t > 0.0) || !i0_t.is_finite() {
            return Err(PvError::InvalidEnvironment("saturation current out of range"));
        }

        let n = cfg.n_substrings;
        let mut substrings = Vec::with_capacity(n);
        for k in 0..n {
            let g = env.irradiance(k, n)?;
            substrings.push(Substring {
                photo_current: iph_t * g / STC_IRRADIANCE,
                saturation_current: i0_t,
                thermal_voltage: a_t / n as f64,
                series_resistance: cfg.series_resistance / n as f64,
            });
        }
        let seed = cfg.i_sc * env.aggregate_irradiance() / STC_IRRADIANCE;
        OperatingModel::new(substrings, seed)
    }

    /// String current at terminal voltage `v`.
    pub fn current(&self, v: f64, env: &EnvSample) -> Result<f64, PvError> {
        self.at(env)?.current(v)
    }

    /// Open-circuit voltage under `env`.
    pub fn v_oc_adjusted(&self, env: &EnvSample) -> Result<f64, PvError> {
        Ok(self.at(env)?.v_oc())
    }

    /// `n_points` uniformly spaced samples of the I-V curve on `[0, V_oc]`.
    pub fn pv_curve(&self, env: &EnvSample, n_points: usize) -> Result<Vec<IvPoint>, PvError> {
        self.at(env)?.curve(n_points)
    }

    /// Global maximum power point `(v, p)`.
    pub fn find_mpp(&self, env: &EnvSample) -> Result<(f64, f64), PvError> {
        self.at(env)?.find_mpp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Substring {
    photo_current: f64,
    saturation_current: f64,
    thermal_voltage: f64,
    series_resistance: f64,
}

impl Substring {
    /// Unclamped terminal voltage and its derivative with respect to current;
    /// `None` where the diode cannot supply the current at any voltage.
    fn voltage(&self, i: f64) -> Option<(f64, f64)> {
        let head = self.photo_current - i + self.saturation_current;
        if !(head > 0.0) {
            return None;
        }
        let v = self.thermal_voltage * libm::log1p((self.photo_current - i) / self.saturation_current)
            - i * self.series_resistance;
        let dv = -self.thermal_voltage / head - self.series_resistance;
        Some((v, dv))
    }

    /// Voltage with the bypass diode in place.
    fn bypassed_voltage(&self, i: f64) -> (f64, f64) {
        match self.voltage(i) {
            Some((v, dv)) if v > 0.0 => (v, dv),
            _ => (0.0, 0.0),
        }
    }
}

/// The array model evaluated at one environment.
#[derive(Debug, Clone)]
pub struct OperatingModel {
    substrings: Vec<Substring>,
    seed: f64,
    v_oc: f64,
    i_short: f64,
}

impl OperatingModel {
    fn new(substrings: Vec<Substring>, seed: f64) -> Result<Self, PvError> {
        let strongest = substrings
            .iter()
            .copied()
            .max_by(|a, b| a.photo_current.total_cmp(&b.photo_current))
            .ok_or(PvError::InvalidConfig("array has no substrings"))?;
        let mut model = Self { substrings, seed, v_oc: 0.0, i_short: 0.0 };
        if strongest.photo_current <= 0.0 {
            return Ok(model);
        }
        // Terminal short circuit: the strongest substring reaches zero volts,
        // every other one is already bypassed.
        model.i_short = solve_decreasing(
            |i| strongest.voltage(i).unwrap_or((f64::NEG_INFINITY, f64::NEG_INFINITY)),
            0.0,
            strongest.photo_current,
            seed,
        )
        .map_err(|_| PvError::NonConvergence { v: 0.0 })?;
        model.v_oc = model.terminal_voltage(0.0).0;
        Ok(model)
    }

    /// Open-circuit terminal voltage.
    pub fn v_oc(&self) -> f64 {
        self.v_oc
    }

    /// Terminal current at zero volts.
    pub fn short_circuit_current(&self) -> f64 {
        self.i_short
    }

    /// Terminal voltage and `dV/dI` at string current `i`.
    pub fn terminal_voltage(&self, i: f64) -> (f64, f64) {
        self.substrings.iter().fold((0.0, 0.0), |(v, dv), s| {
            let (vs, dvs) = s.bypassed_voltage(i);
            (v + vs, dv + dvs)
        })
    }

    /// String current at terminal voltage `v`, clamped at zero above the
    /// open-circuit voltage.
    pub fn current(&self, v: f64) -> Result<f64, PvError> {
        if v.is_nan() {
            return Err(PvError::InvalidArgument("voltage is NaN"));
        }
        if v <= 0.0 {
            return Ok(self.i_short);
        }
        if v >= self.v_oc {
            return Ok(0.0);
        }
        self.solve_current(v, self.i_short, self.seed)
    }

    /// Current at `v` knowing it lies in `[0, hi]`.
    fn solve_current(&self, v: f64, hi: f64, seed: f64) -> Result<f64, PvError> {
        solve_decreasing(
            |i| {
                let (vt, dv) = self.terminal_voltage(i);
                (vt - v, dv)
            },
            0.0,
            hi,
            seed,
        )
        .map_err(|_| PvError::NonConvergence { v })
    }

    pub fn power(&self, v: f64) -> Result<f64, PvError> {
        Ok(v * self.current(v)?)
    }

    pub fn curve(&self, n_points: usize) -> Result<Vec<IvPoint>, PvError> {
        if n_points < 2 {
            return Err(PvError::InvalidArgument("a curve needs at least two points"));
        }
        let step = self.v_oc / (n_points - 1) as f64;
        let mut out = Vec::with_capacity(n_points);
        let mut prev = self.i_short;
        for k in 0..n_points {
            let v = if k == n_points - 1 { self.v_oc } else { k as f64 * step };
            // the current falls with voltage: the previous point bounds and seeds the next
            let i = if v <= 0.0 {
                self.i_short
            } else if v >= self.v_oc {
                0.0
            } else {
                self.solve_current(v, prev, prev)?
            };
            prev = i;
            out.push(IvPoint::new(v, i));
        }
        Ok(out)
    }

    /// Global MPP: coarse scan, then golden-section refinement of every local
    /// maximum bracket of the scan.
    pub fn find_mpp(&self) -> Result<(f64, f64), PvError> {
        if self.v_oc <= 0.0 {
            return Ok((0.0, 0.0));
        }
        let grid = self.curve(MPP_GRID_POINTS)?;
        let powers: Vec<f64> = grid.iter().map(|pt| pt.p).collect();
        let mut best = grid.iter().map(|pt| (pt.v, pt.p)).fold((0.0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        for idx in local_maxima(&powers) {
            let lo = grid[idx.saturating_sub(1)].v;
            let hi = grid[(idx + 1).min(grid.len() - 1)].v;
            let peak = golden_section_max(|v| self.power(v), lo, hi, MPP_VOLTAGE_TOL)?;
            if peak.1 > best.1 {
                best = peak;
            }
        }
        Ok(best)
    }
}

/// Bracketed Newton iteration for a strictly decreasing `f` with a root in
/// `[lo, hi]`. Falls back to bisection whenever Newton leaves the bracket.
fn solve_decreasing<F>(f: F, mut lo: f64, mut hi: f64, seed: f64) -> Result<f64, ()>
where
    F: Fn(f64) -> (f64, f64),
{
    let mut x = if seed >= lo && seed <= hi { seed } else { 0.5 * (lo + hi) };
    for _ in 0..NEWTON_MAX_ITER {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx < 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() < CURRENT_TOL || hi - lo < CURRENT_TOL {
            return Ok(next);
        }
        x = next;
    }
    Err(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_array() -> PvArray {
        calibrate(&PvArrayConfig::default()).unwrap()
    }

    #[test]
    fn calibration_hits_datasheet_points() {
        let array = table_array();
        let env = EnvSample::stc();
        let isc = array.current(0.0, &env).unwrap();
        assert!((isc - 15.0).abs() / 15.0 < 0.005, "I(0) = {isc}");
        let ioc = array.current(10.0, &env).unwrap();
        assert!(ioc.abs() < 0.005 * 15.0, "I(Voc) = {ioc}");
        let (v, p) = array.find_mpp(&env).unwrap();
        assert!((v - 8.25).abs() / 8.25 < 0.01, "v_mpp = {v}");
        assert!((p - 115.5).abs() / 115.5 < 0.01, "p_mpp = {p}");
        assert!(array.config().series_resistance > 0.0);
    }

    #[test]
    fn infeasible_datasheet_is_rejected() {
        let cfg = PvArrayConfig { p_max: 8.25 * 15.0 + 1.0, ..PvArrayConfig::default() };
        assert!(matches!(calibrate(&cfg), Err(PvError::CalibrationFailure { .. })));
    }

    #[test]
    fn invalid_config_is_rejected() {
        let cfg = PvArrayConfig { v_mpp: 11.0, ..PvArrayConfig::default() };
        assert!(matches!(calibrate(&cfg), Err(PvError::InvalidConfig(_))));
    }

    #[test]
    fn dark_array_carries_no_current() {
        let array = table_array();
        let env = EnvSample::uniform(0.0, 298.15);
        for v in [0.0, 0.5, 5.0, 12.0] {
            assert_eq!(array.current(v, &env).unwrap(), 0.0);
        }
        assert_eq!(array.find_mpp(&env).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn mismatched_substring_count_is_an_error() {
        let array = table_array();
        let env = EnvSample::per_substring(alloc::vec![1000.0, 900.0, 800.0], 298.15);
        assert_eq!(array.current(1.0, &env), Err(PvError::SubstringMismatch { expected: 2, got: 3 }));
    }

    #[test]
    fn curve_needs_two_points() {
        let array = table_array();
        assert!(array.pv_curve(&EnvSample::stc(), 1).is_err());
    }

    #[test]
    fn newton_residual_is_small() {
        let array = table_array();
        let model = array.at(&EnvSample::per_substring(alloc::vec![1000.0, 500.0], 310.0)).unwrap();
        for k in 1..200 {
            let v = model.v_oc() * k as f64 / 200.0;
            let i = model.current(v).unwrap();
            let (vt, dv) = model.terminal_voltage(i);
            // voltage residual expressed in amperes through the local slope
            assert!(((vt - v) / dv).abs() < 1e-9, "v = {v}");
        }
    }

    #[test]
    fn temperature_shifts_follow_coefficients() {
        let array = table_array();
        let hot = EnvSample::uniform(1000.0, 308.15);
        let voc = array.v_oc_adjusted(&hot).unwrap();
        assert!((voc - (10.0 - 0.23)).abs() < 1e-6, "voc = {voc}");
        let isc = array.current(0.0, &hot).unwrap();
        assert!((isc - 15.075).abs() / 15.075 < 0.005, "isc = {isc}");
    }

    #[test]
    fn aging_lowers_the_mpp() {
        let array = table_array();
        let (_, healthy) = array.find_mpp(&EnvSample::stc()).unwrap();
        let (_, aged) = array.aged(3.0).find_mpp(&EnvSample::stc()).unwrap();
        assert!(aged < healthy);
    }
}
