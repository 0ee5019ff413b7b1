use alloc::vec::Vec;

use super::{SimError, SimTrace, TraceRow};

/// Fraction of the run, at its end, treated as steady state.
const STEADY_FRACTION: f64 = 0.2;
/// Relative band around the final mean used by `settle_time`.
const SETTLE_BAND: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Metrics {
    /// Delivered energy over oracle-available energy.
    pub tracking_efficiency: f64,
    /// (max − min) / mean of delivered power over the final 20 % of the run.
    pub steady_state_ripple: f64,
    /// First time after which delivered power stays within 2 % of its final
    /// mean, s.
    pub settle_time: f64,
}

pub fn metrics(trace: &SimTrace) -> Result<Metrics, SimError> {
    if trace.rows.is_empty() {
        return Err(SimError::EmptyTrace);
    }
    Ok(compute(&trace.rows, trace.dt))
}

pub(super) fn compute(rows: &[TraceRow], dt: f64) -> Metrics {
    if rows.is_empty() {
        return Metrics::default();
    }
    let harvested: f64 = rows.iter().map(|r| r.p_actual * dt).sum();
    let available: f64 = rows.iter().map(|r| r.p_mpp * dt).sum();
    let tracking_efficiency = if available > 0.0 { harvested / available } else { 0.0 };

    let tail = steady_tail(rows);
    let power: Vec<f64> = tail.iter().map(|r| r.p_actual).collect();
    let steady_state_ripple = ripple(&power);

    let final_mean = mean(&power);
    let band = SETTLE_BAND * final_mean.abs();
    let settle_time = match rows.iter().rposition(|r| !((r.p_actual - final_mean).abs() < band)) {
        None => rows[0].t,
        Some(k) if k + 1 < rows.len() => rows[k + 1].t,
        Some(k) => rows[k].t + dt,
    };

    Metrics { tracking_efficiency, steady_state_ripple, settle_time }
}

fn steady_tail(rows: &[TraceRow]) -> &[TraceRow] {
    let n = libm::ceil(rows.len() as f64 * STEADY_FRACTION).max(1.0) as usize;
    &rows[rows.len() - n.min(rows.len())..]
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// `(max − min) / mean`; zero for an empty or zero-mean series.
pub fn ripple(values: &[f64]) -> f64 {
    let m = mean(values);
    if m == 0.0 {
        return 0.0;
    }
    let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    (hi - lo) / m.abs()
}

/// The trace projected on the P-V plane: `(v, p_actual)` per row.
pub fn operating_locus(trace: &SimTrace) -> Result<Vec<(f64, f64)>, SimError> {
    if trace.rows.is_empty() {
        return Err(SimError::EmptyTrace);
    }
    Ok(trace.rows.iter().map(|r| (r.v, r.p_actual)).collect())
}

/// Number of direction reversals in `xs`, ignoring retreats no larger than
/// `tol` from the running extreme.
pub fn direction_reversals(xs: &[f64], tol: f64) -> usize {
    let Some(&first) = xs.first() else { return 0 };
    let mut direction = 0i8;
    let mut extreme = first;
    let anchor = first;
    let mut count = 0;
    for &x in &xs[1..] {
        match direction {
            0 => {
                if x - anchor > tol {
                    direction = 1;
                    extreme = x;
                } else if anchor - x > tol {
                    direction = -1;
                    extreme = x;
                }
            }
            1 => {
                if x > extreme {
                    extreme = x;
                } else if extreme - x > tol {
                    direction = -1;
                    extreme = x;
                    count += 1;
                }
            }
            _ => {
                if x < extreme {
                    extreme = x;
                } else if x - extreme > tol {
                    direction = 1;
                    extreme = x;
                    count += 1;
                }
            }
        }
    }
    count
}
