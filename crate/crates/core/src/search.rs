//! One-dimensional maximisation helpers.

/// 1/φ
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a unimodal function on `[lo, hi]`.
///
/// Stops when the bracket is narrower than `tol`. Returns the best evaluated
/// point `(x, f(x))`, which always includes both bracket ends, so the result
/// is never worse than the caller's endpoints even when `f` is not unimodal.
pub fn golden_section_max<F, E>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64), E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let fa = f(a)?;
    let fb = f(b)?;
    let mut best = if fb > fa { (b, fb) } else { (a, fa) };

    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;

    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
        for (x, fx) in [(c, fc), (d, fd)] {
            if fx > best.1 {
                best = (x, fx);
            }
        }
    }
    Ok(best)
}

/// Indices of local maxima in a sampled sequence.
///
/// A plateau counts once, at its first sample. Endpoints qualify when they
/// exceed their single neighbour.
pub fn local_maxima(values: &[f64]) -> alloc::vec::Vec<usize> {
    let mut out = alloc::vec::Vec::new();
    let n = values.len();
    if n == 0 {
        return out;
    }
    if n == 1 {
        out.push(0);
        return out;
    }
    let mut i = 0;
    while i < n {
        // extent of the plateau starting at i
        let mut j = i;
        while j + 1 < n && values[j + 1] == values[i] {
            j += 1;
        }
        let left_ok = i == 0 || values[i - 1] < values[i];
        let right_ok = j == n - 1 || values[j + 1] < values[i];
        if left_ok && right_ok && !(i == 0 && j == n - 1) {
            out.push(i);
        }
        i = j + 1;
    }
    out
}
