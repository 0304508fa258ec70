//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};

/// Recursion depth limit; hitting it counts as non-convergence.
pub const MAX_DEPTH: u32 = 50;

/// `∫_lo^hi f` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if lo == hi {
        return Ok(0.0);
    }
    let mid = 0.5 * (lo + hi);
    let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
    let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    let mut ok = true;
    let value = step(&f, lo, hi, flo, fmid, fhi, whole, tol, MAX_DEPTH, &mut ok);
    if ok {
        Ok(value)
    } else {
        Err(Error::QuadratureNoConvergence { lo, hi, tolerance: tol })
    }
}

#[allow(clippy::too_many_arguments)]
fn step(
    f: &impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    flo: f64,
    fmid: f64,
    fhi: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    ok: &mut bool,
) -> f64 {
    let mid = 0.5 * (lo + hi);
    let lm = 0.5 * (lo + mid);
    let rm = 0.5 * (mid + hi);
    let (flm, frm) = (f(lm), f(rm));
    let left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    let right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    let delta = left + right - whole;
    // round-off floor: tolerances below a few ulps of the estimate cannot be met
    let tol = tol.max(8.0 * f64::EPSILON * (left + right).abs());
    // minimum depth guards against symmetric cancellation on the first split
    if depth + 4 <= MAX_DEPTH && delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    if depth == 0 {
        *ok = false;
        return left + right + delta / 15.0;
    }
    step(f, lo, mid, flo, flm, fmid, left, 0.5 * tol, depth - 1, ok)
        + step(f, mid, hi, fmid, frm, fhi, right, 0.5 * tol, depth - 1, ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = adaptive_simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 0.0).abs() < 1e-12);
    }

    #[test]
    fn sine_integral() {
        let v = adaptive_simpson(f64::sin, 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(adaptive_simpson(|x| x, 1.0, 1.0, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn nonconvergence_reported() {
        let r = adaptive_simpson(|x| if x > 0.0 { 1.0 / (x * x) } else { 0.0 }, 0.0, 1.0, 1e-14);
        assert!(matches!(r, Err(Error::QuadratureNoConvergence { .. })));
    }
}
