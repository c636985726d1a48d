//! Bracketed scalar root finding: upward bracket expansion plus a
//! Brent-style bisection / inverse-quadratic hybrid.

use crate::error::{Error, Result};

/// Expands `[lo, lo*factor^k]` upward until `f` changes sign.
/// Returns `(a, b, fa, fb)` with `fa * fb <= 0`.
pub(crate) fn expand_upward<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    factor: f64,
    max_expansions: usize,
) -> Result<(f64, f64, f64, f64)> {
    debug_assert!(factor > 1.0);
    let fa = f(lo);
    if fa == 0.0 {
        return Ok((lo, lo, fa, fa));
    }
    let mut a = lo;
    let mut fa_cur = fa;
    let mut b = if lo == 0.0 { factor - 1.0 } else { lo * factor };
    for _ in 0..max_expansions {
        let fb = f(b);
        if fa_cur * fb <= 0.0 {
            return Ok((a, b, fa_cur, fb));
        }
        a = b;
        fa_cur = fb;
        b *= factor;
    }
    Err(Error::BracketExhausted { lo, hi: b })
}

/// Brent root refinement on a bracketing interval.
///
/// `fa` and `fb` must already bracket (fa*fb <= 0). Converges to
/// `rel_tol` relative plus a machine-epsilon floor, so callers may pass
/// rel_tol below 1e-12 safely.
pub(crate) fn brent<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    rel_tol: f64,
) -> Result<f64> {
    const MAX_ITER: usize = 200;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 {
        return Err(Error::Convergence(format!(
            "root refinement needs a sign change, got f({a}) = {fa}, f({b}) = {fb}"
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * rel_tol * b.abs().max(f64::MIN_POSITIVE);
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // secant / inverse quadratic interpolation
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
    }
    Err(Error::Convergence(format!(
        "root refinement did not reach tolerance after {MAX_ITER} iterations near {b}"
    )))
}
