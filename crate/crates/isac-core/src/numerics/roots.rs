use crate::error::{Error, Result};
use crate::fm;

/// Bracketed root of `f` on `[lo, hi]` (Brent: inverse quadratic
/// interpolation and secant steps, safeguarded by bisection).
///
/// Returns as soon as `|f(x)| <= tol` or the bracket is narrower than `tol`
/// (or than the floating-point resolution at the root).
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::InvalidArgument("find_root needs lo < hi and tol > 0"));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa.is_nan() || fb.is_nan() || fa * fb > 0.0 {
        return Err(Error::Bracket { lo, hi, f_lo: fa, f_hi: fb });
    }
    if fm::abs(fa) <= tol {
        return Ok(a);
    }
    if fm::abs(fb) <= tol {
        return Ok(b);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..500 {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fm::abs(fc) < fm::abs(fb) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let resolution = 2.0 * f64::EPSILON * fm::abs(b);
        let half = 0.5 * (c - b);
        if fm::abs(fb) <= tol || fm::abs(c - b) <= tol || fm::abs(half) <= resolution {
            return Ok(b);
        }
        if fm::abs(e) >= resolution && fm::abs(fa) > fm::abs(fb) {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = fm::abs(p);
            let bound1 = 3.0 * half * q - fm::abs(resolution * q);
            let bound2 = fm::abs(e * q);
            if 2.0 * p < bound1.min(bound2) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }
        a = b;
        fa = fb;
        b += if fm::abs(d) > resolution {
            d
        } else if half > 0.0 {
            resolution
        } else {
            -resolution
        };
        fb = f(b);
    }
    Ok(b)
}
