use core::f64::consts::{E, PI};

use crate::error::{Error, Result};
use crate::fm;

/// Argument above which `ln I0` switches from the power series to the
/// large-argument expansion.
pub const I0_SWITCH: f64 = 20.0;

/// Principal branch `W_0(x)` of the Lambert W function, `W e^W = x`.
///
/// Halley iteration from a branch-point series near `-1/e`, `ln(1 + x)` in the
/// middle range and `ln x - ln ln x` for large arguments.
pub fn lambert_w0(x: f64) -> Result<f64> {
    let branch = -1.0 / E;
    if x.is_nan() || x < branch {
        // Rounding of -1/e itself must not be reported as a domain error.
        if x >= branch - 4.0 * f64::EPSILON {
            return Ok(-1.0);
        }
        return Err(Error::Domain { x });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    let mut w = if x < -0.25 {
        let p = fm::sqrt(2.0 * (E * x + 1.0));
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x < 3.0 {
        fm::ln_1p(x) * (1.0 - 0.1 * fm::ln_1p(x))
    } else {
        let l1 = fm::ln(x);
        let l2 = fm::ln(l1);
        l1 - l2 + l2 / l1
    };
    for _ in 0..64 {
        let ew = fm::exp(w);
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if denom == 0.0 || !denom.is_finite() {
            break;
        }
        let dw = f / denom;
        w -= dw;
        if fm::abs(dw) <= 4.0 * f64::EPSILON * (1.0 + fm::abs(w)) {
            break;
        }
    }
    Ok(w)
}

/// `ln I0(x)` for `x >= 0`, finite for arbitrarily large arguments.
///
/// Negative input is folded onto `|x|` since `I0` is even.
pub fn log_bessel_i0(x: f64) -> f64 {
    let x = fm::abs(x);
    if x <= I0_SWITCH {
        log_i0_series(x)
    } else {
        log_i0_asymptotic(x)
    }
}

/// `ln Σ (x/2)^{2k} / (k!)^2`.
pub(crate) fn log_i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    fm::ln(sum)
}

/// `x - ½ ln(2πx) + ln Σ ((2k-1)!!)^2 / (k! (8x)^k)`, truncated before the
/// terms start growing.
pub(crate) fn log_i0_asymptotic(x: f64) -> f64 {
    let t = 1.0 / (8.0 * x);
    let mut term: f64 = 1.0;
    let mut sum = 1.0;
    for k in 1..64 {
        let odd = (2 * k - 1) as f64;
        let next = term * odd * odd * t / k as f64;
        if next >= term || next <= 1e-18 * sum {
            break;
        }
        term = next;
        sum += term;
    }
    x - 0.5 * fm::ln(2.0 * PI * x) + fm::ln(sum)
}
