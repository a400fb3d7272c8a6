#![allow(dead_code)]

use std::f64::consts::LN_2;

/// `E1(x)` by power series (x ≤ 1) or a backward continued fraction.
pub fn e1(x: f64) -> f64 {
    if x <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..60 {
            term *= -x / k as f64;
            sum -= term / k as f64;
        }
        -0.577_215_664_901_532_9 - x.ln() + sum
    } else {
        let mut f = 0.0;
        for k in (1..300).rev() {
            f = k as f64 / (1.0 + k as f64 / (x + f));
        }
        (-x).exp() / (x + f)
    }
}

/// Exact Rayleigh ergodic rate of `log2(1 + xγ̄/(1 + xγ̄κ))`, split as
/// `E ln(1 + a1 x) - E ln(1 + a2 x)` with `E ln(1 + a x) = e^{1/a} E1(1/a)`.
pub fn rayleigh_rate_exact(mean: f64, kappa: f64) -> f64 {
    let term = |a: f64| if a == 0.0 { 0.0 } else { (1.0 / a).exp() * e1(1.0 / a) };
    (term(mean * (1.0 + kappa)) - term(mean * kappa)) / LN_2
}


/// Rician power density `e^{-(x+K)} I0(2 sqrt(Kx))`, with `I0` summed
/// term by term in log space.
pub fn rician_density(x: f64, k: f64) -> f64 {
    if k == 0.0 {
        return (-x).exp();
    }
    if x == 0.0 {
        return (-k).exp();
    }
    let lkx = (k * x).ln();
    let mut lf = 0.0;
    let mut sum = 0.0;
    for n in 0..600 {
        if n > 0 {
            lf += (n as f64).ln();
        }
        let t = (n as f64 * lkx - 2.0 * lf - x - k).exp();
        sum += t;
        if n as f64 > (k * x).sqrt() + 2.0 && t <= 1e-18 * sum {
            break;
        }
    }
    sum
}

/// Composite Simpson over `[0, upper]` of `g(x) · density(x)`.
pub fn simpson<F: Fn(f64) -> f64>(g: F, upper: f64, intervals: usize) -> f64 {
    let n = intervals + intervals % 2;
    let h = upper / n as f64;
    let mut s = g(0.0) + g(upper);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * g(i as f64 * h);
    }
    s * h / 3.0
}

pub fn conditional_snr(x: f64, mean: f64, kappa: f64) -> f64 {
    x * mean / (1.0 + x * mean * kappa)
}

/// `∫_0^∞ g(x) f_K(x) dx`: a fine Simpson panel on `[0, 1]` where
/// `ln(1 + γ̄x)` bends sharply, a coarser one out to where the density
/// falls below `e^{-60}`.
pub fn rician_expectation<F: Fn(f64) -> f64>(g: F, k: f64) -> f64 {
    let upper = (k.sqrt() + 60f64.sqrt()).powi(2);
    let head = simpson(|x| g(x) * rician_density(x, k), 1.0, 20_000);
    let tail = simpson(|u| g(1.0 + u) * rician_density(1.0 + u, k), upper - 1.0, 8_000);
    head + tail
}

/// Rician ergodic rate by Simpson integration of the exact density.
pub fn rician_rate_simpson(mean: f64, kappa: f64, k: f64) -> f64 {
    rician_expectation(|x| (1.0 + conditional_snr(x, mean, kappa)).log2(), k)
}

pub fn rician_distortion_simpson(mean: f64, kappa: f64, k: f64, var: f64) -> f64 {
    rician_expectation(|x| var / (1.0 + conditional_snr(x, mean, kappa)), k)
}

pub fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}
