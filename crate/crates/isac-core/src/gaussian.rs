//! Closed-form scalar Gaussian ISAC performance under an AI budget.

use alloc::vec::Vec;
use core::f64::consts::LN_2;

use crate::bottleneck::AiBudget;
use crate::error::{Error, Result};
use crate::fm;

/// Scalar link parameters, all on a linear scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarScenario {
    pub power: f64,
    pub gain_c: f64,
    pub gain_s: f64,
    pub noise_c: f64,
    pub noise_s: f64,
    pub prior_var: f64,
}

impl ScalarScenario {
    pub fn new(
        power: f64,
        gain_c: f64,
        gain_s: f64,
        noise_c: f64,
        noise_s: f64,
        prior_var: f64,
    ) -> Result<Self> {
        let sc = Self { power, gain_c, gain_s, noise_c, noise_s, prior_var };
        sc.validate()?;
        Ok(sc)
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |x: f64| x > 0.0 && x.is_finite();
        let nonneg = |x: f64| x >= 0.0 && x.is_finite();
        if !pos(self.power) {
            return Err(Error::InvalidArgument("power must be positive"));
        }
        if !nonneg(self.gain_c) || !nonneg(self.gain_s) {
            return Err(Error::InvalidArgument("gains must be non-negative"));
        }
        if !pos(self.noise_c) || !pos(self.noise_s) {
            return Err(Error::InvalidArgument("noise powers must be positive"));
        }
        if !pos(self.prior_var) {
            return Err(Error::InvalidArgument("prior variance must be positive"));
        }
        Ok(())
    }

    /// Unconstrained SNRs `|h_i|² P / N_i`.
    pub fn classical_snrs(&self) -> (f64, f64) {
        (
            self.gain_c * self.power / self.noise_c,
            self.gain_s * self.power / self.noise_s,
        )
    }
}

/// A (rate, distortion) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerfPoint {
    pub rate: f64,
    pub distortion: f64,
}

/// `g p / (N + g N_z)` with `N_z = P_total / m`, written as
/// `g p m / (N m + g P_total)` so that `m = 0` (no budget) gives 0 and
/// `m = ∞` gives the classical `g p / N`.
///
/// `m` is [`AiBudget::latent_snr`]; `path_power` may be a share of `total_power`.
pub fn bottlenecked_snr(gain: f64, path_power: f64, noise: f64, total_power: f64, m: f64) -> f64 {
    if gain == 0.0 || path_power == 0.0 || m == 0.0 {
        return 0.0;
    }
    if m == f64::INFINITY {
        return gain * path_power / noise;
    }
    gain * path_power * m / (noise * m + gain * total_power)
}

/// `(γ̃_c, γ̃_s)` with the AI noise `N_z` added behind each channel gain.
pub fn effective_snrs(sc: &ScalarScenario, budget: AiBudget) -> (f64, f64) {
    let m = budget.latent_snr();
    (
        bottlenecked_snr(sc.gain_c, sc.power, sc.noise_c, sc.power, m),
        bottlenecked_snr(sc.gain_s, sc.power, sc.noise_s, sc.power, m),
    )
}

/// `log2(1 + γ̃_c)`; 0 for an empty budget.
pub fn rate(sc: &ScalarScenario, budget: AiBudget) -> f64 {
    fm::ln_1p(effective_snrs(sc, budget).0) / LN_2
}

/// `σ_θ² / (1 + γ̃_s)`; `σ_θ²` for an empty budget.
pub fn distortion(sc: &ScalarScenario, budget: AiBudget) -> f64 {
    sc.prior_var / (1.0 + effective_snrs(sc, budget).1)
}

pub fn perf_point(sc: &ScalarScenario, budget: AiBudget) -> PerfPoint {
    PerfPoint { rate: rate(sc, budget), distortion: distortion(sc, budget) }
}

/// MMSE distortion `σ_θ² 2^{-I}` after `I` bits about a Gaussian parameter.
pub fn info_to_distortion(info_bits: f64, prior_var: f64) -> Result<f64> {
    if !(info_bits >= 0.0) {
        return Err(Error::InvalidArgument("information must be non-negative"));
    }
    if !(prior_var > 0.0) {
        return Err(Error::InvalidArgument("prior variance must be positive"));
    }
    Ok(prior_var * fm::exp(-info_bits * LN_2))
}

/// Rate loss `R(∞) - R(C)` in bits, computed without cancellation.
pub fn rate_gap(sc: &ScalarScenario, budget: AiBudget) -> f64 {
    let (g, _) = sc.classical_snrs();
    let m = budget.latent_snr();
    if g == 0.0 || m == f64::INFINITY {
        return 0.0;
    }
    if m == 0.0 {
        return fm::ln_1p(g) / LN_2;
    }
    // γ - γ̃ = γ² / (m + γ) and γ̃ = γ m / (m + γ).
    let eff = g * m / (m + g);
    fm::ln_1p(g * g / ((m + g) * (1.0 + eff))) / LN_2
}

/// Least-squares slope of `log2(R(∞) - R(C))` against `C` over `c_grid`.
pub fn scaling_gap(sc: &ScalarScenario, c_grid: &[f64]) -> Result<f64> {
    if c_grid.len() < 4 {
        return Err(Error::InvalidArgument("scaling fit needs at least 4 budgets"));
    }
    let mut pts = Vec::with_capacity(c_grid.len());
    for &c in c_grid {
        if !c.is_finite() {
            return Err(Error::InvalidArgument("budget grid must be finite"));
        }
        let gap = rate_gap(sc, AiBudget::new(c)?);
        if !(gap > 0.0) {
            return Err(Error::DegenerateFit);
        }
        pts.push((c, fm::ln(gap) / LN_2));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::DegenerateFit);
    }
    Ok(sxy / sxx)
}

/// Generalisation-error bound `sqrt(2 I / n_tr)`.
pub fn gen_tradeoff_bound(mi_bits: f64, n_train: u64) -> Result<f64> {
    if !(mi_bits >= 0.0) || !mi_bits.is_finite() {
        return Err(Error::InvalidArgument("mutual information must be non-negative"));
    }
    if n_train == 0 {
        return Err(Error::InvalidArgument("training set must be non-empty"));
    }
    Ok(fm::sqrt(2.0 * mi_bits / n_train as f64))
}
