//! Ergodic rate and average distortion under block fading.
//!
//! Averages over the channel power gain `x` use Gauss-Laguerre nodes for the
//! `e^{-x}` weight. The Rician density `e^{-(x+K)} I0(2 sqrt(Kx))` is handled
//! by folding `e^{-K} I0(2 sqrt(Kx))` into the integrand in log space.

use core::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::fm;
use crate::numerics::{log_bessel_i0, QuadratureRule, RandomStream, SampleCursor};

/// Samples per Monte-Carlo chunk. Chunks are the unit of parallel work and
/// are always reduced in index order.
pub const MC_CHUNK: u64 = 65_536;

/// Distribution of the channel power gain `|h|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FadingModel {
    /// Fixed gain.
    Awgn { gain: f64 },
    /// Unit-mean exponential gain.
    Rayleigh,
    /// `h = μ + CN(0, 1)` with `K = |μ|²`.
    Rician { k: f64 },
}

impl FadingModel {
    pub fn awgn(gain: f64) -> Result<Self> {
        if !(gain >= 0.0) || !gain.is_finite() {
            return Err(Error::InvalidArgument("AWGN gain must be non-negative"));
        }
        Ok(Self::Awgn { gain })
    }

    pub fn rician(k: f64) -> Result<Self> {
        if !(k >= 0.0) || !k.is_finite() {
            return Err(Error::InvalidArgument("Rician K-factor must be non-negative"));
        }
        Ok(Self::Rician { k })
    }

    /// `E[|h|²]`.
    pub fn mean_gain(&self) -> f64 {
        match *self {
            Self::Awgn { gain } => gain,
            Self::Rayleigh => 1.0,
            Self::Rician { k } => 1.0 + k,
        }
    }

    /// Uniform draws consumed per gain sample.
    pub fn draws_per_sample(&self) -> u64 {
        match self {
            Self::Awgn { .. } => 0,
            Self::Rayleigh => 1,
            Self::Rician { .. } => 2,
        }
    }

    /// `E[g(|h|²)]` by the given rule.
    pub fn average<F: Fn(f64) -> f64>(&self, rule: &QuadratureRule, g: F) -> f64 {
        match *self {
            Self::Awgn { gain } => g(gain),
            Self::Rayleigh => rule.integrate(g),
            Self::Rician { k } => rule.integrate(|x| rician_tilt(x, k) * g(x)),
        }
    }

    /// One gain sample; advances `cursor` by [`Self::draws_per_sample`].
    pub fn sample(&self, cursor: &mut SampleCursor) -> f64 {
        match *self {
            Self::Awgn { gain } => gain,
            Self::Rayleigh => cursor.exponential(),
            Self::Rician { k } => {
                let (n1, n2) = cursor.normal_pair();
                let re = fm::sqrt(k) + n1 * core::f64::consts::FRAC_1_SQRT_2;
                let im = n2 * core::f64::consts::FRAC_1_SQRT_2;
                re * re + im * im
            }
        }
    }
}

/// `e^{-K} I0(2 sqrt(Kx))`, the Rician density relative to `e^{-x}`.
fn rician_tilt(x: f64, k: f64) -> f64 {
    if k == 0.0 {
        return 1.0;
    }
    fm::exp(log_bessel_i0(2.0 * fm::sqrt(k * x)) - k)
}

/// `x γ̄ / (1 + x γ̄ κ)`; saturates at `1/κ`. `κ = ∞` (empty budget) gives 0.
pub fn conditional_snr(x: f64, mean_snr: f64, kappa: f64) -> f64 {
    if x == 0.0 || mean_snr == 0.0 || kappa == f64::INFINITY {
        return 0.0;
    }
    let s = x * mean_snr;
    if s == f64::INFINITY {
        return 1.0 / kappa;
    }
    s / (1.0 + s * kappa)
}

fn rate_of(x: f64, mean_snr: f64, kappa: f64) -> f64 {
    fm::ln_1p(conditional_snr(x, mean_snr, kappa)) / LN_2
}

fn distortion_of(x: f64, mean_snr: f64, kappa: f64, prior_var: f64) -> f64 {
    prior_var / (1.0 + conditional_snr(x, mean_snr, kappa))
}

/// `E[log2(1 + γ̃(x))]` under `model`.
pub fn ergodic_rate(model: &FadingModel, mean_snr: f64, kappa: f64, rule: &QuadratureRule) -> f64 {
    model.average(rule, |x| rate_of(x, mean_snr, kappa))
}

/// `E[σ_θ² / (1 + γ̃(x))]` under `model`.
pub fn ergodic_distortion(
    model: &FadingModel,
    mean_snr: f64,
    kappa: f64,
    prior_var: f64,
    rule: &QuadratureRule,
) -> f64 {
    model.average(rule, |x| distortion_of(x, mean_snr, kappa, prior_var))
}

pub fn ergodic_rate_rayleigh(mean_snr: f64, kappa: f64, rule: &QuadratureRule) -> f64 {
    ergodic_rate(&FadingModel::Rayleigh, mean_snr, kappa, rule)
}

pub fn ergodic_distortion_rayleigh(mean_snr: f64, kappa: f64, prior_var: f64, rule: &QuadratureRule) -> f64 {
    ergodic_distortion(&FadingModel::Rayleigh, mean_snr, kappa, prior_var, rule)
}

pub fn ergodic_rate_rician(mean_snr: f64, kappa: f64, k: f64, rule: &QuadratureRule) -> f64 {
    ergodic_rate(&FadingModel::Rician { k }, mean_snr, kappa, rule)
}

pub fn ergodic_distortion_rician(
    mean_snr: f64,
    kappa: f64,
    k: f64,
    prior_var: f64,
    rule: &QuadratureRule,
) -> f64 {
    ergodic_distortion(&FadingModel::Rician { k }, mean_snr, kappa, prior_var, rule)
}

/// `log2(1 + γ̃)` evaluated at the mean gain `1 + K`.
pub fn rician_moment_matched(mean_snr: f64, kappa: f64, k: f64) -> f64 {
    rate_of(1.0 + k, mean_snr, kappa)
}

/// `log2(1 + E[γ̃(x)])`, an upper bound on the ergodic rate.
pub fn jensen_upper_bound(model: &FadingModel, mean_snr: f64, kappa: f64, rule: &QuadratureRule) -> f64 {
    fm::ln_1p(model.average(rule, |x| conditional_snr(x, mean_snr, kappa))) / LN_2
}

/// Compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if fm::abs(self.sum) >= fm::abs(v) {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn merge(&mut self, other: &KahanSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Partial Monte-Carlo sums over a contiguous range of samples.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct McAccumulator {
    n: u64,
    rate: KahanSum,
    rate_sq: KahanSum,
    dist: KahanSum,
    dist_sq: KahanSum,
}

/// Sample means and their standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub samples: u64,
    pub rate: f64,
    pub distortion: f64,
    pub rate_std_err: f64,
    pub distortion_std_err: f64,
}

impl McAccumulator {
    pub fn merge(&mut self, other: &McAccumulator) {
        self.n += other.n;
        self.rate.merge(&other.rate);
        self.rate_sq.merge(&other.rate_sq);
        self.dist.merge(&other.dist);
        self.dist_sq.merge(&other.dist_sq);
    }

    pub fn samples(&self) -> u64 {
        self.n
    }

    pub fn finish(&self) -> Result<McEstimate> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("no Monte-Carlo samples"));
        }
        let n = self.n as f64;
        let stats = |s: &KahanSum, sq: &KahanSum| {
            let mean = s.value() / n;
            let var = if self.n > 1 { (sq.value() / n - mean * mean).max(0.0) * n / (n - 1.0) } else { 0.0 };
            (mean, fm::sqrt(var / n))
        };
        let (rate, rate_std_err) = stats(&self.rate, &self.rate_sq);
        let (distortion, distortion_std_err) = stats(&self.dist, &self.dist_sq);
        Ok(McEstimate { samples: self.n, rate, distortion, rate_std_err, distortion_std_err })
    }
}

/// Fading-averaged rate and distortion over one Monte-Carlo problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McProblem {
    pub model: FadingModel,
    pub mean_snr: f64,
    pub kappa: f64,
    pub prior_var: f64,
}

impl McProblem {
    /// Number of [`MC_CHUNK`]-sized chunks covering `n_samples`.
    pub fn chunk_count(n_samples: u64) -> u64 {
        n_samples.div_ceil(MC_CHUNK)
    }

    /// Sums for chunk `index` of an `n_samples` run. Sample `i` always reads
    /// the draws at counter `i · draws_per_sample`.
    pub fn chunk(&self, stream: &RandomStream, n_samples: u64, index: u64) -> McAccumulator {
        let start = index * MC_CHUNK;
        let end = (start + MC_CHUNK).min(n_samples);
        let mut cursor = stream.cursor(start * self.model.draws_per_sample());
        let mut acc = McAccumulator::default();
        for _ in start..end {
            let x = self.model.sample(&mut cursor);
            let r = rate_of(x, self.mean_snr, self.kappa);
            let d = distortion_of(x, self.mean_snr, self.kappa, self.prior_var);
            acc.n += 1;
            acc.rate.add(r);
            acc.rate_sq.add(r * r);
            acc.dist.add(d);
            acc.dist_sq.add(d * d);
        }
        acc
    }
}

/// Sequential Monte-Carlo estimate; identical to any chunk-parallel run that
/// merges [`McProblem::chunk`] results in index order.
pub fn monte_carlo_oracle(
    model: FadingModel,
    mean_snr: f64,
    kappa: f64,
    prior_var: f64,
    n_samples: u64,
    stream: &RandomStream,
) -> Result<McEstimate> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("n_samples must be at least 1"));
    }
    let problem = McProblem { model, mean_snr, kappa, prior_var };
    let mut total = McAccumulator::default();
    for i in 0..McProblem::chunk_count(n_samples) {
        total.merge(&problem.chunk(stream, n_samples, i));
    }
    total.finish()
}
