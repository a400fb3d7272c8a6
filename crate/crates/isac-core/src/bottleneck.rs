//! The learning-capacity budget and its equivalent Gaussian noise.
//!
//! A latent `Z = X + W_z` with `X ~ CN(0, P)` carries `log2(1 + P/N_z)` bits
//! about `X`; pinning that to `C_AI` gives `N_z = P / (2^{C_AI} - 1)`. The
//! matrix version assigns the minimum-trace noise covariance `ζ Q` on the
//! active subspace of the transmit covariance `Q`.

use alloc::vec::Vec;
use core::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::fm;
use crate::linalg::{CMatrix, Cholesky, HermitianMatrix, C64};
use crate::numerics::find_root;

/// Eigenvalues below this fraction of the largest count as inactive.
pub const RANK_THRESHOLD: f64 = 1e-12;

/// Capacity budget `C_AI` in bits per channel use; `+∞` is the classical
/// (unconstrained) limit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AiBudget {
    bits: f64,
}

impl AiBudget {
    pub fn new(bits: f64) -> Result<Self> {
        if bits.is_nan() || bits < 0.0 {
            return Err(Error::InvalidArgument("AI budget must be a non-negative number of bits"));
        }
        Ok(Self { bits })
    }

    pub const fn unlimited() -> Self {
        Self { bits: f64::INFINITY }
    }

    pub fn bits(&self) -> f64 {
        self.bits
    }

    pub fn is_unlimited(&self) -> bool {
        self.bits == f64::INFINITY
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0.0
    }

    /// `2^{C_AI} - 1`, the signal-to-AI-noise ratio `P / N_z` of the latent.
    /// Zero for an empty budget and `+∞` for the classical limit.
    pub fn latent_snr(&self) -> f64 {
        if self.is_unlimited() {
            f64::INFINITY
        } else {
            fm::exp_m1(self.bits * LN_2)
        }
    }
}

/// `κ = N_z / P = 1 / (2^{C_AI} - 1)`.
pub fn kappa(budget: AiBudget) -> Result<f64> {
    if budget.is_zero() {
        return Err(Error::DegenerateBudget);
    }
    Ok(1.0 / budget.latent_snr())
}

/// `N_z = P / (2^{C_AI} - 1)`; zero in the classical limit.
pub fn equivalent_noise(budget: AiBudget, power: f64) -> Result<f64> {
    if !(power > 0.0) || !power.is_finite() {
        return Err(Error::InvalidArgument("power must be positive and finite"));
    }
    Ok(power * kappa(budget)?)
}

/// Finds `N_z` with `|log2(1 + P/N_z) - C| <= tol` by bracketed root
/// finding in `ln N_z`, without using the closed form.
pub fn enforce_mi_numerically(power: f64, target_bits: f64, tol: f64) -> Result<f64> {
    if !(power > 0.0) || !power.is_finite() {
        return Err(Error::InvalidArgument("power must be positive and finite"));
    }
    if !(target_bits > 0.0) {
        return Err(Error::DegenerateBudget);
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    if target_bits == f64::INFINITY {
        return Ok(0.0);
    }
    let ln_p = fm::ln(power);
    let mi_gap = |ln_nz: f64| latent_mi_bits(ln_p - ln_nz) - target_bits;
    let mut lo = ln_p;
    let mut hi = ln_p;
    for _ in 0..400 {
        if mi_gap(lo) > 0.0 {
            break;
        }
        lo -= 5.0;
    }
    for _ in 0..400 {
        if mi_gap(hi) < 0.0 {
            break;
        }
        hi += 5.0;
    }
    let ln_nz = find_root(mi_gap, lo, hi, tol)?;
    Ok(fm::exp(ln_nz))
}

/// `log2(1 + e^t)` without overflow.
fn latent_mi_bits(t: f64) -> f64 {
    if t > 40.0 {
        (t + fm::ln_1p(fm::exp(-t))) / LN_2
    } else {
        fm::ln_1p(fm::exp(t)) / LN_2
    }
}

/// Minimum-trace AI-noise covariance `R_z = ζ Q` on the rank-`r` active
/// subspace of `Q`, with `ζ = 1 / (2^{C/r} - 1)`; zero on the null space.
pub fn covariance_map(q: &HermitianMatrix, budget: AiBudget) -> Result<HermitianMatrix> {
    let eig = q.eig();
    let lmax = eig.values.iter().cloned().fold(0.0, f64::max);
    if !(lmax > 0.0) {
        return Err(Error::DegenerateInput("transmit covariance has no positive eigenvalue"));
    }
    if budget.is_zero() {
        return Err(Error::DegenerateBudget);
    }
    let floor = RANK_THRESHOLD * lmax;
    let rank = eig.values.iter().filter(|&&l| l > floor).count();
    let zeta = if budget.is_unlimited() {
        0.0
    } else {
        1.0 / fm::exp_m1(budget.bits() * LN_2 / rank as f64)
    };
    Ok(eig.reconstruct_with(|l| if l > floor { zeta * l } else { 0.0 }))
}

/// `I(X; X + W) = log2 det(Q + R_z) / det(R_z)` in bits.
///
/// Evaluated in the eigenbasis of `Q`: the noise seen on `range(Q)` is the
/// Schur complement of `R_z` after conditioning on its null-space part, which
/// stays well defined when `R_z` itself is singular off the active subspace.
pub fn gaussian_mi(q: &HermitianMatrix, r_z: &HermitianMatrix) -> Result<f64> {
    let n = q.dim();
    if r_z.dim() != n {
        return Err(Error::InvalidArgument("Q and R_z dimensions differ"));
    }
    let eig = q.eig();
    let lmax = eig.values.iter().cloned().fold(0.0, f64::max);
    if !(lmax > 0.0) {
        return Ok(0.0);
    }
    let floor = RANK_THRESHOLD * lmax;
    let active: Vec<usize> = (0..n).filter(|&i| eig.values[i] > floor).collect();
    let null: Vec<usize> = (0..n).filter(|&i| eig.values[i] <= floor).collect();
    let rotated = r_z.congruence(&eig.vectors.adjoint());
    let rm = rotated.as_matrix();
    let block = |rows: &[usize], cols: &[usize]| {
        CMatrix::from_fn(rows.len(), cols.len(), |r, c| rm[(rows[r], cols[c])])
    };
    let mut effective = block(&active, &active);
    if !null.is_empty() {
        let cross = block(&active, &null);
        let null_block = HermitianMatrix::new(block(&null, &null))?;
        let ne = null_block.eig();
        let scale = rm.frobenius_norm();
        let pinv = ne.reconstruct_with(|l| if l > RANK_THRESHOLD * scale { 1.0 / l } else { 0.0 });
        let correction = cross.matmul(pinv.as_matrix()).matmul(&cross.adjoint());
        effective = effective.sub(&correction);
    }
    let noise = HermitianMatrix::new(effective)
        .map_err(|_| Error::Singular("effective AI noise on range(Q)"))?;
    let signal = HermitianMatrix::new(CMatrix::from_fn(active.len(), active.len(), |r, c| {
        if r == c {
            C64::new(eig.values[active[r]], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }))?;
    let noise_ch = Cholesky::new(noise.as_matrix())
        .map_err(|_| Error::Singular("AI noise singular on range(Q)"))?;
    let total_ch = Cholesky::new(noise.add(&signal).as_matrix())?;
    Ok((total_ch.ln_det() - noise_ch.ln_det()) / LN_2)
}
