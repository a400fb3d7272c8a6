//! MIMO rate and single-parameter Fisher information with AI noise
//! `R_z = covariance_map(Q, C_AI)` injected behind each channel.

use alloc::vec::Vec;
use core::f64::consts::LN_2;

use crate::bottleneck::{covariance_map, AiBudget};
use crate::error::{Error, Result};
use crate::fm;
use crate::linalg::{CMatrix, Cholesky, HermitianMatrix, C64};

/// Slack on `tr(Q) <= P`.
pub const POWER_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct MimoScenario {
    pub h_c: CMatrix,
    pub h_s: CMatrix,
    pub q: HermitianMatrix,
    pub r_c: HermitianMatrix,
    pub r_s: HermitianMatrix,
    pub dmu: Vec<C64>,
    pub budget: AiBudget,
    pub power: f64,
}

impl MimoScenario {
    pub fn validate(&self) -> Result<()> {
        let nt = self.q.dim();
        let nr = self.r_c.dim();
        if self.h_c.rows() != nr || self.h_c.cols() != nt {
            return Err(Error::InvalidArgument("H_c must be N_r x N_t"));
        }
        if self.h_s.cols() != nt || self.h_s.rows() != self.r_s.dim() {
            return Err(Error::InvalidArgument("H_s must match R_s rows and Q columns"));
        }
        if self.dmu.len() != self.r_s.dim() {
            return Err(Error::InvalidArgument("dmu length must match R_s"));
        }
        if !self.q.is_psd() {
            return Err(Error::InvalidArgument("Q must be positive semidefinite"));
        }
        if !(self.power > 0.0) || self.q.trace() > self.power + POWER_SLACK {
            return Err(Error::InvalidArgument("tr(Q) exceeds the power budget"));
        }
        self.r_c.cholesky().map_err(|_| Error::InvalidArgument("R_c must be positive definite"))?;
        self.r_s.cholesky().map_err(|_| Error::InvalidArgument("R_s must be positive definite"))?;
        Ok(())
    }

    /// `R_z`; zero when `Q = 0` or the budget is unlimited.
    pub fn ai_noise(&self) -> Result<HermitianMatrix> {
        if self.budget.is_zero() {
            return Err(Error::DegenerateBudget);
        }
        if self.budget.is_unlimited() || self.q.trace() <= 0.0 {
            return Ok(HermitianMatrix::zeros(self.q.dim()));
        }
        match covariance_map(&self.q, self.budget) {
            Err(Error::DegenerateInput(_)) => Ok(HermitianMatrix::zeros(self.q.dim())),
            r => r,
        }
    }

    /// `R_c + H_c R_z H_cᴴ`.
    pub fn comm_noise(&self) -> Result<HermitianMatrix> {
        Ok(self.r_c.add(&self.ai_noise()?.congruence(&self.h_c)))
    }

    /// `R_s + H_s R_z H_sᴴ`.
    pub fn sensing_noise(&self) -> Result<HermitianMatrix> {
        Ok(self.r_s.add(&self.ai_noise()?.congruence(&self.h_s)))
    }
}

/// `log2 det(I + H_c Q H_cᴴ S⁻¹)` with `S = R_c + H_c R_z H_cᴴ`, evaluated as
/// `log2 det(I + L⁻¹ H_c Q H_cᴴ L⁻ᴴ)` for `S = L Lᴴ`.
pub fn mimo_rate(sc: &MimoScenario) -> Result<f64> {
    let s = sc.comm_noise()?;
    let l = Cholesky::new(s.as_matrix()).map_err(|_| Error::Singular("effective communication noise"))?;
    let white = l.whiten(&sc.q.congruence(&sc.h_c));
    let n = white.dim();
    let plus_i = white.add(&HermitianMatrix::identity(n));
    Ok(Cholesky::new(plus_i.as_matrix())?.ln_det() / LN_2)
}

/// Same rate as `log2 det(S + H_c Q H_cᴴ) - log2 det(S)`.
pub fn mimo_rate_det_difference(sc: &MimoScenario) -> Result<f64> {
    let s = sc.comm_noise()?;
    let ls = Cholesky::new(s.as_matrix()).map_err(|_| Error::Singular("effective communication noise"))?;
    let total = s.add(&sc.q.congruence(&sc.h_c));
    Ok((Cholesky::new(total.as_matrix())?.ln_det() - ls.ln_det()) / LN_2)
}

/// `dmuᴴ (R_s + H_s R_z H_sᴴ)⁻¹ dmu` for a scalar parameter.
pub fn fisher_info(sc: &MimoScenario) -> Result<f64> {
    let s = sc.sensing_noise()?;
    let l = Cholesky::new(s.as_matrix()).map_err(|_| Error::Singular("effective sensing noise"))?;
    Ok(l.inverse_quad_form(&sc.dmu).max(0.0))
}

/// Cramér-Rao bound `1 / I_θ`.
pub fn crlb(sc: &MimoScenario) -> Result<f64> {
    let fi = fisher_info(sc)?;
    if !(fi > 0.0) {
        return Err(Error::Unobservable);
    }
    Ok(1.0 / fi)
}

/// Rates over a budget × SNR grid, row-major by budget.
#[derive(Debug, Clone, PartialEq)]
pub struct RateSurface {
    pub c_grid: Vec<f64>,
    pub snr_db: Vec<f64>,
    pub rates: Vec<f64>,
}

impl RateSurface {
    pub fn at(&self, ci: usize, si: usize) -> f64 {
        self.rates[ci * self.snr_db.len() + si]
    }
}

/// The template with `Q` rescaled so that `tr(Q) / (tr(R_c) / N_r)` equals
/// the SNR point, and the given budget.
pub fn scenario_at(template: &MimoScenario, c_ai: f64, snr_db: f64) -> Result<MimoScenario> {
    let tr = template.q.trace();
    if !(tr > 0.0) {
        return Err(Error::DegenerateInput("template Q is zero"));
    }
    let noise_per_rx = template.r_c.trace() / template.r_c.dim() as f64;
    let power = fm::exp(snr_db * core::f64::consts::LN_10 / 10.0) * noise_per_rx;
    let mut sc = template.clone();
    sc.q = template.q.scale(power / tr);
    sc.power = power;
    sc.budget = AiBudget::new(c_ai)?;
    Ok(sc)
}

pub fn rate_surface(template: &MimoScenario, c_grid: &[f64], snr_grid_db: &[f64]) -> Result<RateSurface> {
    if c_grid.is_empty() || snr_grid_db.is_empty() {
        return Err(Error::InvalidArgument("surface grids must be non-empty"));
    }
    let mut rates = Vec::with_capacity(c_grid.len() * snr_grid_db.len());
    for &c in c_grid {
        for &snr in snr_grid_db {
            rates.push(mimo_rate(&scenario_at(template, c, snr)?)?);
        }
    }
    Ok(RateSurface { c_grid: c_grid.to_vec(), snr_db: snr_grid_db.to_vec(), rates })
}
