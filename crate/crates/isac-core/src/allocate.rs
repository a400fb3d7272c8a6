//! Power-split allocation under an AI budget.
//!
//! `α` is the share of the total power `P` given to communication. Both
//! tasks see the AI noise `N_z` through their channel gains; by default
//! `N_z = P / (2^C - 1)` is fixed by the total power, so it does not move
//! with the split.

use alloc::vec::Vec;
use core::f64::consts::LN_2;

use crate::bottleneck::{enforce_mi_numerically, equivalent_noise, kappa, AiBudget};
use crate::error::{Error, Result};
use crate::fm;
use crate::gaussian::{PerfPoint, ScalarScenario};
use crate::numerics::find_root;

/// Root tolerance used when re-enforcing `N_z` at each iterate.
pub const ENFORCE_TOL: f64 = 1e-12;

/// How rate and distortion are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ObjectiveMode {
    /// `J = R - λ D`.
    #[default]
    RatePenalty,
    /// `J = λ R - (1 - λ) D`.
    Weighted,
}

impl ObjectiveMode {
    /// `(w_r, w_d)` in `J = w_r R - w_d D`.
    pub fn weights(&self, lambda: f64) -> (f64, f64) {
        match self {
            Self::RatePenalty => (1.0, lambda),
            Self::Weighted => (lambda, 1.0 - lambda),
        }
    }
}

/// Which power sets the AI noise seen by each task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseCoupling {
    /// One `N_z` from the total power `P`.
    #[default]
    TotalPower,
    /// `N_z = κ P_task` per task, so `γ̃ = γ / (1 + γ κ)`.
    PerTask,
}

/// How the frame time is shared.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum TimeMode {
    /// `T_c = T_s = T/2`; time does not enter the per-use metrics.
    #[default]
    Fixed,
    /// A fraction `comm_fraction` of the frame for communication: the rate is
    /// scaled by it and the sensing SNR by the remaining fraction.
    Energy { comm_fraction: f64 },
}

impl TimeMode {
    fn fractions(&self) -> (f64, f64) {
        match *self {
            Self::Fixed => (1.0, 1.0),
            Self::Energy { comm_fraction } => (comm_fraction, 1.0 - comm_fraction),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllocationProblem {
    /// Gains, noises and prior; `scenario.power` is the total power `P`.
    pub scenario: ScalarScenario,
    pub total_time: f64,
    pub lambda: f64,
    pub budget: AiBudget,
    pub mode: ObjectiveMode,
    pub coupling: NoiseCoupling,
    pub time: TimeMode,
}

impl AllocationProblem {
    pub fn new(scenario: ScalarScenario, lambda: f64, budget: AiBudget) -> Result<Self> {
        let p = Self {
            scenario,
            total_time: 1.0,
            lambda,
            budget,
            mode: ObjectiveMode::default(),
            coupling: NoiseCoupling::default(),
            time: TimeMode::default(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        if !(self.total_time > 0.0) || !self.total_time.is_finite() {
            return Err(Error::InvalidArgument("total time must be positive"));
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::InvalidArgument("lambda must lie in [0, 1]"));
        }
        if let TimeMode::Energy { comm_fraction } = self.time {
            if !(0.0..=1.0).contains(&comm_fraction) {
                return Err(Error::InvalidArgument("time fraction must lie in [0, 1]"));
            }
        }
        Ok(())
    }

    pub fn total_power(&self) -> f64 {
        self.scenario.power
    }

    /// `(T_c, T_s)`.
    pub fn time_split(&self) -> (f64, f64) {
        match self.time {
            TimeMode::Fixed => (0.5 * self.total_time, 0.5 * self.total_time),
            TimeMode::Energy { comm_fraction } => {
                (comm_fraction * self.total_time, (1.0 - comm_fraction) * self.total_time)
            }
        }
    }

    /// Closed-form `N_z`; `+∞` for an empty budget.
    pub fn closed_form_noise(&self) -> f64 {
        if self.budget.is_zero() {
            return f64::INFINITY;
        }
        equivalent_noise(self.budget, self.total_power()).unwrap_or(f64::INFINITY)
    }

    /// `N_z` found by root finding on the MI constraint, with the MI it achieves.
    pub fn enforced_noise(&self) -> Result<(f64, f64)> {
        if self.budget.is_zero() {
            return Ok((f64::INFINITY, 0.0));
        }
        let p = self.total_power();
        let nz = enforce_mi_numerically(p, self.budget.bits(), ENFORCE_TOL)?;
        let mi = if nz == 0.0 { f64::INFINITY } else { fm::ln_1p(p / nz) / LN_2 };
        Ok((nz, mi))
    }

    fn links(&self, n_z: f64) -> (Link, Link) {
        let sc = &self.scenario;
        let coupling = match self.coupling {
            NoiseCoupling::TotalPower => Coupling::Fixed(n_z),
            NoiseCoupling::PerTask => Coupling::Proportional(n_z / self.total_power()),
        };
        (
            Link { gain: sc.gain_c, noise: sc.noise_c, coupling },
            Link { gain: sc.gain_s, noise: sc.noise_s, coupling },
        )
    }

    /// Rate and distortion at split `α` given `N_z`.
    fn perf_with_noise(&self, alpha: f64, n_z: f64) -> PerfPoint {
        let p = self.total_power();
        let (lc, ls) = self.links(n_z);
        let (tc, ts) = self.time.fractions();
        PerfPoint {
            rate: tc * fm::ln_1p(lc.snr(alpha * p)) / LN_2,
            distortion: self.scenario.prior_var / (1.0 + ts * ls.snr((1.0 - alpha) * p)),
        }
    }

    fn objective_with_noise(&self, alpha: f64, n_z: f64) -> f64 {
        let (wr, wd) = self.mode.weights(self.lambda);
        let pp = self.perf_with_noise(alpha, n_z);
        wr * pp.rate - wd * pp.distortion
    }

    /// `dJ/dP_c` along `P_s = P - P_c`.
    fn stationarity_with_noise(&self, p_c: f64, n_z: f64) -> f64 {
        let (wr, wd) = self.mode.weights(self.lambda);
        let (dr, dd) = self.gradients_with_noise(p_c, n_z);
        wr * dr - wd * dd
    }

    /// `(∂R/∂P_c, -∂D/∂P_s)` at `P_s = P - P_c`.
    fn gradients_with_noise(&self, p_c: f64, n_z: f64) -> (f64, f64) {
        let p_s = self.total_power() - p_c;
        let (lc, ls) = self.links(n_z);
        let (tc, ts) = self.time.fractions();
        let dr = tc * lc.dsnr(p_c) / ((1.0 + lc.snr(p_c)) * LN_2);
        let den = 1.0 + ts * ls.snr(p_s);
        let dd = self.scenario.prior_var * ts * ls.dsnr(p_s) / (den * den);
        (dr, dd)
    }
}

#[derive(Debug, Clone, Copy)]
enum Coupling {
    Fixed(f64),
    Proportional(f64),
}

#[derive(Debug, Clone, Copy)]
struct Link {
    gain: f64,
    noise: f64,
    coupling: Coupling,
}

impl Link {
    fn snr(&self, p: f64) -> f64 {
        if self.gain == 0.0 || p <= 0.0 {
            return 0.0;
        }
        match self.coupling {
            Coupling::Fixed(nz) if nz == f64::INFINITY => 0.0,
            Coupling::Fixed(nz) => self.gain * p / (self.noise + self.gain * nz),
            Coupling::Proportional(k) if k == f64::INFINITY => 0.0,
            Coupling::Proportional(k) => self.gain * p / (self.noise + self.gain * k * p),
        }
    }

    fn dsnr(&self, p: f64) -> f64 {
        if self.gain == 0.0 {
            return 0.0;
        }
        match self.coupling {
            Coupling::Fixed(nz) if nz == f64::INFINITY => 0.0,
            Coupling::Fixed(nz) => self.gain / (self.noise + self.gain * nz),
            Coupling::Proportional(k) if k == f64::INFINITY => 0.0,
            Coupling::Proportional(k) => {
                let den = self.noise + self.gain * k * p.max(0.0);
                self.gain * self.noise / (den * den)
            }
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument("alpha must lie in [0, 1]"));
    }
    Ok(())
}

/// Rate and distortion at split `α` with the closed-form `N_z`.
pub fn performance(problem: &AllocationProblem, alpha: f64) -> Result<PerfPoint> {
    check_alpha(alpha)?;
    Ok(problem.perf_with_noise(alpha, problem.closed_form_noise()))
}

/// Rate and distortion at split `α` with `N_z` from root finding.
pub fn enforced_performance(problem: &AllocationProblem, alpha: f64) -> Result<PerfPoint> {
    check_alpha(alpha)?;
    Ok(problem.perf_with_noise(alpha, problem.enforced_noise()?.0))
}

/// Scalarised objective at split `α`.
pub fn objective(problem: &AllocationProblem, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(problem.objective_with_noise(alpha, problem.closed_form_noise()))
}

/// Signed `dJ/dP_c` with `P_s = P - P_c`; zero at an interior optimum,
/// `<= 0` at `P_c = 0` and `>= 0` at `P_c = P` when those are optimal.
pub fn stationarity(problem: &AllocationProblem, p_c: f64) -> Result<f64> {
    let p = problem.total_power();
    if !(0.0..=p).contains(&p_c) {
        return Err(Error::InvalidArgument("P_c must lie in [0, P]"));
    }
    Ok(problem.stationarity_with_noise(p_c, problem.closed_form_noise()))
}

/// Analytic `(∂R/∂P_c, -∂D/∂P_s)` at the given split.
pub fn gradients(problem: &AllocationProblem, p_c: f64) -> Result<(f64, f64)> {
    let p = problem.total_power();
    if !(0.0..=p).contains(&p_c) {
        return Err(Error::InvalidArgument("P_c must lie in [0, P]"));
    }
    Ok(problem.gradients_with_noise(p_c, problem.closed_form_noise()))
}

/// `|w_r ∂R/∂P_c - w_d (-∂D/∂P_s)|` at `P_c`.
pub fn kkt_residual_check(problem: &AllocationProblem, p_c: f64) -> Result<f64> {
    Ok(fm::abs(stationarity(problem, p_c)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit {
    pub power_c: f64,
    pub power_s: f64,
    pub residual: f64,
}

/// Solves the stationarity condition for `P_c` on `[0, P]`. The condition
/// is decreasing in `P_c`, so a boundary is returned when it keeps one sign.
pub fn kkt_power_split(problem: &AllocationProblem) -> Result<PowerSplit> {
    problem.validate()?;
    let p = problem.total_power();
    let nz = problem.closed_form_noise();
    let f = |pc: f64| problem.stationarity_with_noise(pc, nz);
    let (f0, fp) = (f(0.0), f(p));
    let power_c = if f0 <= 0.0 {
        0.0
    } else if fp >= 0.0 {
        p
    } else {
        find_root(f, 0.0, p, 1e-15 * p)?
    };
    Ok(PowerSplit { power_c, power_s: p - power_c, residual: fm::abs(f(power_c)) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub iteration: usize,
    pub alpha: f64,
    pub objective: f64,
    pub achieved_mi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationResult {
    pub alpha_star: f64,
    pub power_c: f64,
    pub power_s: f64,
    pub time_c: f64,
    pub time_s: f64,
    pub objective: f64,
    /// `|α - clamp(α + dJ/dα)|`, the projected-gradient norm at `α*`.
    pub kkt_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<TraceEntry>,
}

const ARMIJO: f64 = 1e-4;
const MAX_HALVINGS: usize = 60;
const STEP_MIN: f64 = 1e-6;
const STEP_MAX: f64 = 1e6;

fn clamp01(a: f64) -> f64 {
    a.clamp(0.0, 1.0)
}

/// Projected-gradient ascent on `α` with a Barzilai-Borwein trial step and
/// Armijo backtracking. `N_z` is re-enforced by root finding at every
/// iterate and the achieved MI is logged in the trace.
pub fn optimize_alpha(
    problem: &AllocationProblem,
    alpha0: f64,
    max_iter: usize,
    tol: f64,
) -> Result<AllocationResult> {
    problem.validate()?;
    check_alpha(alpha0)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    let p = problem.total_power();
    let eval = |alpha: f64| -> Result<(f64, f64, f64)> {
        let (nz, mi) = problem.enforced_noise()?;
        let j = problem.objective_with_noise(alpha, nz);
        let g = p * problem.stationarity_with_noise(alpha * p, nz);
        Ok((j, g, mi))
    };

    let mut alpha = alpha0;
    let (mut j, mut g, mut mi) = eval(alpha)?;
    let mut trace = Vec::new();
    trace.push(TraceEntry { iteration: 0, alpha, objective: j, achieved_mi: mi });
    let mut step = 1.0;
    let mut converged = fm::abs(clamp01(alpha + g) - alpha) <= tol;
    let mut iterations = 0;

    while !converged && iterations < max_iter {
        iterations += 1;
        let mut t = step;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial = clamp01(alpha + t * g);
            let (jt, gt, mit) = eval(trial)?;
            if jt >= j + ARMIJO * g * (trial - alpha) {
                accepted = Some((trial, jt, gt, mit));
                break;
            }
            t *= 0.5;
        }
        let Some((next, jn, gn, min)) = accepted else {
            // No ascent possible at floating-point resolution.
            converged = true;
            break;
        };
        let s = next - alpha;
        let y = gn - g;
        step = if s * y < 0.0 { (-(s * s) / (s * y)).clamp(STEP_MIN, STEP_MAX) } else { STEP_MAX };
        alpha = next;
        j = jn;
        g = gn;
        mi = min;
        trace.push(TraceEntry { iteration: iterations, alpha, objective: j, achieved_mi: mi });
        converged = fm::abs(s) <= tol || fm::abs(clamp01(alpha + g) - alpha) <= tol;
    }

    let (time_c, time_s) = problem.time_split();
    Ok(AllocationResult {
        alpha_star: alpha,
        power_c: alpha * p,
        power_s: (1.0 - alpha) * p,
        time_c,
        time_s,
        objective: j,
        kkt_residual: fm::abs(clamp01(alpha + g) - alpha),
        iterations,
        converged,
        trace,
    })
}

/// `κ` for the problem's budget, exposed for reporting.
pub fn problem_kappa(problem: &AllocationProblem) -> Result<f64> {
    kappa(problem.budget)
}
