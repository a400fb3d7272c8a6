//! One function per subcommand; each returns the full output text.

use isac_core::allocate::{optimize_alpha, AllocationProblem};
use isac_core::bottleneck::AiBudget;
use isac_core::fading::{ergodic_distortion, ergodic_rate, FadingModel};
use isac_core::gaussian;
use isac_core::linalg::{CMatrix, HermitianMatrix, C64};
use isac_core::mimo::{rate_surface, MimoScenario};
use isac_core::numerics::{gauss_laguerre, RandomStream};
use isac_core::region::{frontier as joint_frontier, separated_baseline};

use crate::checks;
use crate::config::{grid, ChannelKind, RunConfig};
use crate::csv::{num, CsvWriter};
use crate::error::CliError;

/// RNG stream reserved for drawing the MIMO channel.
const CHANNEL_STREAM: u64 = 0x4d49_4d4f;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    GaussianSweep,
    Frontier,
    MimoSurface,
    Allocate,
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::GaussianSweep => "gaussian-sweep",
            Self::Frontier => "frontier",
            Self::MimoSurface => "mimo-surface",
            Self::Allocate => "allocate",
            Self::Verify => "verify",
        }
    }
}

/// Text to emit and the process exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub status: i32,
}

pub fn run(command: Command, cfg: &RunConfig) -> Result<Output, CliError> {
    let text = match command {
        Command::GaussianSweep => gaussian_sweep(cfg)?,
        Command::Frontier => frontier(cfg)?,
        Command::MimoSurface => mimo_surface(cfg)?,
        Command::Allocate => allocate(cfg)?,
        Command::Verify => {
            let report = checks::run_all(cfg)?;
            let status = if report.all_passed() { 0 } else { 1 };
            return Ok(Output { text: report.render(&provenance(Command::Verify, cfg)), status });
        }
    };
    Ok(Output { text, status: 0 })
}

/// Header comment shared by every output.
pub fn provenance(command: Command, cfg: &RunConfig) -> String {
    let s = &cfg.scenario;
    format!(
        "isac {} preset={} seed={} quadrature_order={} power={} noise_c={} noise_s={} gain_c={} gain_s={} prior_var={}",
        command.name(),
        cfg.preset.name(),
        cfg.seed,
        cfg.quadrature_order,
        num(s.power),
        num(s.noise_c),
        num(s.noise_s),
        num(s.gain_c),
        num(s.gain_s),
        num(s.prior_var),
    )
}

/// `1 / (2^C - 1)`: `∞` at `C = 0`, `0` in the classical limit.
pub fn kappa_of(budget: AiBudget) -> f64 {
    1.0 / budget.latent_snr()
}

pub fn gaussian_sweep(cfg: &RunConfig) -> Result<String, CliError> {
    let rule = gauss_laguerre(cfg.quadrature_order)?;
    let sc = &cfg.scenario;
    let (mean_c, mean_s) = sc.classical_snrs();
    let rician = FadingModel::rician(cfg.sweep.rician_k)?;
    let mut w = CsvWriter::new();
    w.comment(&provenance(Command::GaussianSweep, cfg));
    w.header(&["c_ai", "rate_awgn", "rate_rayleigh", "rate_rician", "dist_awgn", "dist_rayleigh", "dist_rician"]);
    for c in grid(cfg.sweep.c_min, cfg.sweep.c_max, cfg.sweep.c_step) {
        let budget = AiBudget::new(c)?;
        let k = kappa_of(budget);
        let var = sc.prior_var;
        w.numbers(&[
            c,
            gaussian::rate(sc, budget),
            ergodic_rate(&FadingModel::Rayleigh, mean_c, k, &rule),
            ergodic_rate(&rician, mean_c, k, &rule),
            gaussian::distortion(sc, budget),
            ergodic_distortion(&FadingModel::Rayleigh, mean_s, k, var, &rule),
            ergodic_distortion(&rician, mean_s, k, var, &rule),
        ]);
    }
    Ok(w.finish())
}

pub fn frontier(cfg: &RunConfig) -> Result<String, CliError> {
    let mut w = CsvWriter::new();
    w.comment(&provenance(Command::Frontier, cfg));
    w.header(&["c_ai", "alpha", "rate", "distortion", "baseline_rate", "baseline_distortion"]);
    for &c in &cfg.frontier.budgets {
        let budget = AiBudget::new(c)?;
        let joint = joint_frontier(&cfg.scenario, budget, cfg.frontier.points)?;
        let base = separated_baseline(&cfg.scenario, budget, cfg.frontier.points)?;
        for (j, b) in joint.points.iter().zip(&base.points) {
            w.numbers(&[c, j.alpha, j.rate, j.distortion, b.rate, b.distortion]);
        }
    }
    Ok(w.finish())
}

/// Surface template: isotropic `Q`, unit noise, `dmu = 1`, and the configured channel.
pub fn mimo_template(cfg: &RunConfig) -> Result<MimoScenario, CliError> {
    let (nt, nr) = (cfg.mimo.n_t, cfg.mimo.n_r);
    let h = match cfg.mimo.channel {
        ChannelKind::Identity => {
            CMatrix::from_fn(nr, nt, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
        }
        ChannelKind::Rayleigh => {
            let mut cur = RandomStream::new(cfg.seed, CHANNEL_STREAM).cursor(0);
            let s = std::f64::consts::FRAC_1_SQRT_2;
            CMatrix::from_fn(nr, nt, |_, _| {
                let (a, b) = cur.normal_pair();
                C64::new(a * s, b * s)
            })
        }
    };
    let q = HermitianMatrix::identity(nt).scale(1.0 / nt as f64);
    Ok(MimoScenario {
        h_c: h.clone(),
        h_s: h,
        power: q.trace(),
        q,
        r_c: HermitianMatrix::identity(nr),
        r_s: HermitianMatrix::identity(nr),
        dmu: vec![C64::new(1.0, 0.0); nr],
        budget: AiBudget::unlimited(),
    })
}

pub fn mimo_surface(cfg: &RunConfig) -> Result<String, CliError> {
    let m = &cfg.mimo;
    let cs = grid(m.c_min, m.c_max, m.c_step);
    let snrs = grid(m.snr_min_db, m.snr_max_db, m.snr_step_db);
    let surface = rate_surface(&mimo_template(cfg)?, &cs, &snrs)?;
    let mut w = CsvWriter::new();
    w.comment(&format!("{} n_t={} n_r={}", provenance(Command::MimoSurface, cfg), m.n_t, m.n_r));
    w.header(&["c_ai", "snr_db", "rate"]);
    for (ci, &c) in cs.iter().enumerate() {
        for (si, &s) in snrs.iter().enumerate() {
            w.numbers(&[c, s, surface.at(ci, si)]);
        }
    }
    Ok(w.finish())
}

pub fn allocation_problem(cfg: &RunConfig) -> Result<AllocationProblem, CliError> {
    let a = &cfg.allocate;
    let mut p = AllocationProblem::new(cfg.scenario, a.lambda, AiBudget::new(a.c_ai)?)?;
    p.mode = a.mode;
    p.coupling = a.coupling;
    p.time = a.time;
    p.total_time = a.total_time;
    p.validate()?;
    Ok(p)
}

pub fn allocate(cfg: &RunConfig) -> Result<String, CliError> {
    let a = &cfg.allocate;
    let problem = allocation_problem(cfg)?;
    let r = optimize_alpha(&problem, a.alpha0, a.max_iter, a.tol)?;
    let mut w = CsvWriter::new();
    w.comment(&format!(
        "{} lambda={} c_ai={} alpha0={}",
        provenance(Command::Allocate, cfg),
        num(a.lambda),
        num(a.c_ai),
        num(a.alpha0)
    ));
    w.header(&["iteration", "alpha", "objective", "achieved_mi"]);
    for t in &r.trace {
        w.row(&[t.iteration.to_string(), num(t.alpha), num(t.objective), num(t.achieved_mi)]);
    }
    w.comment(&format!(
        "summary alpha_star={} J_star={} kkt_residual={} power_c={} power_s={} iterations={} converged={}",
        num(r.alpha_star),
        num(r.objective),
        num(r.kkt_residual),
        num(r.power_c),
        num(r.power_s),
        r.iterations,
        r.converged
    ));
    Ok(w.finish())
}
