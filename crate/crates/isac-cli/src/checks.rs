//! The property suite behind `isac verify`.

use isac_core::allocate::{
    enforced_performance, gradients, kkt_power_split, objective, optimize_alpha, performance, AllocationProblem,
    ObjectiveMode,
};
use isac_core::bottleneck::{covariance_map, gaussian_mi, AiBudget};
use isac_core::fading::{ergodic_distortion, ergodic_rate, FadingModel};
use isac_core::gaussian::{self, scaling_gap, ScalarScenario};
use isac_core::linalg::{CMatrix, HermitianMatrix, C64};
use isac_core::mimo::{mimo_rate, rate_surface, scenario_at, MimoScenario};
use isac_core::numerics::{gauss_laguerre, RandomStream};
use isac_core::region::{baseline_dominance_fraction, frontier};

use crate::commands::{allocation_problem, kappa_of, mimo_template};
use crate::config::{db_to_linear, grid, RunConfig};
use crate::csv::num;
use crate::error::CliError;
use crate::par_mc::monte_carlo;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub observed: f64,
    pub bound: String,
}

impl Check {
    pub fn at_most(name: &str, observed: f64, tol: f64) -> Self {
        Self { name: name.into(), pass: observed <= tol, observed, bound: format!("<= {}", num(tol)) }
    }

    pub fn at_least(name: &str, observed: f64, tol: f64) -> Self {
        Self { name: name.into(), pass: observed >= tol, observed, bound: format!(">= {}", num(tol)) }
    }

    pub fn within(name: &str, observed: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            pass: (lo..=hi).contains(&observed),
            observed,
            bound: format!("in [{}, {}]", num(lo), num(hi)),
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {} observed={} tolerance={}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            num(self.observed),
            self.bound
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn render(&self, header: &str) -> String {
        let mut out = format!("# {header}\n");
        for c in &self.checks {
            out.push_str(&c.line());
            out.push('\n');
        }
        let failed = self.failed().count();
        out.push_str(&format!("# {} passed, {} failed\n", self.checks.len() - failed, failed));
        out
    }
}

pub fn run_all(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut checks = Vec::new();
    quadrature(cfg, &mut checks)?;
    monte_carlo_agreement(cfg, &mut checks)?;
    covariance_map_checks(cfg, &mut checks)?;
    scalar(cfg, &mut checks)?;
    region(cfg, &mut checks)?;
    mimo(cfg, &mut checks)?;
    allocation(cfg, &mut checks)?;
    Ok(Report { checks })
}

/// Mean SNRs −5..25 dB (31 points).
fn mean_snr_grid() -> Vec<f64> {
    (-5..=25).map(|d| db_to_linear(d as f64)).collect()
}

fn quadrature(cfg: &RunConfig, out: &mut Vec<Check>) -> Result<(), CliError> {
    let rule = gauss_laguerre(cfg.quadrature_order)?;
    let reference = gauss_laguerre(80)?;
    let mut worst: f64 = 0.0;
    for mean in mean_snr_grid() {
        for c in [0.5, 1.0, 2.0, 4.0, 8.0] {
            let k = kappa_of(AiBudget::new(c)?);
            let a = ergodic_rate(&FadingModel::Rayleigh, mean, k, &rule);
            let b = ergodic_rate(&FadingModel::Rayleigh, mean, k, &reference);
            worst = worst.max((a - b).abs());
        }
    }
    out.push(Check::at_most("quadrature_convergence_vs_order_80", worst, 1e-4));
    Ok(())
}

fn monte_carlo_agreement(cfg: &RunConfig, out: &mut Vec<Check>) -> Result<(), CliError> {
    let rule = gauss_laguerre(cfg.quadrature_order)?;
    let var = cfg.scenario.prior_var;
    let models = [FadingModel::Rayleigh, FadingModel::rician(cfg.sweep.rician_k)?];
    let (mut worst_r, mut worst_d): (f64, f64) = (0.0, 0.0);
    let mut stream_id = 0;
    for model in models {
        for mean_db in [0.0, 10.0, 20.0] {
            for c in [1.0, 4.0, 8.0] {
                let mean = db_to_linear(mean_db);
                let k = kappa_of(AiBudget::new(c)?);
                let est = monte_carlo(model, mean, k, var, cfg.verify.mc_samples, &RandomStream::new(cfg.seed, stream_id))?;
                stream_id += 1;
                worst_r = worst_r.max((est.rate - ergodic_rate(&model, mean, k, &rule)).abs());
                worst_d = worst_d.max((est.distortion - ergodic_distortion(&model, mean, k, var, &rule)).abs());
            }
        }
    }
    out.push(Check::at_most("monte_carlo_rate_agreement", worst_r, 3e-3));
    out.push(Check::at_most("monte_carlo_distortion_agreement", worst_d, 3e-3 * var));
    Ok(())
}

fn covariance_map_checks(cfg: &RunConfig, out: &mut Vec<Check>) -> Result<(), CliError> {
    let mut cur = RandomStream::new(cfg.seed, 0x4c31).cursor(0);
    let mut worst: f64 = 0.0;
    for i in 0..100usize {
        let n = 1 + i % 4;
        let r = 1 + (i / 4) % n;
        let c = 0.5 * (1 + i % 16) as f64;
        let g = CMatrix::from_fn(n, r, |_, _| {
            let (a, b) = cur.normal_pair();
            C64::new(a, b)
        });
        let q = HermitianMatrix::new(g.matmul(&g.adjoint()))?;
        let rz = covariance_map(&q, AiBudget::new(c)?)?;
        worst = worst.max((gaussian_mi(&q, &rz)? - c).abs());
    }
    out.push(Check::at_most("covariance_map_mi_equality", worst, 1e-9));

    // Rank-2 diagonal Q: ζQ against the best diagonal noise on a ρ1 grid.
    let (l1, l2, c, step) = (3.0, 0.5, 2.5, 1e-3);
    let t = covariance_map(&HermitianMatrix::from_real_diag(&[l1, l2]), AiBudget::new(c)?)?.trace();
    let gamma = 2f64.powf(c);
    let mut best = f64::INFINITY;
    let mut rho1 = step;
    while rho1 < 50.0 {
        let slack = gamma / (1.0 + l1 / rho1);
        if slack > 1.0 {
            best = best.min(rho1 + l2 / (slack - 1.0));
        }
        rho1 += step;
    }
    out.push(Check::at_most("covariance_map_min_trace_vs_grid", t - best, step));
    Ok(())
}

fn scalar(cfg: &RunConfig, out: &mut Vec<Check>) -> Result<(), CliError> {
    let sc = &cfg.scenario;
    let slope = scaling_gap(sc, &[4.0, 5.0, 6.0, 7.0, 8.0])?;
    out.push(Check::within("scaling_slope", slope, -1.15, -0.85));

    let rule = gauss_laguerre(cfg.quadrature_order)?;
    let (mean_c, mean_s) = sc.classical_snrs();
    let ric = FadingModel::rician(cfg.sweep.rician_k)?;
    let mut violations = 0usize;
    for c in grid(cfg.sweep.c_min, cfg.sweep.c_max, cfg.sweep.c_step) {
        let budget = AiBudget::new(c)?;
        let k = kappa_of(budget);
        let (ra, da) = (gaussian::rate(sc, budget), gaussian::distortion(sc, budget));
        let rr = ergodic_rate(&FadingModel::Rayleigh, mean_c, k, &rule);
        let rc = ergodic_rate(&ric, mean_c, k, &rule);
        let dr = ergodic_distortion(&FadingModel::Rayleigh, mean_s, k, sc.prior_var, &rule);
        let dc = ergodic_distortion(&ric, mean_s, k, sc.prior_var, &rule);
        violations += usize::from(!(rc >= ra && ra >= rr)) + usize::from(!(dc <= da && da <= dr));
    }
    out.push(Check::at_most("fading_ordering_violations", violations as f64, 0.0));
    Ok(())
}

fn region(cfg: &RunConfig, out: &mut Vec<Check>) -> Result<(), CliError> {
    let sc = &cfg.scenario;
    let n = cfg.frontier.points;
    let budgets = [0.5, 2.0, 4.0, 6.0];
    let fronts = budgets
        .iter()
        .map(|&c| frontier(sc, AiBudget::new(c)?, n))
        .collect::<Result<Vec<_>, _>>()?;
    let nesting = fronts.windows(2).filter(|w| !w[1].dominates(&w[0])).count();
    out.push(Check::at_most("frontier_nesting_violations", nesting as f64, 0.0));

    let (dr, dd) = frontier(sc, AiBudget::new(12.0)?, n)?.sup_distance(&frontier(sc, AiBudget::unlimited(), n)?);
    out.push(Check::at_most("frontier_classical_limit_rate", dr, 1e-3));
    out.push(Check::at_most("frontier_classical_limit_distortion", dd, 1e-3 * sc.prior_var));

    let mut worst: f64 = 1.0;
    for &c in &budgets {
        worst = worst.min(baseline_dominance_fraction(sc, AiBudget::new(c)?, n)?);
    }
    out.push(Check::at_least("joint_over_separated_fraction", worst, 0.95));
    Ok(())
}

fn mimo(cfg: &RunConfig, out: &mut Vec<Check>) -> Result<(), CliError> {
    let template = mimo_template(cfg)?;
    let m = &cfg.mimo;
    let cs = grid(m.c_min, m.c_max, m.c_step);
    let snrs = grid(m.snr_min_db, m.snr_max_db, m.snr_step_db);
    let s = rate_surface(&template, &cs, &snrs)?;
    let mut violations = 0usize;
    for i in 0..cs.len() {
        for j in 0..snrs.len() {
            if i + 1 < cs.len() && s.at(i + 1, j) < s.at(i, j) {
                violations += 1;
            }
            if j + 1 < snrs.len() && s.at(i, j + 1) < s.at(i, j) {
                violations += 1;
            }
        }
    }
    out.push(Check::at_most("mimo_surface_monotone_violations", violations as f64, 0.0));

    let spread = (0..cs.len()).map(|i| s.at(i, 0)).fold(f64::NEG_INFINITY, f64::max)
        - (0..cs.len()).map(|i| s.at(i, 0)).fold(f64::INFINITY, f64::min);
    out.push(Check::at_most("mimo_low_snr_spread", spread, 0.2));

    let r6 = mimo_rate(&scenario_at(&template, 6.0, 20.0)?)?;
    let r8 = mimo_rate(&scenario_at(&template, 8.0, 20.0)?)?;
    out.push(Check::at_most("mimo_saturation_gain_6_to_8_bits_at_20db", (r8 - r6) / r6, 0.05));

    let mut worst: f64 = 0.0;
    for g in [0.0f64, 0.3, 1.0, 2.5] {
        for p in [0.01, 1.0, 10.0] {
            for n in [0.1, 1.0] {
                for c in [0.5, 2.0, 8.0, f64::INFINITY] {
                    let budget = AiBudget::new(c)?;
                    let h = CMatrix::from_fn(1, 1, |_, _| C64::new(g.sqrt(), 0.0));
                    let sc1 = MimoScenario {
                        h_c: h.clone(),
                        h_s: h,
                        q: HermitianMatrix::from_real_diag(&[p]),
                        r_c: HermitianMatrix::from_real_diag(&[n]),
                        r_s: HermitianMatrix::from_real_diag(&[n]),
                        dmu: vec![C64::new(1.0, 0.0)],
                        budget,
                        power: p,
                    };
                    let scalar = gaussian::rate(&ScalarScenario::new(p, g, g, n, n, 1.0)?, budget);
                    worst = worst.max((mimo_rate(&sc1)? - scalar).abs());
                }
            }
        }
    }
    out.push(Check::at_most("mimo_scalar_reduction", worst, 1e-12));
    Ok(())
}

fn allocation(cfg: &RunConfig, out: &mut Vec<Check>) -> Result<(), CliError> {
    let problem = allocation_problem(cfg)?;
    let mut worst: f64 = 0.0;
    for c in grid(0.5, 8.0, 0.5) {
        let mut p = problem;
        p.budget = AiBudget::new(c)?;
        let a = performance(&p, cfg.verify.alpha)?;
        let e = enforced_performance(&p, cfg.verify.alpha)?;
        worst = worst.max((a.rate - e.rate).abs()).max((a.distortion - e.distortion).abs());
    }
    out.push(Check::at_most("theory_vs_enforced_noise", worst, 1e-9));

    let a = &cfg.allocate;
    let r = optimize_alpha(&problem, a.alpha0, a.max_iter, a.tol)?;
    out.push(Check::at_most("optimizer_alpha_star_gap_to_one", (r.alpha_star - 1.0).abs(), 2e-3));
    out.push(Check::at_most("optimizer_iterations", r.iterations as f64, 50.0));
    let mi_gap = r.trace.iter().map(|t| (t.achieved_mi - a.c_ai).abs()).fold(0.0, f64::max);
    out.push(Check::at_most("optimizer_achieved_mi_gap", mi_gap, 1e-9));
    let descents = r.trace.windows(2).filter(|w| w[1].objective < w[0].objective).count();
    out.push(Check::at_most("optimizer_objective_descents", descents as f64, 0.0));

    kkt(cfg, out)
}

fn kkt(cfg: &RunConfig, out: &mut Vec<Check>) -> Result<(), CliError> {
    let sc = cfg.scenario;
    let p_total = sc.power;
    let mut cur = RandomStream::new(cfg.seed, 0x4b4b54).cursor(0);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let lambda = 0.05 + 0.9 * cur.uniform();
        let c = 0.5 + 7.5 * cur.uniform();
        let frac = 0.05 + 0.9 * cur.uniform();
        let mut p = AllocationProblem::new(sc, lambda, AiBudget::new(c)?)?;
        p.mode = ObjectiveMode::Weighted;
        let pc = frac * p_total;
        let h = 1e-5 * p_total;
        let (dr, dd) = gradients(&p, pc)?;
        let at = |x: f64| performance(&p, x / p_total);
        let fr = (at(pc + h)?.rate - at(pc - h)?.rate) / (2.0 * h);
        let fd = (at(pc + h)?.distortion - at(pc - h)?.distortion) / (2.0 * h);
        worst = worst.max((dr - fr).abs() / dr.abs()).max((dd - fd).abs() / dd.abs());
    }
    out.push(Check::at_most("kkt_gradient_vs_finite_difference", worst, 1e-6));

    let n_grid = 10_000;
    let (mut grid_gap, mut limit_gap): (f64, f64) = (0.0, 0.0);
    for lambda in [0.2, 0.4, 0.6, 0.8] {
        for c in [1.0, 4.0, 8.0] {
            let mut p = AllocationProblem::new(sc, lambda, AiBudget::new(c)?)?;
            p.mode = ObjectiveMode::Weighted;
            let split = kkt_power_split(&p)?;
            if split.power_c > 0.0 && split.power_c < p_total {
                let mut best = (0.0, f64::NEG_INFINITY);
                for i in 0..=n_grid {
                    let alpha = i as f64 / n_grid as f64;
                    let j = objective(&p, alpha)?;
                    if j > best.1 {
                        best = (alpha, j);
                    }
                }
                grid_gap = grid_gap.max((split.power_c - best.0 * p_total).abs() / p_total);
            }
            let mut hi = p;
            hi.budget = AiBudget::new(30.0)?;
            let mut classical = p;
            classical.budget = AiBudget::unlimited();
            let gap = (kkt_power_split(&hi)?.power_c - kkt_power_split(&classical)?.power_c).abs() / p_total;
            limit_gap = limit_gap.max(gap);
        }
    }
    out.push(Check::at_most("kkt_split_vs_grid_argmax_over_power", grid_gap, 1e-4));
    out.push(Check::at_most("kkt_split_classical_limit_over_power", limit_gap, 1e-6));
    Ok(())
}
