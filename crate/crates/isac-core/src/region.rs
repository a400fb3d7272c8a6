//! Achievable (rate, distortion) frontier for a power split `α`, the
//! time-sharing baseline, and exact membership queries.
//!
//! Communication gets `αP` and sensing `(1-α)P`; the AI noise `N_z` is set
//! by the total power `P`, so both effective SNRs are linear in the split.

use alloc::vec::Vec;
use core::f64::consts::LN_2;

use crate::bottleneck::AiBudget;
use crate::error::{Error, Result};
use crate::fm;
use crate::gaussian::{bottlenecked_snr, PerfPoint, ScalarScenario};

/// Default number of α points.
pub const DEFAULT_POINTS: usize = 201;

/// Slack below which a point on the boundary still counts as inside.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontierPoint {
    pub alpha: f64,
    pub rate: f64,
    pub distortion: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frontier {
    pub budget: AiBudget,
    pub points: Vec<FrontierPoint>,
}

impl Frontier {
    /// Largest rate and distortion gaps against `other` at matching indices.
    pub fn sup_distance(&self, other: &Frontier) -> (f64, f64) {
        self.points.iter().zip(&other.points).fold((0.0, 0.0), |(r, d), (a, b)| {
            (f64::max(r, fm::abs(a.rate - b.rate)), f64::max(d, fm::abs(a.distortion - b.distortion)))
        })
    }

    /// Every point has at least `other`'s rate and at most its distortion.
    pub fn dominates(&self, other: &Frontier) -> bool {
        self.points.len() == other.points.len()
            && self.points.iter().zip(&other.points).all(|(a, b)| a.rate >= b.rate && a.distortion <= b.distortion)
    }
}

/// Effective SNRs per unit split: `(γ̃_c at α = 1, γ̃_s at α = 0)`.
fn unit_snrs(sc: &ScalarScenario, budget: AiBudget) -> (f64, f64) {
    let m = budget.latent_snr();
    (
        bottlenecked_snr(sc.gain_c, sc.power, sc.noise_c, sc.power, m),
        bottlenecked_snr(sc.gain_s, sc.power, sc.noise_s, sc.power, m),
    )
}

fn alpha_grid(n_points: usize) -> Result<impl Iterator<Item = f64>> {
    if n_points < 2 {
        return Err(Error::InvalidArgument("a frontier needs at least 2 points"));
    }
    let last = (n_points - 1) as f64;
    Ok((0..n_points).map(move |i| i as f64 / last))
}

/// Joint design: rate at `αP`, distortion at `(1-α)P`.
pub fn joint_point(sc: &ScalarScenario, budget: AiBudget, alpha: f64) -> FrontierPoint {
    let (c, s) = unit_snrs(sc, budget);
    FrontierPoint {
        alpha,
        rate: fm::ln_1p(alpha * c) / LN_2,
        distortion: sc.prior_var / (1.0 + (1.0 - alpha) * s),
    }
}

pub fn frontier(sc: &ScalarScenario, budget: AiBudget, n_points: usize) -> Result<Frontier> {
    sc.validate()?;
    let points = alpha_grid(n_points)?.map(|a| joint_point(sc, budget, a)).collect();
    Ok(Frontier { budget, points })
}

/// Time sharing: a fraction `τ` at full power for communication only, the
/// rest for sensing only. `τ` is reported as `alpha`.
pub fn separated_point(sc: &ScalarScenario, budget: AiBudget, tau: f64) -> FrontierPoint {
    let (c, s) = unit_snrs(sc, budget);
    FrontierPoint {
        alpha: tau,
        rate: tau * fm::ln_1p(c) / LN_2,
        distortion: sc.prior_var / (1.0 + (1.0 - tau) * s),
    }
}

pub fn separated_baseline(sc: &ScalarScenario, budget: AiBudget, n_points: usize) -> Result<Frontier> {
    sc.validate()?;
    let points = alpha_grid(n_points)?.map(|t| separated_point(sc, budget, t)).collect();
    Ok(Frontier { budget, points })
}

/// Result of [`in_region`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub inside: bool,
    /// Smallest split meeting the rate target (clamped to `[0, 1]`).
    pub alpha: f64,
    /// Width of the feasible split interval; negative when outside and
    /// `-∞` when a target cannot be met at any split.
    pub slack: f64,
}

/// Whether some split achieves at least `candidate.rate` and at most
/// `candidate.distortion`. The rate target sets a lower bound on `α`
/// and the distortion target an upper bound; both are solved exactly.
pub fn in_region(sc: &ScalarScenario, budget: AiBudget, candidate: PerfPoint) -> Result<Membership> {
    sc.validate()?;
    if !(candidate.rate >= 0.0) || !(candidate.distortion > 0.0) {
        return Err(Error::InvalidArgument("candidate needs rate >= 0 and distortion > 0"));
    }
    let (c, s) = unit_snrs(sc, budget);
    let need_c = fm::exp_m1(candidate.rate * LN_2);
    let need_s = sc.prior_var / candidate.distortion - 1.0;
    let lo = if need_c <= 0.0 {
        0.0
    } else if c > 0.0 {
        need_c / c
    } else {
        f64::INFINITY
    };
    let hi = if need_s <= 0.0 {
        1.0
    } else if s > 0.0 {
        1.0 - need_s / s
    } else {
        f64::NEG_INFINITY
    };
    let (lo_c, hi_c) = (lo.max(0.0), hi.min(1.0));
    let slack = if lo.is_finite() && hi.is_finite() { hi_c - lo_c } else { f64::NEG_INFINITY };
    Ok(Membership { inside: slack >= -MEMBERSHIP_TOL, alpha: lo_c.min(1.0), slack })
}

/// Fraction of baseline points that lie inside the joint region.
pub fn baseline_dominance_fraction(sc: &ScalarScenario, budget: AiBudget, n_points: usize) -> Result<f64> {
    let base = separated_baseline(sc, budget, n_points)?;
    let mut inside = 0usize;
    for p in &base.points {
        let m = in_region(sc, budget, PerfPoint { rate: p.rate, distortion: p.distortion })?;
        if m.inside {
            inside += 1;
        }
    }
    Ok(inside as f64 / base.points.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(c: f64) -> AiBudget {
        AiBudget::new(c).unwrap()
    }

    fn dbm_scenario() -> ScalarScenario {
        ScalarScenario::new(0.01, 1.0, 1.0, 0.1, 0.1, 1.0).unwrap()
    }

    fn unit_power() -> ScalarScenario {
        ScalarScenario::new(1.0, 1.0, 1.0, 0.1, 0.1, 1.0).unwrap()
    }

    #[test]
    fn endpoints() {
        for sc in [dbm_scenario(), unit_power()] {
            let f = frontier(&sc, b(3.0), DEFAULT_POINTS).unwrap();
            let first = f.points.first().unwrap();
            let last = f.points.last().unwrap();
            assert_eq!(first.rate, 0.0);
            assert_eq!(last.distortion, sc.prior_var);
            let base = separated_baseline(&sc, b(3.0), DEFAULT_POINTS).unwrap();
            assert_eq!(base.points[0].rate, 0.0);
            assert!((base.points.last().unwrap().rate - last.rate).abs() < 1e-15);
            assert_eq!(base.points[0].distortion, first.distortion);
        }
    }

    #[test]
    fn frontier_matches_gaussian_closed_forms_at_full_split() {
        let sc = unit_power();
        let f = frontier(&sc, b(2.0), 11).unwrap();
        assert!((f.points[10].rate - crate::gaussian::rate(&sc, b(2.0))).abs() < 1e-15);
        assert!((f.points[0].distortion - crate::gaussian::distortion(&sc, b(2.0))).abs() < 1e-15);
    }

    #[test]
    fn nested_in_budget() {
        for sc in [dbm_scenario(), unit_power()] {
            let fs: Vec<_> = [0.5, 2.0, 4.0, 6.0].iter().map(|&c| frontier(&sc, b(c), DEFAULT_POINTS).unwrap()).collect();
            for w in fs.windows(2) {
                assert!(w[1].dominates(&w[0]));
            }
        }
    }

    #[test]
    fn classical_limit_at_twelve_bits() {
        let sc = dbm_scenario();
        let (dr, dd) = frontier(&sc, b(12.0), DEFAULT_POINTS)
            .unwrap()
            .sup_distance(&frontier(&sc, AiBudget::unlimited(), DEFAULT_POINTS).unwrap());
        assert!(dr <= 1e-3 && dd <= 1e-3 * sc.prior_var, "{dr} {dd}");
    }

    #[test]
    fn membership_examples() {
        let sc = unit_power();
        let origin = PerfPoint { rate: 0.0, distortion: sc.prior_var };
        assert!(in_region(&sc, b(0.5), origin).unwrap().inside);
        assert!(in_region(&sc, b(0.0), origin).unwrap().inside);
        let f6 = frontier(&sc, b(6.0), 21).unwrap();
        let mut outside = 0;
        for p in &f6.points {
            let m = in_region(&sc, b(6.0), PerfPoint { rate: p.rate, distortion: p.distortion }).unwrap();
            assert!(m.inside && m.slack.abs() < 1e-9, "{p:?} {m:?}");
            let m2 = in_region(&sc, b(2.0), PerfPoint { rate: p.rate, distortion: p.distortion }).unwrap();
            if !m2.inside {
                outside += 1;
            }
        }
        // Only the two degenerate endpoints can be shared.
        assert!(outside >= 19);
        assert!(in_region(&sc, b(2.0), PerfPoint { rate: 0.0, distortion: 0.0 }).is_err());
    }

    #[test]
    fn unreachable_targets_have_infinite_negative_slack() {
        let sc = ScalarScenario { gain_c: 0.0, ..unit_power() };
        let m = in_region(&sc, b(3.0), PerfPoint { rate: 0.1, distortion: 1.0 }).unwrap();
        assert!(!m.inside && m.slack == f64::NEG_INFINITY);
    }

    #[test]
    fn joint_dominates_time_sharing() {
        for sc in [dbm_scenario(), unit_power()] {
            for c in [0.5, 2.0, 4.0, 6.0] {
                assert!(baseline_dominance_fraction(&sc, b(c), DEFAULT_POINTS).unwrap() >= 0.95);
            }
        }
    }

    #[test]
    fn too_few_points() {
        assert!(frontier(&unit_power(), b(1.0), 1).is_err());
        assert!(separated_baseline(&unit_power(), b(1.0), 0).is_err());
    }

    proptest! {
        #[test]
        fn monotone_in_alpha(p in 1e-3f64..10.0, g in 0.1f64..3.0, c in 0.1f64..12.0) {
            let sc = ScalarScenario::new(p, g, g, 0.1, 0.2, 1.5).unwrap();
            let f = frontier(&sc, b(c), 51).unwrap();
            for w in f.points.windows(2) {
                prop_assert!(w[1].rate >= w[0].rate);
                prop_assert!(w[1].distortion >= w[0].distortion);
            }
        }

        #[test]
        fn membership_monotone_in_budget(
            r in 0.0f64..4.0, d in 0.05f64..1.0, c in 0.1f64..8.0, dc in 0.0f64..4.0,
        ) {
            let sc = unit_power();
            let cand = PerfPoint { rate: r, distortion: d };
            if in_region(&sc, b(c), cand).unwrap().inside {
                prop_assert!(in_region(&sc, b(c + dc), cand).unwrap().inside);
            }
        }

        #[test]
        fn membership_agrees_with_fine_grid(r in 0.0f64..3.0, d in 0.1f64..1.0, c in 0.5f64..8.0) {
            let sc = unit_power();
            let cand = PerfPoint { rate: r, distortion: d };
            let m = in_region(&sc, b(c), cand).unwrap();
            let grid_inside = (0..=20_000).any(|i| {
                let p = joint_point(&sc, b(c), i as f64 / 20_000.0);
                p.rate >= r && p.distortion <= d
            });
            // The grid can only miss intervals narrower than its step.
            if grid_inside {
                prop_assert!(m.inside);
            } else if m.inside {
                prop_assert!(m.slack < 1e-4);
            }
        }
    }
}
