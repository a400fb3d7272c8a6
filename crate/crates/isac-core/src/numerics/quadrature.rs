use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fm;

/// Order used when callers do not ask for one.
pub const DEFAULT_ORDER: usize = 20;
pub const MAX_ORDER: usize = 128;

/// Gauss-Laguerre rule for `∫_0^∞ g(x) e^{-x} dx ≈ Σ w_m g(ξ_m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes, strictly ascending and positive.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(ξ_m, w_m)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Applies the rule to `g`, i.e. approximates `∫ g(x) e^{-x} dx`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        self.iter().map(|(x, w)| w * g(x)).sum()
    }
}

/// Builds the order-`m` rule.
///
/// Nodes are the zeros of the Laguerre polynomial `L_m`, located by Newton
/// iteration on the three-term recurrence from the usual asymptotic starting
/// points; weights follow from `w = -1 / (m L'_m(ξ) L_{m-1}(ξ))`.
pub fn gauss_laguerre(m: usize) -> Result<QuadratureRule> {
    if m == 0 || m > MAX_ORDER {
        return Err(Error::InvalidArgument("quadrature order must lie in 1..=128"));
    }
    let n = m as f64;
    let mut nodes: Vec<f64> = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * n),
            1 => z + 15.0 / (1.0 + 2.5 * n),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
            }
        };
        let mut deriv = 0.0;
        let mut prev = 0.0;
        for _ in 0..100 {
            let (p, p_prev) = laguerre_pair(m, z);
            deriv = n * (p - p_prev) / z;
            prev = p_prev;
            let step = p / deriv;
            z -= step;
            if fm::abs(step) <= 1e-15 * z {
                break;
            }
        }
        // One more evaluation at the converged node keeps the weight consistent.
        let (p, p_prev) = laguerre_pair(m, z);
        if p != 0.0 || deriv == 0.0 {
            deriv = n * (p - p_prev) / z;
            prev = p_prev;
        }
        nodes.push(z);
        weights.push(-1.0 / (deriv * n * prev));
    }
    Ok(QuadratureRule { nodes, weights })
}

/// `(L_m(x), L_{m-1}(x))` from `j L_j = (2j - 1 - x) L_{j-1} - (j - 1) L_{j-2}`.
fn laguerre_pair(m: usize, x: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 1..=m {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = ((2.0 * jf - 1.0 - x) * p2 - (jf - 1.0) * p3) / jf;
    }
    (p1, p2)
}
