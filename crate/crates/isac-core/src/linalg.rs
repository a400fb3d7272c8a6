//! Dense complex linear algebra sized for antenna arrays (n <= 64).
//!
//! Row-major storage; no BLAS. The Hermitian eigensolver is cyclic Jacobi,
//! which is slow asymptotically but accurate to working precision and easy
//! to audit.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fm;

pub type C64 = Complex64;

/// Largest dimension accepted by [`hermitian_eig`].
pub const MAX_EIG_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> C64>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Row-major construction; panics if `data.len() != rows * cols`.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "CMatrix::from_rows: shape mismatch");
        Self { rows, cols, data }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |r, c| if r == c { C64::new(diag[r], 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul: inner dimensions differ");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mat_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "mat_vec: dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|k| self[(i, k)] * v[k]).sum())
            .collect()
    }

    pub fn add(&self, rhs: &CMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add: shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &CMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub: shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        fm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Largest `|A - Aᴴ|` entry.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.rows {
            for c in 0..self.cols {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Square matrix with `A = Aᴴ`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    /// Accepts `m` if it is square and Hermitian to within `1e-12 (1 + ‖m‖)`;
    /// the stored copy is exactly symmetrised.
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidArgument("Hermitian matrix must be square"));
        }
        if m.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("matrix entries must be finite"));
        }
        if m.hermitian_defect() > 1e-12 * (1.0 + m.frobenius_norm()) {
            return Err(Error::InvalidArgument("matrix is not Hermitian"));
        }
        Ok(Self::symmetrised(m))
    }

    fn symmetrised(m: CMatrix) -> Self {
        let n = m.rows;
        let s = CMatrix::from_fn(n, n, |r, c| (m[(r, c)] + m[(c, r)].conj()) * 0.5);
        Self(s)
    }

    pub fn identity(n: usize) -> Self {
        Self(CMatrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(CMatrix::zeros(n, n))
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self(CMatrix::from_real_diag(diag))
    }

    /// `B A Bᴴ` for any conformable `B`.
    pub fn congruence(&self, b: &CMatrix) -> Self {
        Self::symmetrised(b.matmul(&self.0).matmul(&b.adjoint()))
    }

    pub fn add(&self, rhs: &HermitianMatrix) -> Self {
        Self(self.0.add(&rhs.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn eig(&self) -> Eigen {
        jacobi_eig(&self.0)
    }

    /// PSD up to an eigenvalue floor of `-1e-10 λ_max`.
    pub fn is_psd(&self) -> bool {
        let e = self.eig();
        let lmax = e.values.iter().cloned().fold(0.0, f64::max);
        e.values.iter().all(|&l| l >= -1e-10 * lmax)
    }

    pub fn cholesky(&self) -> Result<Cholesky> {
        Cholesky::new(&self.0)
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigen {
    /// `U diag(f(λ)) Uᴴ`.
    pub fn reconstruct_with<F: Fn(f64) -> f64>(&self, f: F) -> HermitianMatrix {
        let n = self.values.len();
        let u = &self.vectors;
        let m = CMatrix::from_fn(n, n, |r, c| {
            (0..n).map(|k| u[(r, k)] * f(self.values[k]) * u[(c, k)].conj()).sum()
        });
        HermitianMatrix::symmetrised(m)
    }
}

/// Eigen-decomposition of a Hermitian matrix given as a general [`CMatrix`].
pub fn hermitian_eig(a: &CMatrix) -> Result<Eigen> {
    if a.rows > MAX_EIG_DIM {
        return Err(Error::InvalidArgument("eigensolver dimension limited to 64"));
    }
    let h = HermitianMatrix::new(a.clone())?;
    Ok(h.eig())
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let mut s = 0.0;
    for r in 0..a.rows {
        for c in 0..a.cols {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    fm::sqrt(s)
}

fn jacobi_eig(input: &CMatrix) -> Eigen {
    let n = input.rows;
    let mut a = input.clone();
    let mut u = CMatrix::identity(n);
    let scale = a.frobenius_norm();
    if scale > 0.0 {
        for _sweep in 0..100 {
            if off_diagonal_norm(&a) <= 1e-16 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut u, p, q);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| u[(r, order[c])]);
    Eigen { values, vectors }
}

/// Zeroes `a[p][q]` with the unitary `G = diag(1, e^{-iφ}) [[c, s], [-s, c]]`
/// acting on rows/columns `p, q`, and accumulates `u ← u G`.
fn rotate(a: &mut CMatrix, u: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + fm::sqrt(1.0 + tau * tau))
    } else {
        -1.0 / (-tau + fm::sqrt(1.0 + tau * tau))
    };
    let c = 1.0 / fm::sqrt(1.0 + t * t);
    let s = t * c;
    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;
    let n = a.rows;
    // A ← A G (columns p, q).
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    // A ← Gᴴ A (rows p, q).
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    for k in 0..n {
        let ukp = u[(k, p)];
        let ukq = u[(k, q)];
        u[(k, p)] = ukp * g_pp + ukq * g_qp;
        u[(k, q)] = ukp * g_pq + ukq * g_qq;
    }
}

/// `A = L Lᴴ` for Hermitian positive definite `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky {
    l: CMatrix,
}

impl Cholesky {
    pub fn new(a: &CMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::InvalidArgument("Cholesky needs a square matrix"));
        }
        let n = a.rows;
        let mut l = CMatrix::zeros(n, n);
        let scale = (0..n).map(|i| fm::abs(a[(i, i)].re)).fold(0.0, f64::max);
        for j in 0..n {
            let mut d = a[(j, j)].re;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if !(d > 1e-14 * scale) {
                return Err(Error::Singular("Cholesky pivot not positive"));
            }
            let djj = fm::sqrt(d);
            l[(j, j)] = C64::new(djj, 0.0);
            for i in (j + 1)..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / djj;
            }
        }
        Ok(Self { l })
    }

    pub fn factor(&self) -> &CMatrix {
        &self.l
    }

    /// Natural-log determinant of `A`.
    pub fn ln_det(&self) -> f64 {
        2.0 * (0..self.l.rows).map(|i| fm::ln(self.l[(i, i)].re)).sum::<f64>()
    }

    /// Solves `L y = b`.
    pub fn forward(&self, b: &[C64]) -> Vec<C64> {
        let n = self.l.rows;
        let mut y = b.to_vec();
        for i in 0..n {
            let s = (0..i).fold(y[i], |s, k| s - self.l[(i, k)] * y[k]);
            y[i] = s / self.l[(i, i)].re;
        }
        y
    }

    /// `L⁻¹ M L⁻ᴴ`, Hermitian when `M` is.
    pub fn whiten(&self, m: &HermitianMatrix) -> HermitianMatrix {
        let n = self.l.rows;
        // Columns of L⁻¹ M, then rows via adjoint symmetry.
        let mut left = CMatrix::zeros(n, n);
        for c in 0..n {
            let col = self.forward(&m.as_matrix().column(c));
            for r in 0..n {
                left[(r, c)] = col[r];
            }
        }
        let left_adj = left.adjoint();
        let mut out = CMatrix::zeros(n, n);
        for c in 0..n {
            let col = self.forward(&left_adj.column(c));
            for r in 0..n {
                out[(r, c)] = col[r];
            }
        }
        HermitianMatrix::symmetrised(out.adjoint())
    }

    /// `bᴴ A⁻¹ b`.
    pub fn inverse_quad_form(&self, b: &[C64]) -> f64 {
        self.forward(b).iter().map(|z| z.norm_sqr()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_hermitian(n: usize, vals: &[f64]) -> CMatrix {
        let mut k = 0;
        let mut next = || {
            k += 1;
            vals[k % vals.len()] * (1.0 + 0.37 * k as f64).sin()
        };
        let mut m = CMatrix::zeros(n, n);
        for r in 0..n {
            m[(r, r)] = C64::new(next(), 0.0);
            for c in (r + 1)..n {
                let z = C64::new(next(), next());
                m[(r, c)] = z;
                m[(c, r)] = z.conj();
            }
        }
        m
    }

    fn residuals(a: &CMatrix, e: &Eigen) -> (f64, f64) {
        let n = a.rows();
        let lam = CMatrix::from_real_diag(&e.values);
        let au = a.matmul(&e.vectors);
        let ul = e.vectors.matmul(&lam);
        let res = au.sub(&ul).frobenius_norm();
        let unit = e.vectors.adjoint().matmul(&e.vectors).sub(&CMatrix::identity(n)).frobenius_norm();
        (res, unit)
    }

    #[test]
    fn identity_eigenvalues() {
        let e = hermitian_eig(&CMatrix::identity(3)).unwrap();
        assert!(e.values.iter().all(|&v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn diagonal_eigenpairs_are_axis_vectors() {
        let e = hermitian_eig(&CMatrix::from_real_diag(&[4.0, 1.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 4.0]);
        assert!((e.vectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert!((e.vectors[(0, 1)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = CMatrix::identity(2);
        m[(0, 1)] = C64::new(1.0, 1.0);
        assert!(hermitian_eig(&m).is_err());
        assert!(hermitian_eig(&CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn complex_two_by_two_known_spectrum() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = CMatrix::from_rows(
            2,
            2,
            vec![C64::new(2.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), C64::new(2.0, 0.0)],
        );
        let e = hermitian_eig(&m).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn large_matrix_converges() {
        let vals: Vec<f64> = (1..50).map(|i| i as f64 * 0.3).collect();
        let a = random_hermitian(64, &vals);
        let e = hermitian_eig(&a).unwrap();
        let (res, unit) = residuals(&a, &e);
        assert!(res <= 1e-10 * a.frobenius_norm(), "{res}");
        assert!(unit <= 1e-10);
        assert!(hermitian_eig(&random_hermitian(65, &vals)).is_err());
    }

    #[test]
    fn cholesky_log_det_and_solve() {
        let a = HermitianMatrix::new(CMatrix::from_rows(
            2,
            2,
            vec![C64::new(4.0, 0.0), C64::new(1.0, 1.0), C64::new(1.0, -1.0), C64::new(3.0, 0.0)],
        ))
        .unwrap();
        let ch = a.cholesky().unwrap();
        // det = 12 - |1+i|^2 = 10
        assert!((ch.ln_det() - 10f64.ln()).abs() < 1e-14);
        let l = ch.factor();
        let back = l.matmul(&l.adjoint());
        assert!(back.sub(a.as_matrix()).frobenius_norm() < 1e-14);
        assert!(HermitianMatrix::from_real_diag(&[1.0, 0.0]).cholesky().is_err());
    }

    proptest! {
        #[test]
        fn eig_reconstructs_random_hermitian(
            n in 1usize..6,
            vals in proptest::collection::vec(-5.0f64..5.0, 8..40),
        ) {
            let a = random_hermitian(n, &vals);
            let e = hermitian_eig(&a).unwrap();
            let (res, unit) = residuals(&a, &e);
            prop_assert!(res <= 1e-10 * a.frobenius_norm().max(1e-300));
            prop_assert!(unit <= 1e-10);
            prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
