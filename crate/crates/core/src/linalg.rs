//! Small dense complex linear algebra.
//!
//! Everything here targets matrices of at most a few hundred entries
//! (Hilbert dimension ≤ 8, Liouville dimension ≤ 64), so storage is a flat
//! row-major `Vec` and all algorithms are the textbook dense ones.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major data. Panics if the length is wrong.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data has wrong length");
        Self { rows, cols, data }
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(N, N, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn from_rows<const N: usize>(rows: [[Complex64; N]; N]) -> Self {
        Self::from_fn(N, N, |i, j| rows[i][j])
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    /// Outer product `a b^dagger`.
    pub fn outer(a: &[Complex64], b: &[Complex64]) -> Self {
        Self::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (rb, cb) = (other.rows, other.cols);
        Self::from_fn(self.rows * rb, self.cols * cb, |r, c| {
            self[(r / rb, c / cb)] * other[(r % rb, c % cb)]
        })
    }

    pub fn mat_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// `v^dagger A w`.
    pub fn sandwich(&self, v: &[Complex64], w: &[Complex64]) -> Complex64 {
        self.mat_vec(w).iter().zip(v).map(|(aw, vi)| vi.conj() * aw).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max entrywise deviation from Hermiticity.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Solves `self * X = rhs` by LU with partial pivoting.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if rhs.rows != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rhs.rows,
            });
        }
        let m = rhs.cols;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for k in 0..n {
            let (mut piv, mut best) = (k, a[(k, k)].norm());
            for i in k + 1..n {
                let v = a[(i, k)].norm();
                if v > best {
                    piv = i;
                    best = v;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::Singular);
            }
            if piv != k {
                for j in 0..n {
                    a.data.swap(k * n + j, piv * n + j);
                }
                for j in 0..m {
                    b.data.swap(k * m + j, piv * m + j);
                }
            }
            let inv = ONE / a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] * inv;
                if f == ZERO {
                    continue;
                }
                a[(i, k)] = ZERO;
                for j in k + 1..n {
                    let t = a[(k, j)];
                    a[(i, j)] -= f * t;
                }
                for j in 0..m {
                    let t = b[(k, j)];
                    b[(i, j)] -= f * t;
                }
            }
        }
        for k in (0..n).rev() {
            let inv = ONE / a[(k, k)];
            for j in 0..m {
                let mut s = b[(k, j)];
                for l in k + 1..n {
                    s -= a[(k, l)] * b[(l, j)];
                }
                b[(k, j)] = s * inv;
            }
        }
        Ok(b)
    }

    /// Matrix exponential by scaling and squaring with a degree-13 Padé core.
    pub fn expm(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let norm = self.norm1();
        if !self.is_finite() || !norm.is_finite() {
            return Err(Error::ExpmNonConvergence {
                norm,
                scaling_depth: 0,
            });
        }
        if norm == 0.0 {
            return Ok(Self::identity(self.rows));
        }
        let s = if norm > THETA_13 {
            (norm / THETA_13).log2().ceil() as i64
        } else {
            0
        };
        if s > MAX_SCALING_DEPTH as i64 {
            return Err(Error::ExpmNonConvergence {
                norm,
                scaling_depth: s as u32,
            });
        }
        let s = s.max(0) as u32;
        let a = self.scale_re(0.5f64.powi(s as i32));
        let mut r = pade13(&a).map_err(|_| Error::ExpmNonConvergence {
            norm,
            scaling_depth: s,
        })?;
        for _ in 0..s {
            r = &r * &r;
        }
        if !r.is_finite() {
            return Err(Error::ExpmNonConvergence {
                norm,
                scaling_depth: s,
            });
        }
        Ok(r)
    }

    /// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
    /// rotations. Eigenvalues are returned in ascending order with the
    /// matching eigenvectors as columns of the second matrix.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, CMatrix)> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if !self.is_finite() {
            return Err(Error::NonFinite { what: "matrix" });
        }
        let n = self.rows;
        // Hermitian part only; callers check Hermiticity separately.
        let mut a = CMatrix::from_fn(n, n, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5);
        let mut v = CMatrix::identity(n);
        let scale = a.frobenius().max(f64::MIN_POSITIVE);
        for _sweep in 0..100 {
            let mut off = 0.0;
            for p in 0..n {
                for q in p + 1..n {
                    off += a[(p, q)].norm_sqr();
                }
            }
            if off.sqrt() <= 1e-17 * scale {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    let g = apq.norm();
                    if g <= 1e-300 {
                        continue;
                    }
                    let phase = apq / g;
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let theta = (aqq - app) / (2.0 * g);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    // U = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) block.
                    let u00 = Complex64::new(c, 0.0);
                    let u01 = Complex64::new(s, 0.0);
                    let u10 = -phase.conj() * s;
                    let u11 = phase.conj() * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp * u00 + akq * u10;
                        a[(k, q)] = akp * u01 + akq * u11;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = u00.conj() * apk + u10.conj() * aqk;
                        a[(q, k)] = u01.conj() * apk + u11.conj() * aqk;
                    }
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * u00 + vkq * u10;
                        v[(k, q)] = vkp * u01 + vkq * u11;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
        let values = order.iter().map(|&i| a[(i, i)].re).collect();
        let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
        Ok((values, vectors))
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }
}

const THETA_13: f64 = 5.371920351148152;
const MAX_SCALING_DEPTH: u32 = 200;
const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn pade13(a: &CMatrix) -> Result<CMatrix> {
    let b = &PADE_13;
    let n = a.rows;
    let id = CMatrix::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &(&a6.scale_re(b[13]) + &a4.scale_re(b[11])) + &a2.scale_re(b[9]);
    let u = &(&(&a6 * &inner_u) + &a6.scale_re(b[7]))
        + &(&(&a4.scale_re(b[5]) + &a2.scale_re(b[3])) + &id.scale_re(b[1]));
    let u = a * &u;
    let inner_v = &(&a6.scale_re(b[12]) + &a4.scale_re(b[10])) + &a2.scale_re(b[8]);
    let v = &(&(&a6 * &inner_v) + &a6.scale_re(b[6]))
        + &(&(&a4.scale_re(b[4]) + &a2.scale_re(b[2])) + &id.scale_re(b[0]));
    (&v - &u).solve(&(&v + &u))
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let (n, m, p) = (self.rows, self.cols, rhs.cols);
        let mut out = CMatrix::zeros(n, p);
        for i in 0..n {
            for k in 0..m {
                let aik = self.data[i * m + k];
                if aik == ZERO {
                    continue;
                }
                let row = &rhs.data[k * p..(k + 1) * p];
                let dst = &mut out.data[i * p..(i + 1) * p];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += aik * b;
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale_re(-1.0)
    }
}

/// Pairwise (cascade) summation; keeps the reduction order fixed.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n if n <= 8 => values.iter().sum(),
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Residual of the least-squares problem `min_x ||A x + c||` for a real
/// symmetric `A`, computed by projecting `c` onto the numerical null space
/// of `A`.
pub fn symmetric_lstsq_residual(a: &CMatrix, c: &[f64]) -> Result<f64> {
    let (values, vectors) = a.hermitian_eigen()?;
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let mut resid = 0.0;
    for (k, lambda) in values.iter().enumerate() {
        if lambda.abs() <= 1e-10 * scale {
            let proj: Complex64 = (0..c.len()).map(|i| vectors[(i, k)].conj() * c[i]).sum();
            resid += proj.norm_sqr();
        }
    }
    Ok(resid.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_matches_index_formula() {
        let a = CMatrix::from_rows([[c(1.0, 0.0), c(2.0, 1.0)], [c(0.0, -1.0), c(3.0, 0.0)]]);
        let b = CMatrix::from_real_rows([[0.0, 1.0], [1.0, 0.0]]);
        let k = a.kron(&b);
        assert_eq!(k[(0, 1)], a[(0, 0)] * b[(0, 1)]);
        assert_eq!(k[(3, 0)], a[(1, 0)] * b[(1, 0)]);
        assert_eq!(k[(2, 3)], a[(1, 1)] * b[(0, 1)]);
    }

    #[test]
    fn expm_of_zero_is_identity_exactly() {
        let z = CMatrix::zeros(4, 4);
        assert_eq!(z.expm().unwrap(), CMatrix::identity(4));
    }

    #[test]
    fn expm_of_rotation_generator() {
        // exp(-i t sigma_x) = cos t I - i sin t sigma_x
        for &t in &[0.1, 1.0, 7.5, 40.0] {
            let x = CMatrix::from_real_rows([[0.0, 1.0], [1.0, 0.0]]);
            let e = x.scale(c(0.0, -t)).expm().unwrap();
            assert_abs_diff_eq!(e[(0, 0)].re, t.cos(), epsilon = 1e-13);
            assert_abs_diff_eq!(e[(0, 1)].im, -t.sin(), epsilon = 1e-13);
            assert_abs_diff_eq!(e[(1, 0)].re, 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn expm_of_diagonal_and_nilpotent() {
        let d = CMatrix::diagonal(&[c(-3.0, 0.0), c(0.5, 2.0)]);
        let e = d.expm().unwrap();
        assert_abs_diff_eq!(e[(0, 0)].re, (-3.0f64).exp(), epsilon = 1e-15);
        let w = c(0.5, 2.0).exp();
        assert!((e[(1, 1)] - w).norm() < 1e-13);

        let n = CMatrix::from_real_rows([[0.0, 5.0], [0.0, 0.0]]);
        let e = n.expm().unwrap();
        assert!((e[(0, 1)] - c(5.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn expm_rejects_non_finite() {
        let m = CMatrix::from_real_rows([[f64::NAN, 0.0], [0.0, 0.0]]);
        assert!(matches!(m.expm(), Err(Error::ExpmNonConvergence { .. })));
    }

    #[test]
    fn solve_recovers_known_solution() {
        let a = CMatrix::from_rows([
            [c(2.0, 1.0), c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(1.0, -1.0)],
            [c(1.0, 0.0), c(3.0, 0.0), c(1.0, 0.0)],
        ]);
        let x = CMatrix::from_fn(3, 1, |i, _| c(i as f64, 1.0));
        let b = &a * &x;
        let got = a.solve(&b).unwrap();
        assert!(got.max_abs_diff(&x) < 1e-14);
        assert_eq!(
            CMatrix::zeros(2, 2).solve(&CMatrix::identity(2)),
            Err(Error::Singular)
        );
    }

    #[test]
    fn hermitian_eigen_reconstructs() {
        let h = CMatrix::from_rows([
            [c(2.0, 0.0), c(0.0, -1.0), c(0.5, 0.5)],
            [c(0.0, 1.0), c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.5, -0.5), c(0.0, 0.0), c(-1.0, 0.0)],
        ]);
        let (vals, vecs) = h.hermitian_eigen().unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let d = CMatrix::diagonal(&vals.iter().map(|&v| c(v, 0.0)).collect::<Vec<_>>());
        let rec = &(&vecs * &d) * &vecs.adjoint();
        assert!(rec.max_abs_diff(&h) < 1e-13);
        let gram = &vecs.adjoint() * &vecs;
        assert!(gram.max_abs_diff(&CMatrix::identity(3)) < 1e-13);
    }

    #[test]
    fn hermitian_eigen_handles_degenerate_spectrum() {
        let (vals, _) = CMatrix::identity(4).hermitian_eigen().unwrap();
        assert_eq!(vals, vec![1.0; 4]);
        let (vals, _) = CMatrix::zeros(3, 3).hermitian_eigen().unwrap();
        assert_eq!(vals, vec![0.0; 3]);
    }

    #[test]
    fn pairwise_sum_is_exact_on_small_integers() {
        let v: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 5050.0);
    }

    #[test]
    fn lstsq_residual_of_projector_map() {
        // A = diag(1, 0): residual is the component of c along e_2.
        let a = CMatrix::from_real_rows([[1.0, 0.0], [0.0, 0.0]]);
        assert_abs_diff_eq!(
            symmetric_lstsq_residual(&a, &[3.0, -4.0]).unwrap(),
            4.0,
            epsilon = 1e-14
        );
    }
}
