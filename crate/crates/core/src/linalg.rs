//! Dense complex-matrix substrate.
//!
//! Everything above this module is written in terms of [`CMatrix`] and the
//! handful of free functions here: the Hermitian eigensolver [`herm_eig`],
//! the generator exponential [`mat_exp_herm_generator`], [`kron`],
//! [`partial_trace`] and [`frobenius_dist`].

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
#[allow(unused_imports)] // Float is shadowed by inherent methods when std is linked
use num_traits::{Float, Zero};

use crate::{Error, Result};

/// Largest row or column count a matrix may have.
pub const MAX_DIM: usize = 4096;

/// Sweep budget for the cyclic Jacobi eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Off-diagonal Frobenius threshold, relative to the input norm, at which
/// the Jacobi iteration stops.
pub const JACOBI_OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Relative tolerance used by [`is_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// Builds a matrix from row-major data, checking shape, the dimension cap
    /// and finiteness of every entry.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dims(rows, cols)?;
        if data.len() != rows * cols {
            return Err(Error::BadShape {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Real-valued row-major data.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// # Panics
    ///
    /// If either dimension is zero or exceeds [`MAX_DIM`].
    pub fn zeros(rows: usize, cols: usize) -> Self {
        if let Err(e) = check_dims(rows, cols) {
            panic!("{e}");
        }
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = Complex64::new(d, 0.0);
        }
        m
    }

    /// The rank-one operator `|u><v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// Orthogonal projector onto the given computational basis indices.
    pub fn basis_projector(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut m = Self::zeros(n, n);
        for i in indices {
            m.data[i * n + i] = ONE;
        }
        m
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

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    /// Real parts of the diagonal.
    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols))
            .map(|i| self.data[i * self.cols + i].re)
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols))
            .map(|i| self.data[i * self.cols + i])
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖A − A†‖_F`, or infinity for a non-square matrix.
    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `‖U†U − I‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&(&self.adjoint() * self) - &Self::identity(self.rows)).frobenius_norm()
    }

    /// Hermitian part `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(0.5)
    }

    /// `U A U†`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        &(u * self) * &u.adjoint()
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &CMatrix) -> Self {
        &(self * other) - &(other * self)
    }

    /// Matrix-vector product.
    ///
    /// # Panics
    ///
    /// If `v.len() != self.cols()`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols, "vector length does not match matrix");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn square_dim(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

fn check_dims(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::BadShape {
            expected: 1,
            found: 0,
        });
    }
    if rows > MAX_DIM {
        return Err(Error::DimensionTooLarge(rows));
    }
    if cols > MAX_DIM {
        return Err(Error::DimensionTooLarge(cols));
    }
    Ok(())
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
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "matrix sum dimension mismatch"
        );
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
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "matrix difference dimension mismatch"
        );
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            f.write_str("  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            f.write_str("\n")?;
        }
        f.write_str("]")
    }
}

/// `true` iff `‖a − a†‖_F ≤ 1e-10 · max(1, ‖a‖_F)`.
pub fn is_hermitian(a: &CMatrix) -> bool {
    a.is_square() && a.hermiticity_residual() <= HERMITIAN_TOL * a.frobenius_norm().max(1.0)
}

fn require_hermitian(a: &CMatrix) -> Result<usize> {
    let n = a.square_dim()?;
    let residual = a.hermiticity_residual();
    if residual > HERMITIAN_TOL * a.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(n)
}

/// Eigendecomposition of a Hermitian matrix, `A = V diag(λ) V†`.
#[derive(Clone, Debug)]
pub struct HermEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix,
}

impl HermEigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V diag(f(λ)) V†`.
    pub fn map(&self, mut f: impl FnMut(f64) -> Complex64) -> CMatrix {
        let n = self.dim();
        let weights: Vec<Complex64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        CMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * weights[k] * v[(j, k)].conj())
                .sum()
        })
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map(|l| Complex64::new(l, 0.0))
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
///
/// Eigenvalues come back ascending; ties keep the solver's diagonal order.
pub fn herm_eig(a: &CMatrix) -> Result<HermEigen> {
    let n = require_hermitian(a)?;
    // Work on the exact Hermitian part so the rotations see a symmetric input.
    let mut m = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    let threshold = JACOBI_OFF_DIAGONAL_TOL * a.frobenius_norm();

    let mut converged = false;
    for _ in 0..=JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&m) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                jacobi_rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermEigen { values, vectors })
}

fn off_diagonal_norm(m: &CMatrix) -> f64 {
    let n = m.rows;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Annihilates `m[(p, q)]` with `m ← W† m W`, `v ← v W`, where
/// `W = diag(1, e^{-iφ}) · R(θ)` on the `(p, q)` plane.
fn jacobi_rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let phase = apq / g;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.is_infinite() {
        0.0
    } else {
        let t = 1.0 / (theta.abs() + (theta * theta + 1.0).sqrt());
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let w_pp = Complex64::new(c, 0.0);
    let w_pq = Complex64::new(s, 0.0);
    let w_qp = -phase.conj() * s;
    let w_qq = phase.conj() * c;

    let n = m.rows;
    // m ← m W (columns p, q)
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * w_pp + mkq * w_qp;
        m[(k, q)] = mkp * w_pq + mkq * w_qq;
    }
    // m ← W† m (rows p, q)
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = w_pp.conj() * mpk + w_qp.conj() * mqk;
        m[(q, k)] = w_pq.conj() * mpk + w_qq.conj() * mqk;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = Complex64::new(app - t * g, 0.0);
    m[(q, q)] = Complex64::new(aqq + t * g, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * w_pp + vkq * w_qp;
        v[(k, q)] = vkp * w_pq + vkq * w_qq;
    }
}

/// `exp(−i t H / ħ)` computed in the eigenbasis of the generator.
pub fn mat_exp_herm_generator(h: &CMatrix, t: f64, hbar: f64) -> Result<CMatrix> {
    let eig = herm_eig(h)?;
    Ok(eig.map(|l| {
        let phi = -t * l / hbar;
        Complex64::new(phi.cos(), phi.sin())
    }))
}

/// Standard Kronecker product `a ⊗ b`.
///
/// # Panics
///
/// If a resulting dimension exceeds [`MAX_DIM`].
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = CMatrix::zeros(rows, cols);
    for ia in 0..a.rows {
        for ja in 0..a.cols {
            let x = a[(ia, ja)];
            if x.is_zero() {
                continue;
            }
            for ib in 0..b.rows {
                for jb in 0..b.cols {
                    out.data[(ia * b.rows + ib) * cols + ja * b.cols + jb] = x * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// Which factor of a bipartite space a partial trace removes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Traces `over` out of an operator on `A ⊗ B` (A is the slow index).
pub fn partial_trace(ab: &CMatrix, dim_a: usize, dim_b: usize, over: Subsystem) -> Result<CMatrix> {
    let n = ab.square_dim()?;
    if dim_a == 0 || dim_b == 0 || dim_a * dim_b != n {
        return Err(Error::DimensionMismatch {
            expected: dim_a * dim_b,
            found: n,
        });
    }
    Ok(match over {
        Subsystem::B => CMatrix::from_fn(dim_a, dim_a, |i, j| {
            (0..dim_b).map(|k| ab[(i * dim_b + k, j * dim_b + k)]).sum()
        }),
        Subsystem::A => CMatrix::from_fn(dim_b, dim_b, |i, j| {
            (0..dim_a).map(|k| ab[(k * dim_b + i, k * dim_b + j)]).sum()
        }),
    })
}

/// `‖a − b‖_F`.
pub fn frobenius_dist(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.rows != b.rows {
        return Err(Error::DimensionMismatch {
            expected: a.rows,
            found: b.rows,
        });
    }
    if a.cols != b.cols {
        return Err(Error::DimensionMismatch {
            expected: a.cols,
            found: b.cols,
        });
    }
    Ok(a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `<u|v>`.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}
