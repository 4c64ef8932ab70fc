//! Information operators: validation, entropy, expansion/contraction and
//! probabilistic decomposition.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::linalg::{self, CMatrix, HermEigen};
use crate::{Error, Result};

/// Absolute tolerance on `‖ρ − ρ†‖_F` and `|tr ρ − 1|`.
pub const VALIDATION_TOL: f64 = 1e-10;

/// Eigenvalues in `[-POSITIVITY_TOL, 0)` are clamped to zero.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// `|tr ρ² − 1|` bound for [`InfoOperator::is_pure`].
pub const PURITY_TOL: f64 = 1e-9;

/// Eigenvalues at or below this count as zero when comparing supports.
pub const SUPPORT_EIGEN_TOL: f64 = 1e-10;

/// Largest admissible distance of a part eigenvector from the whole's support.
pub const SUPPORT_RESIDUAL_TOL: f64 = 1e-8;

/// A Hermitian, unit-trace, positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct InfoOperator {
    matrix: CMatrix,
}

impl InfoOperator {
    /// Checks the defining conditions and returns the validated operator.
    ///
    /// The stored matrix is the exact Hermitian part of `m`. Eigenvalues in
    /// `[-1e-10, 0)` are clamped to zero and the trace renormalised.
    pub fn validate(m: &CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let residual = m.hermiticity_residual();
        if residual > VALIDATION_TOL {
            return Err(Error::NotHermitian { residual });
        }
        let trace = m.trace().re;
        if (trace - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        let h = m.hermitian_part();
        let eig = linalg::herm_eig(&h)?;
        let min = eig.values[0];
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        if min < 0.0 {
            let clamped = eig.map(|l| Complex64::new(l.max(0.0), 0.0));
            let t = clamped.trace().re;
            return Ok(Self {
                matrix: clamped.scale_real(1.0 / t).hermitian_part(),
            });
        }
        Ok(Self { matrix: h })
    }

    /// `|ψ><ψ|` for a vector normalised here.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = linalg::vec_norm(psi);
        if norm < 1e-12 {
            return Err(Error::ZeroVector);
        }
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self::from_trusted(CMatrix::outer(&v, &v)))
    }

    /// Wraps a matrix already known to satisfy the invariants, taking its
    /// Hermitian part.
    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        debug_assert!(m.is_square());
        Self {
            matrix: m.hermitian_part(),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn eigen(&self) -> HermEigen {
        linalg::herm_eig(&self.matrix).expect("stored matrix is Hermitian")
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        // tr(ρ ρ) = Σ |ρ_ij|² for Hermitian ρ.
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_pure(&self) -> bool {
        is_pure(self)
    }

    pub fn entropy(&self) -> f64 {
        entropy(self)
    }

    /// Frobenius distance to another operator of the same dimension.
    pub fn distance(&self, other: &InfoOperator) -> Result<f64> {
        linalg::frobenius_dist(&self.matrix, &other.matrix)
    }
}

/// `(1/d) I`.
///
/// # Panics
///
/// If `d == 0`.
pub fn max_iop(d: usize) -> InfoOperator {
    assert!(d >= 1, "dimension must be positive");
    InfoOperator {
        matrix: CMatrix::identity(d).scale_real(1.0 / d as f64),
    }
}

/// `-tr(ρ log ρ)` with `0 log 0 = 0`.
pub fn entropy(rho: &InfoOperator) -> f64 {
    let s: f64 = rho
        .eigen()
        .values
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum();
    s.max(0.0)
}

pub fn is_pure(rho: &InfoOperator) -> bool {
    (rho.purity() - 1.0).abs() <= PURITY_TOL
}

/// A contracting operator `K` taking `ρ₁` to `K ρ₁ K†`.
#[derive(Clone, Debug, PartialEq)]
pub struct Contraction {
    k: CMatrix,
}

impl Contraction {
    pub fn new(k: CMatrix) -> Self {
        Self { k }
    }

    pub fn operator(&self) -> &CMatrix {
        &self.k
    }

    pub fn source_dim(&self) -> usize {
        self.k.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.k.rows()
    }

    pub fn apply(&self, rho: &InfoOperator) -> Result<InfoOperator> {
        contract(rho, self)
    }
}

/// `K ρ K†`, validated.
pub fn contract(rho: &InfoOperator, k: &Contraction) -> Result<InfoOperator> {
    if k.source_dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.source_dim(),
            found: rho.dim(),
        });
    }
    let out = rho.matrix.conjugate_by(&k.k);
    InfoOperator::validate(&out).map_err(|e| Error::ResultNotIOperator(Box::new(e)))
}

/// `K = V diag(√(λ_i d)) V†` in the eigenbasis of `target`, so that
/// `K (I/d) K† = target`.
pub fn contraction_from_max(target: &InfoOperator) -> Contraction {
    let d = target.dim() as f64;
    let eig = target.eigen();
    Contraction::new(eig.map(|l| Complex64::new((l.max(0.0) * d).sqrt(), 0.0)))
}

/// `K = Σ_i √a_i |part_i><whole_i|`, pairing both spectra in ascending order
/// with `a_i = λ_part(i) / λ_whole(i)` (zero where the whole's eigenvalue is).
///
/// Fails with [`Error::SupportViolation`] unless every eigenvector of `part`
/// with non-zero eigenvalue lies in the support of `whole`.
pub fn contraction_from_mixture(whole: &InfoOperator, part: &InfoOperator) -> Result<Contraction> {
    let n = whole.dim();
    if part.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: part.dim(),
        });
    }
    let ew = whole.eigen();
    let ep = part.eigen();

    let support: Vec<Vec<Complex64>> = (0..n)
        .filter(|&k| ew.values[k] > SUPPORT_EIGEN_TOL)
        .map(|k| ew.vector(k))
        .collect();
    let mut worst = 0.0f64;
    for k in (0..n).filter(|&k| ep.values[k] > SUPPORT_EIGEN_TOL) {
        let mut v = ep.vector(k);
        for w in &support {
            let c = linalg::inner(w, &v);
            for (vi, wi) in v.iter_mut().zip(w) {
                *vi -= c * wi;
            }
        }
        worst = worst.max(linalg::vec_norm(&v));
    }
    if worst > SUPPORT_RESIDUAL_TOL {
        return Err(Error::SupportViolation { residual: worst });
    }

    let mut k = CMatrix::zeros(n, n);
    for i in 0..n {
        let lw = ew.values[i];
        if lw <= SUPPORT_EIGEN_TOL {
            continue;
        }
        let a = ep.values[i].max(0.0) / lw;
        if a == 0.0 {
            continue;
        }
        let s = a.sqrt();
        for r in 0..n {
            for c in 0..n {
                k[(r, c)] += ep.vectors[(r, i)] * ew.vectors[(c, i)].conj() * s;
            }
        }
    }
    Ok(Contraction::new(k))
}

/// A convex combination `Σ p_i ρ_i` with strictly positive weights.
#[derive(Clone, Debug)]
pub struct Mixture {
    weights: Vec<f64>,
    components: Vec<InfoOperator>,
}

impl Mixture {
    pub fn new(weights: Vec<f64>, components: Vec<InfoOperator>) -> Result<Self> {
        if weights.is_empty() || weights.len() != components.len() {
            return Err(Error::InvalidMixture(format!(
                "{} weights for {} components",
                weights.len(),
                components.len()
            )));
        }
        if let Some(p) = weights.iter().find(|&&p| !(p > 0.0)) {
            return Err(Error::InvalidMixture(format!("weight {p} is not positive")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::InvalidMixture(format!("weights sum to {total}")));
        }
        let d = components[0].dim();
        if let Some(c) = components.iter().find(|c| c.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: c.dim(),
            });
        }
        Ok(Self {
            weights,
            components,
        })
    }

    /// From unnormalised parts `σ_i` with `ρ = Σ σ_i`: `p_i = tr σ_i`,
    /// `ρ_i = σ_i / p_i`.
    pub fn from_unnormalized(parts: &[CMatrix]) -> Result<Self> {
        let mut weights = Vec::with_capacity(parts.len());
        let mut components = Vec::with_capacity(parts.len());
        for s in parts {
            let p = s.trace().re;
            if !(p > 0.0) {
                return Err(Error::InvalidMixture(format!("part has trace {p}")));
            }
            weights.push(p);
            components.push(InfoOperator::validate(&s.scale_real(1.0 / p))?);
        }
        Self::new(weights, components)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[InfoOperator] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    /// `Σ p_i ρ_i`.
    pub fn total(&self) -> InfoOperator {
        let n = self.dim();
        let mut acc = CMatrix::zeros(n, n);
        for (p, c) in self.weights.iter().zip(&self.components) {
            acc = &acc + &c.matrix().scale_real(*p);
        }
        InfoOperator::from_trusted(acc)
    }
}

/// The `(p_i, ρ_i)` pairs: `ρ_i` describes the system with probability `p_i`.
pub fn decompose(rho: &Mixture) -> Vec<(f64, InfoOperator)> {
    rho.weights
        .iter()
        .copied()
        .zip(rho.components.iter().cloned())
        .collect()
}
