//! Condensation structures: labelled, mutually orthogonal projector
//! families resolving the identity over a time period.
//!
//! A structure is declared extensionally. [`respects_condensation`] tests
//! whether a unitary keeps every subspace invariant, which is exactly the
//! condition under which [`label_probabilities`] cannot change, and
//! [`finest_respected`] merges a candidate partition until it is respected.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dynamics::UnitaryOp;
use crate::iop::InfoOperator;
use crate::linalg::{self, CMatrix};
use crate::{Error, Result};

/// Tolerance on idempotence, Hermiticity, orthogonality and completeness.
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Tolerance for [`is_condensed_form`] and [`respects_condensation`].
pub const BLOCK_TOL: f64 = 1e-9;

/// Labels whose probability is at or below this cannot be conditioned on.
pub const MIN_LABEL_PROBABILITY: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct CondensationStructure {
    labels: Vec<String>,
    projectors: Vec<CMatrix>,
    period: (f64, f64),
}

impl CondensationStructure {
    pub fn new(labels: Vec<String>, projectors: Vec<CMatrix>, period: (f64, f64)) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidStructure(msg));
        if labels.is_empty() || labels.len() != projectors.len() {
            return invalid(format!(
                "{} labels for {} projectors",
                labels.len(),
                projectors.len()
            ));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return invalid(format!("duplicate label `{l}`"));
            }
        }
        if !(period.0 < period.1) {
            return invalid(format!("period ({}, {}) is empty", period.0, period.1));
        }
        let n = projectors[0].rows();
        let mut sum = CMatrix::zeros(n, n);
        for (l, p) in labels.iter().zip(&projectors) {
            if !p.is_square() || p.rows() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.rows(),
                });
            }
            if p.hermiticity_residual() > STRUCTURE_TOL {
                return invalid(format!("projector `{l}` is not Hermitian"));
            }
            if linalg::frobenius_dist(&(p * p), p)? > STRUCTURE_TOL {
                return invalid(format!("projector `{l}` is not idempotent"));
            }
            sum = &sum + p;
        }
        for i in 0..projectors.len() {
            for j in i + 1..projectors.len() {
                if (&projectors[i] * &projectors[j]).frobenius_norm() > STRUCTURE_TOL {
                    return invalid(format!(
                        "projectors `{}` and `{}` overlap",
                        labels[i], labels[j]
                    ));
                }
            }
        }
        if linalg::frobenius_dist(&sum, &CMatrix::identity(n))? > STRUCTURE_TOL {
            return invalid(String::from("projectors do not resolve the identity"));
        }
        Ok(Self {
            labels,
            projectors,
            period,
        })
    }

    /// Structure whose subspaces are consecutive runs of basis vectors.
    pub fn from_blocks<S: Into<String>>(
        blocks: impl IntoIterator<Item = (S, usize)>,
        period: (f64, f64),
    ) -> Result<Self> {
        let blocks: Vec<(String, usize)> = blocks.into_iter().map(|(l, n)| (l.into(), n)).collect();
        let n: usize = blocks.iter().map(|(_, k)| k).sum();
        if n == 0 {
            return Err(Error::InvalidStructure(String::from("no basis vectors")));
        }
        let mut offset = 0;
        let mut labels = Vec::with_capacity(blocks.len());
        let mut projectors = Vec::with_capacity(blocks.len());
        for (l, k) in blocks {
            labels.push(l);
            projectors.push(CMatrix::basis_projector(n, offset..offset + k));
            offset += k;
        }
        Self::new(labels, projectors, period)
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].rows()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    pub fn period(&self) -> (f64, f64) {
        self.period
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(String::from(label)))
    }

    pub fn projector(&self, label: &str) -> Result<&CMatrix> {
        Ok(&self.projectors[self.index_of(label)?])
    }

    /// The same structure acting on the second factor of `S ⊗ T`:
    /// projectors `I_S ⊗ P^m`.
    pub fn lift_to_composite(&self, dim_s: usize) -> Self {
        let id = CMatrix::identity(dim_s);
        Self {
            labels: self.labels.clone(),
            projectors: self.projectors.iter().map(|p| linalg::kron(&id, p)).collect(),
            period: self.period,
        }
    }

    /// `Σ_m P^m ρ P^m`: removes every coherence between subspaces.
    pub fn condense(&self, rho: &InfoOperator) -> Result<InfoOperator> {
        self.check_dim(rho.dim())?;
        let n = self.dim();
        let mut acc = CMatrix::zeros(n, n);
        for p in &self.projectors {
            acc = &acc + &rho.matrix().conjugate_by(p);
        }
        InfoOperator::validate(&acc)
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found,
            });
        }
        Ok(())
    }
}

/// `p^m = tr{P^m ρ P^m}` for every label, in structure order.
pub fn label_probabilities(rho: &InfoOperator, c: &CondensationStructure) -> Result<Vec<(String, f64)>> {
    c.check_dim(rho.dim())?;
    Ok(c.labels
        .iter()
        .zip(&c.projectors)
        .map(|(l, p)| (l.clone(), rho.matrix().conjugate_by(p).trace().re))
        .collect())
}

/// `P^m ρ P^m / tr{P^m ρ P^m}`.
pub fn condition_on_label(rho: &InfoOperator, c: &CondensationStructure, m: &str) -> Result<InfoOperator> {
    c.check_dim(rho.dim())?;
    let p = c.projector(m)?;
    let block = rho.matrix().conjugate_by(p);
    let w = block.trace().re;
    if w <= MIN_LABEL_PROBABILITY {
        return Err(Error::ZeroProbabilityLabel(String::from(m)));
    }
    InfoOperator::validate(&block.scale_real(1.0 / w))
}

/// `‖ρ − Σ_m P^m ρ P^m‖_F`.
pub fn condensation_residual(rho: &InfoOperator, c: &CondensationStructure) -> Result<f64> {
    c.check_dim(rho.dim())?;
    let n = c.dim();
    let mut acc = CMatrix::zeros(n, n);
    for p in &c.projectors {
        acc = &acc + &rho.matrix().conjugate_by(p);
    }
    linalg::frobenius_dist(rho.matrix(), &acc)
}

/// No coherences between distinct subspaces, within [`BLOCK_TOL`].
pub fn is_condensed_form(rho: &InfoOperator, c: &CondensationStructure) -> Result<bool> {
    Ok(condensation_residual(rho, c)? <= BLOCK_TOL)
}

/// Largest `‖P^m U P^n‖_F` over `m ≠ n`.
pub fn leakage(u: &UnitaryOp, c: &CondensationStructure) -> Result<f64> {
    c.check_dim(u.dim())?;
    let mut worst = 0.0f64;
    for (i, pm) in c.projectors.iter().enumerate() {
        let left = pm * u.matrix();
        for (j, pn) in c.projectors.iter().enumerate() {
            if i != j {
                worst = worst.max((&left * pn).frobenius_norm());
            }
        }
    }
    Ok(worst)
}

/// `U` is block diagonal with respect to the structure.
pub fn respects_condensation(u: &UnitaryOp, c: &CondensationStructure) -> Result<bool> {
    Ok(leakage(u, c)? <= BLOCK_TOL)
}

/// Coarsest merging of `candidate` that `u` respects: subspaces `m`, `n`
/// end up together when connected through links with
/// `‖P^m U P^n‖_F > threshold` in either direction. Merged labels are joined
/// with `+`.
pub fn finest_respected(
    u: &UnitaryOp,
    candidate: &CondensationStructure,
    threshold: f64,
) -> Result<CondensationStructure> {
    candidate.check_dim(u.dim())?;
    let k = candidate.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..k {
        let left = &candidate.projectors[i] * u.matrix();
        for j in 0..k {
            if i != j && (&left * &candidate.projectors[j]).frobenius_norm() > threshold {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let n = candidate.dim();
    let mut labels: Vec<String> = Vec::new();
    let mut projectors: Vec<CMatrix> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..k {
        let r = root(&mut parent, i);
        match roots.iter().position(|&x| x == r) {
            Some(slot) => {
                labels[slot].push('+');
                labels[slot].push_str(&candidate.labels[i]);
                projectors[slot] = &projectors[slot] + &candidate.projectors[i];
            }
            None => {
                roots.push(r);
                labels.push(candidate.labels[i].clone());
                projectors.push(candidate.projectors[i].clone());
            }
        }
    }
    debug_assert!(projectors.iter().all(|p| p.rows() == n));
    CondensationStructure::new(labels, projectors, candidate.period)
}
