//! Measurement systems as Kraus families `{M^m}` with scale values `f(m)`.
//!
//! Only definitive systems (`Σ_m M^m† M^m = I`) describe every object
//! operator with the same family; those are the ones that admit an
//! [`Observable`]. A family derived from an explicit interaction model is
//! available through [`MeasurementSystem::from_interaction`].

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::condensation::CondensationStructure;
use crate::dynamics::UnitaryOp;
use crate::iop::InfoOperator;
use crate::linalg::{self, CMatrix};
use crate::random;
use crate::{Error, Result};

/// Bound on `‖Σ M†M − I‖_F` for a definitive system.
pub const COMPLETENESS_TOL: f64 = 1e-9;

/// Outcomes at or below this probability cannot be conditioned on.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSystem {
    labels: Vec<String>,
    kraus: Vec<CMatrix>,
    values: Vec<f64>,
}

impl MeasurementSystem {
    /// `values[i]` is the scale value `f(labels[i])`.
    pub fn new(labels: Vec<String>, kraus: Vec<CMatrix>, values: Vec<f64>) -> Result<Self> {
        if labels.is_empty() || labels.len() != kraus.len() || labels.len() != values.len() {
            return Err(Error::InvalidMeasurement(format!(
                "{} labels, {} Kraus operators, {} scale values",
                labels.len(),
                kraus.len(),
                values.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidMeasurement(format!("duplicate label `{l}`")));
            }
        }
        let n = kraus[0].rows();
        for k in &kraus {
            if !k.is_square() {
                return Err(Error::NotSquare {
                    rows: k.rows(),
                    cols: k.cols(),
                });
            }
            if k.rows() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: k.rows(),
                });
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMeasurement(String::from("non-finite scale value")));
        }
        Ok(Self {
            labels,
            kraus,
            values,
        })
    }

    /// Projective measurement onto the subspaces of a condensation structure.
    pub fn projective(c: &CondensationStructure, values: Vec<f64>) -> Result<Self> {
        Self::new(c.labels().to_vec(), c.projectors().to_vec(), values)
    }

    /// Kraus family induced on `S` by an interaction `u` on `S ⊗ T` with the
    /// apparatus prepared in `ready`: `M^m = (I ⊗ <e_m|) U (I ⊗ |ready>)`,
    /// where `e_m` spans the rank-one subspace `m` of `t_structure`.
    ///
    /// Then `tr_T[(I⊗P^m) U (ρ ⊗ |ready><ready|) U† (I⊗P^m)] = M^m ρ M^m†`.
    pub fn from_interaction(
        u: &UnitaryOp,
        dim_s: usize,
        t_structure: &CondensationStructure,
        ready: &[Complex64],
        values: Vec<f64>,
    ) -> Result<Self> {
        let dt = t_structure.dim();
        if ready.len() != dt {
            return Err(Error::DimensionMismatch {
                expected: dt,
                found: ready.len(),
            });
        }
        if u.dim() != dim_s * dt {
            return Err(Error::DimensionMismatch {
                expected: dim_s * dt,
                found: u.dim(),
            });
        }
        let norm = linalg::vec_norm(ready);
        if norm < 1e-12 {
            return Err(Error::ZeroVector);
        }
        let ready: Vec<Complex64> = ready.iter().map(|z| z / norm).collect();
        let mut kraus = Vec::with_capacity(t_structure.len());
        for (label, p) in t_structure.labels().iter().zip(t_structure.projectors()) {
            let rank = p.trace().re;
            if (rank - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidMeasurement(format!(
                    "apparatus subspace `{label}` has rank {rank}, expected 1"
                )));
            }
            let e = rank_one_basis_vector(p);
            let um = u.matrix();
            let m = CMatrix::from_fn(dim_s, dim_s, |i, j| {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..dt {
                    for b in 0..dt {
                        acc += e[a].conj() * um[(i * dt + a, j * dt + b)] * ready[b];
                    }
                }
                acc
            });
            kraus.push(m);
        }
        Self::new(t_structure.labels().to_vec(), kraus, values)
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].rows()
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

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(String::from(label)))
    }

    /// `‖Σ_m M^m† M^m − I‖_F`.
    pub fn completeness_residual(&self) -> f64 {
        let n = self.dim();
        let mut acc = CMatrix::zeros(n, n);
        for k in &self.kraus {
            acc = &acc + &(&k.adjoint() * k);
        }
        linalg::frobenius_dist(&acc, &CMatrix::identity(n)).unwrap_or(f64::INFINITY)
    }

    pub fn is_definitive(&self) -> bool {
        is_definitive(self)
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

    fn require_definitive(&self) -> Result<()> {
        let residual = self.completeness_residual();
        if residual > COMPLETENESS_TOL {
            return Err(Error::NotDefinitive { residual });
        }
        Ok(())
    }
}

fn rank_one_basis_vector(p: &CMatrix) -> Vec<Complex64> {
    let diag = p.diagonal_real();
    let j = (0..diag.len())
        .max_by(|&a, &b| diag[a].total_cmp(&diag[b]))
        .unwrap_or(0);
    let col = p.column(j);
    let norm = linalg::vec_norm(&col);
    col.into_iter().map(|z| z / norm).collect()
}

pub fn is_definitive(ms: &MeasurementSystem) -> bool {
    ms.completeness_residual() <= COMPLETENESS_TOL
}

/// `p^m = tr{M^m ρ M^m†}` for every label.
pub fn outcome_probabilities(ms: &MeasurementSystem, rho: &InfoOperator) -> Result<Vec<(String, f64)>> {
    ms.check_dim(rho.dim())?;
    Ok(ms
        .labels
        .iter()
        .zip(&ms.kraus)
        .map(|(l, k)| (l.clone(), rho.matrix().conjugate_by(k).trace().re))
        .collect())
}

/// `M^m ρ M^m† / p^m`.
pub fn post_measurement_object(ms: &MeasurementSystem, rho: &InfoOperator, m: &str) -> Result<InfoOperator> {
    ms.check_dim(rho.dim())?;
    let k = &ms.kraus[ms.index_of(m)?];
    let out = rho.matrix().conjugate_by(k);
    let p = out.trace().re;
    if p <= MIN_OUTCOME_PROBABILITY {
        return Err(Error::ZeroProbabilityOutcome(String::from(m)));
    }
    InfoOperator::validate(&out.scale_real(1.0 / p))
}

/// `Σ_m M^m ρ M^m†`.
pub fn remix(ms: &MeasurementSystem, rho: &InfoOperator) -> Result<CMatrix> {
    ms.check_dim(rho.dim())?;
    let n = ms.dim();
    let mut acc = CMatrix::zeros(n, n);
    for k in &ms.kraus {
        acc = &acc + &rho.matrix().conjugate_by(k);
    }
    Ok(acc)
}

/// `F = Σ_m f(m) M^m† M^m` built from a definitive system.
#[derive(Clone, Debug)]
pub struct Observable {
    matrix: CMatrix,
    source: MeasurementSystem,
}

impl Observable {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// The measurement system (Kraus family and scale values) it came from.
    pub fn source(&self) -> &MeasurementSystem {
        &self.source
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

pub fn observable(ms: &MeasurementSystem) -> Result<Observable> {
    ms.require_definitive()?;
    let n = ms.dim();
    let mut f = CMatrix::zeros(n, n);
    for (k, &v) in ms.kraus.iter().zip(&ms.values) {
        f = &f + &(&k.adjoint() * k).scale_real(v);
    }
    Ok(Observable {
        matrix: f.hermitian_part(),
        source: ms.clone(),
    })
}

/// `tr{F ρ}`.
pub fn expectation(obs: &Observable, rho: &InfoOperator) -> Result<f64> {
    if obs.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: obs.dim(),
            found: rho.dim(),
        });
    }
    Ok((obs.matrix() * rho.matrix()).trace().re)
}

/// `|estimate − exact|` in units of the binomial standard error
/// `√(p(1−p)/n)`. Differences below `1e-12` count as zero, so a certain
/// outcome reproduced exactly scores 0 rather than `0/0`.
pub fn standard_errors(estimate: f64, exact: f64, n: usize) -> f64 {
    let p = exact.clamp(0.0, 1.0);
    let dev = (estimate - p).abs();
    if dev <= 1e-12 {
        return 0.0;
    }
    let sigma = (p * (1.0 - p) / n as f64).sqrt();
    if sigma > 0.0 {
        dev / sigma
    } else {
        f64::INFINITY
    }
}

/// Empirical outcome frequencies from `n` independent draws, reproducible
/// from `seed` (stream 0 of [`random::Rng64`]).
pub fn estimate_probabilities(
    ms: &MeasurementSystem,
    rho: &InfoOperator,
    n: usize,
    seed: u64,
) -> Result<Vec<(String, f64)>> {
    estimate_probabilities_with(ms, rho, n, &mut random::stream(seed, 0))
}

pub fn estimate_probabilities_with<R: Rng + ?Sized>(
    ms: &MeasurementSystem,
    rho: &InfoOperator,
    n: usize,
    rng: &mut R,
) -> Result<Vec<(String, f64)>> {
    ms.require_definitive()?;
    if n == 0 {
        return Err(Error::BadParameter(String::from("sample count must be positive")));
    }
    let probs = outcome_probabilities(ms, rho)?;
    let weights: Vec<f64> = probs.iter().map(|(_, p)| p.max(0.0)).collect();
    let dist = WeightedIndex::new(&weights)
        .map_err(|e| Error::InvalidMeasurement(format!("outcome weights: {e}")))?;
    let mut counts = vec![0usize; weights.len()];
    for _ in 0..n {
        counts[dist.sample(rng)] += 1;
    }
    Ok(probs
        .into_iter()
        .zip(counts)
        .map(|((l, _), c)| (l, c as f64 / n as f64))
        .collect())
}
