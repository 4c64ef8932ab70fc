//! Information vectors: unit vectors standing in for pure i-operators.
//!
//! The overall phase of a vector carries no information, so every
//! [`InfoVector`] is stored in a canonical gauge: the first component whose
//! magnitude exceeds [`GAUGE_THRESHOLD`] is real and positive.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dynamics::UnitaryOp;
use crate::iop::InfoOperator;
use crate::linalg::{self, CMatrix};
use crate::{Error, Result};

pub const GAUGE_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct InfoVector {
    amplitudes: Vec<Complex64>,
}

impl InfoVector {
    /// Normalises and gauge-fixes `amplitudes`.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = linalg::vec_norm(&amplitudes);
        if !(norm >= 1e-12) {
            return Err(Error::ZeroVector);
        }
        let mut amplitudes: Vec<Complex64> = amplitudes.into_iter().map(|z| z / norm).collect();
        if let Some(lead) = amplitudes.iter().find(|z| z.norm() > GAUGE_THRESHOLD) {
            let phase = lead.conj() / lead.norm();
            for z in amplitudes.iter_mut() {
                *z *= phase;
            }
        }
        Ok(Self { amplitudes })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = alloc::vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `U |ψ>`, re-gauged.
    pub fn evolve(&self, u: &UnitaryOp) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: u.dim(),
                found: self.dim(),
            });
        }
        Self::new(u.matrix().apply(&self.amplitudes))
    }

    /// `|<ψ|x>|²` for every basis index.
    pub fn intensities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }
}

/// `|ψ><ψ|`.
pub fn to_iop(v: &InfoVector) -> InfoOperator {
    InfoOperator::from_trusted(CMatrix::outer(&v.amplitudes, &v.amplitudes))
}

/// Gauge-fixed agent of a pure operator, read off its largest column.
pub fn from_iop(rho: &InfoOperator) -> Result<InfoVector> {
    if !rho.is_pure() {
        return Err(Error::NotPure {
            purity: rho.purity(),
        });
    }
    // For ρ = |ψ><ψ|, column j is ψ conj(ψ_j); the largest diagonal entry
    // gives the best-conditioned division.
    let diag = rho.matrix().diagonal_real();
    let j = (0..diag.len())
        .max_by(|&a, &b| diag[a].total_cmp(&diag[b]))
        .expect("non-empty operator");
    InfoVector::new(rho.matrix().column(j))
}

/// Normalised, gauge-fixed `Σ c_i v_i`.
pub fn superpose(terms: &[(Complex64, &InfoVector)]) -> Result<InfoVector> {
    let (_, first) = terms.first().ok_or(Error::ZeroVector)?;
    let n = first.dim();
    let mut acc = alloc::vec![Complex64::new(0.0, 0.0); n];
    for (c, v) in terms {
        if v.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.dim(),
            });
        }
        for (a, z) in acc.iter_mut().zip(&v.amplitudes) {
            *a += c * z;
        }
    }
    InfoVector::new(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::evolve;
    use crate::iop::max_iop;
    use crate::random;
    use proptest::prelude::*;

    #[test]
    fn basis_vector_operator() {
        let rho = to_iop(&InfoVector::basis(3, 0));
        assert_eq!(rho.matrix(), &CMatrix::from_real_diag(&[1.0, 0.0, 0.0]));
    }

    #[test]
    fn equal_superposition_operator() {
        let h = Complex64::new(0.5f64.sqrt(), 0.0);
        let v = superpose(&[(h, &InfoVector::basis(2, 0)), (h, &InfoVector::basis(2, 1))]).unwrap();
        let rho = to_iop(&v);
        for z in rho.matrix().as_slice() {
            assert!((z - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn global_phase_is_invisible() {
        let mut rng = random::seeded(41);
        let raw = random::unit_vector(&mut rng, 4);
        let phase = Complex64::from_polar(1.0, core::f64::consts::FRAC_PI_3);
        let v = InfoVector::new(raw.clone()).unwrap();
        let w = InfoVector::new(raw.iter().map(|z| z * phase).collect()).unwrap();
        assert!(linalg::frobenius_dist(to_iop(&v).matrix(), to_iop(&w).matrix()).unwrap() < 1e-12);
        let gauge_gap: f64 = v.amplitudes().iter().zip(w.amplitudes()).map(|(a, b)| (a - b).norm()).sum();
        assert!(gauge_gap < 1e-12);
    }

    #[test]
    fn from_iop_examples() {
        let rho = InfoOperator::validate(&CMatrix::from_real_diag(&[1.0, 0.0])).unwrap();
        assert_eq!(from_iop(&rho).unwrap(), InfoVector::basis(2, 0));
        assert!(matches!(from_iop(&max_iop(2)), Err(Error::NotPure { .. })));
    }

    #[test]
    fn superpose_examples() {
        let e1 = InfoVector::basis(3, 0);
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(superpose(&[(one, &e1)]).unwrap(), e1);
        assert!(matches!(superpose(&[(one, &e1), (-one, &e1)]), Err(Error::ZeroVector)));
        assert!(superpose(&[(one, &e1), (one, &InfoVector::basis(2, 0))]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn round_trip_through_operator(seed in any::<u64>(), n in 1usize..=8) {
            let mut rng = random::seeded(seed);
            let v = InfoVector::new(random::unit_vector(&mut rng, n)).unwrap();
            let back = from_iop(&to_iop(&v)).unwrap();
            let d: f64 = v.amplitudes().iter().zip(back.amplitudes()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            prop_assert!(d <= 1e-10);
        }

        #[test]
        fn vector_and_operator_evolution_agree(seed in any::<u64>(), n in 1usize..=8) {
            let mut rng = random::seeded(seed);
            let v = InfoVector::new(random::unit_vector(&mut rng, n)).unwrap();
            let u = UnitaryOp::new(random::unitary(&mut rng, n)).unwrap();
            let by_operator = evolve(&to_iop(&v), &u).unwrap();
            let by_vector = to_iop(&v.evolve(&u).unwrap());
            prop_assert!(by_operator.distance(&by_vector).unwrap() <= 1e-9);
        }
    }
}
