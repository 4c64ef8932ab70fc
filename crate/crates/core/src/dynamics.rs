//! Unitary time development of i-operators.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::iop::InfoOperator;
use crate::linalg::{self, CMatrix};
use crate::{Error, Result};

/// Reduced Planck constant in natural units.
pub const DEFAULT_HBAR: f64 = 1.0;

/// Bound on `‖U†U − I‖_F` for a [`UnitaryOp`].
pub const UNITARITY_TOL: f64 = 1e-9;

/// Hermitian generator of time development.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianOp {
    matrix: CMatrix,
}

impl HamiltonianOp {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        if !linalg::is_hermitian(&matrix) {
            return Err(Error::NotHermitian {
                residual: matrix.hermiticity_residual(),
            });
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryOp {
    matrix: CMatrix,
}

impl UnitaryOp {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let residual = matrix.unitarity_residual();
        if residual > UNITARITY_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: CMatrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `self · other`, i.e. `other` acts first.
    pub fn then_after(&self, other: &UnitaryOp) -> Self {
        Self {
            matrix: &self.matrix * &other.matrix,
        }
    }
}

/// `U ρ U†`, trace renormalised against roundoff.
pub fn evolve(rho: &InfoOperator, u: &UnitaryOp) -> Result<InfoOperator> {
    if u.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: rho.dim(),
        });
    }
    let m = rho.matrix().conjugate_by(u.matrix());
    let t = m.trace().re;
    InfoOperator::validate(&m.scale_real(1.0 / t))
}

/// `exp(−i (t1 − t0) H / ħ)`. Reverse time (`t1 < t0`) is allowed.
pub fn propagator(h: &HamiltonianOp, t0: f64, t1: f64, hbar: f64) -> UnitaryOp {
    let m = linalg::mat_exp_herm_generator(&h.matrix, t1 - t0, hbar)
        .expect("Hamiltonian is Hermitian by construction");
    UnitaryOp { matrix: m }
}

/// Piecewise-constant Hamiltonian: segments applied in order.
#[derive(Clone, Debug, Default)]
pub struct Schedule {
    segments: Vec<(f64, HamiltonianOp)>,
}

impl Schedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn then(mut self, duration: f64, h: HamiltonianOp) -> Result<Self> {
        if let Some((_, first)) = self.segments.first() {
            if first.dim() != h.dim() {
                return Err(Error::DimensionMismatch {
                    expected: first.dim(),
                    found: h.dim(),
                });
            }
        }
        self.segments.push((duration, h));
        Ok(self)
    }

    pub fn segments(&self) -> &[(f64, HamiltonianOp)] {
        &self.segments
    }

    pub fn duration(&self) -> f64 {
        self.segments.iter().map(|(d, _)| d).sum()
    }

    /// `U_n ⋯ U_1` over all segments; `None` for an empty schedule.
    pub fn propagator(&self, hbar: f64) -> Option<UnitaryOp> {
        let mut iter = self.segments.iter();
        let (d, h) = iter.next()?;
        let mut u = propagator(h, 0.0, *d, hbar);
        for (d, h) in iter {
            u = propagator(h, 0.0, *d, hbar).then_after(&u);
        }
        Some(u)
    }
}

/// Largest interior deviation `‖iħ (ρ_{k+1} − ρ_{k−1})/(2Δt) − [H, ρ_k]‖_F`
/// along a uniformly sampled trajectory.
pub fn motion_residual(h: &HamiltonianOp, traj: &[(f64, InfoOperator)], hbar: f64) -> Result<f64> {
    if traj.len() < 3 {
        return Err(Error::InsufficientPoints(traj.len()));
    }
    let dt = traj[1].0 - traj[0].0;
    if !(dt > 0.0) {
        return Err(Error::NonUniformTimes);
    }
    for w in traj.windows(2) {
        let step = w[1].0 - w[0].0;
        if !(step > 0.0) || (step - dt).abs() > 1e-9 * dt.max(1.0) {
            return Err(Error::NonUniformTimes);
        }
    }
    for (_, rho) in traj {
        if rho.dim() != h.dim() {
            return Err(Error::DimensionMismatch {
                expected: h.dim(),
                found: rho.dim(),
            });
        }
    }
    let ihbar = Complex64::new(0.0, hbar / (2.0 * dt));
    let mut worst = 0.0f64;
    for k in 1..traj.len() - 1 {
        let diff = (traj[k + 1].1.matrix() - traj[k - 1].1.matrix()).scale(ihbar);
        let comm = h.matrix().commutator(traj[k].1.matrix());
        worst = worst.max((&diff - &comm).frobenius_norm());
    }
    Ok(worst)
}
