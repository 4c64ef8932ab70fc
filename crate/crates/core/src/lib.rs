//! Information-operator algebra on finite-dimensional Hilbert spaces.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! * [`linalg`]: dense complex matrices, Hermitian eigensolver, exponentials,
//!   Kronecker products and partial traces.
//! * [`iop`]: validated information operators, entropy, expansion and
//!   contraction, probabilistic decomposition.
//! * [`dynamics`]: unitary development, Hamiltonian propagators and
//!   equation-of-motion residuals.
//! * [`condensation`]: labelled projector families and the quantities they
//!   induce on an operator.
//! * [`composite`]: tensor-product composition and branch decomposition over
//!   an apparatus condensation structure.
//! * [`measurement`]: Kraus families, observables, expectations and
//!   frequency estimation.
//! * [`ivec`]: phase-gauged information vectors.
//! * [`scenarios`]: runnable worked examples producing a [`ScenarioReport`].
//!
//! IO, JSON schemas and the command line live in the `iopsim` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod composite;
pub mod condensation;
pub mod dynamics;
mod error;
pub mod iop;
pub mod ivec;
pub mod linalg;
pub mod measurement;
pub mod random;
pub mod scenarios;

pub use composite::{BranchDecomposition, CompositeSpec};
pub use condensation::CondensationStructure;
pub use dynamics::{HamiltonianOp, Schedule, UnitaryOp};
pub use error::{Error, Result};
pub use iop::{Contraction, InfoOperator, Mixture};
pub use ivec::InfoVector;
pub use linalg::{CMatrix, HermEigen};
pub use measurement::{MeasurementSystem, Observable};
pub use num_complex::Complex64;
pub use scenarios::ScenarioReport;
