//! Runnable worked examples.
//!
//! Each scenario returns a [`ScenarioReport`]: its inputs, named outputs and
//! a list of [`Check`]s. Every check carries the measured residual and the
//! tolerance it was judged against, so a report is self-describing.

use alloc::string::String;
use alloc::vec::Vec;

use crate::composite::BranchDecomposition;
use crate::linalg::CMatrix;
use crate::{Error, Result};

mod cat;
mod spin_one;
mod stern_gerlach;
mod two_slit;

pub use cat::{cat, CatParams};
pub use spin_one::spin_one_example;
pub use stern_gerlach::{stern_gerlach, SternGerlachParams};
pub use two_slit::{contrast, two_slit, TwoSlitParams};

/// Names accepted by [`Tolerances::set`], in declaration order.
pub const TOLERANCE_NAMES: [&str; 5] = ["algebra", "contraction", "invariance", "normalization", "mc-sigmas"];

/// Thresholds used by scenario checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Exact finite-dimensional algebra.
    pub algebra: f64,
    /// Expansion/contraction round trips.
    pub contraction: f64,
    /// Quantities that must not change under development.
    pub invariance: f64,
    /// Probability sums, symmetry of simulated intensities.
    pub normalization: f64,
    /// Number of binomial standard errors allowed for sampled frequencies.
    pub mc_sigmas: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebra: 1e-12,
            contraction: 1e-9,
            invariance: 1e-9,
            normalization: 1e-9,
            mc_sigmas: 4.0,
        }
    }
}

impl Tolerances {
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::BadParameter(alloc::format!(
                "tolerance `{name}` must be positive, got {value}"
            )));
        }
        let slot = match name {
            "algebra" => &mut self.algebra,
            "contraction" => &mut self.contraction,
            "invariance" => &mut self.invariance,
            "normalization" => &mut self.normalization,
            "mc-sigmas" => &mut self.mc_sigmas,
            _ => {
                return Err(Error::BadParameter(alloc::format!(
                    "unknown tolerance `{name}`"
                )))
            }
        };
        *slot = value;
        Ok(())
    }
}

/// Settings shared by every scenario.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub hbar: f64,
    /// Seed for sampled sub-runs; nothing else in a scenario is random.
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            hbar: crate::dynamics::DEFAULT_HBAR,
            seed: 0,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Real(f64),
    Text(String),
    Reals(Vec<f64>),
    Texts(Vec<String>),
    /// `(label, value)` pairs, e.g. probabilities per label.
    Labeled(Vec<(String, f64)>),
    /// One row per time step.
    Series(Vec<Vec<f64>>),
    Matrix(CMatrix),
    Branches(BranchDecomposition),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    /// Reproduces a stated result of a worked example.
    Reproduction,
    /// A structural property that must hold for any input.
    Property,
    /// Must detect a deliberately broken condition.
    NegativeControl,
}

impl CheckKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::Reproduction => "reproduction",
            CheckKind::Property => "property",
            CheckKind::NegativeControl => "negative-control",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub description: String,
    pub kind: CheckKind,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    /// Passes iff `residual ≤ tolerance`.
    pub fn within(kind: CheckKind, description: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            description: description.into(),
            kind,
            passed: residual <= tolerance,
            residual,
            tolerance,
        }
    }

    /// Passes iff `value > threshold`: the detector fired.
    pub fn exceeds(kind: CheckKind, description: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            description: description.into(),
            kind,
            passed: value > threshold,
            residual: value,
            tolerance: threshold,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScenarioReport {
    pub name: String,
    pub inputs: Vec<(String, Value)>,
    pub outputs: Vec<(String, Value)>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl ScenarioReport {
    pub fn new(name: &str) -> Self {
        Self {
            name: String::from(name),
            inputs: Vec::new(),
            outputs: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn input(&mut self, name: &str, value: Value) {
        self.inputs.push((String::from(name), value));
    }

    pub fn output(&mut self, name: &str, value: Value) {
        self.outputs.push((String::from(name), value));
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.outputs.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn find_check(&self, prefix: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.description.starts_with(prefix))
    }
}

/// Maximum absolute difference between two equally long sequences.
pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadParameter(alloc::format!("{name} must lie in [0, 1], got {p}")));
    }
    Ok(())
}
