//! Spin-½ atom deflected by a magnet treated as a three-level apparatus.
//!
//! Basis order is fixed: the atom `S` as `(↑, ↓)`, the apparatus `T` as the
//! pseudo-spin `R_z` eigenvectors `(+1, 0, −1)`. The interaction is the
//! phenomenological unitary
//!
//! ```text
//! U  = ¼ [ (1 − 2 s_z) ⊗ R̃₊ + (1 + 2 s_z) ⊗ R̃₋ ]
//! R̃± = √2 (R_z ± 1) R_x (R_z ± 1) + R_z (R_z ∓ 1)
//! ```
//!
//! which moves the apparatus from `0` to `−` for spin up and to `+` for spin
//! down.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::{check_probability, max_abs_diff, Check, CheckKind, ScenarioConfig, ScenarioReport, Value};
use crate::composite::{self, CompositeSpec};
use crate::condensation::{self, CondensationStructure};
use crate::dynamics::{self, HamiltonianOp, UnitaryOp};
use crate::iop::InfoOperator;
use crate::linalg::{self, CMatrix};
use crate::measurement::{self, MeasurementSystem};
use crate::Result;

/// Sample count for the frequency sub-run.
pub const SAMPLES: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SternGerlachParams {
    /// Weight of `ρ↑` in the atom's operator before the interaction.
    pub p_up_prior: f64,
}

impl Default for SternGerlachParams {
    fn default() -> Self {
        Self { p_up_prior: 0.5 }
    }
}

fn s_z() -> CMatrix {
    CMatrix::from_real_diag(&[0.5, -0.5])
}

fn r_z() -> CMatrix {
    CMatrix::from_real_diag(&[1.0, 0.0, -1.0])
}

/// Spin-1 x-component in the `R_z` eigenbasis `(+1, 0, −1)`.
fn r_x() -> CMatrix {
    let h = 0.5f64.sqrt();
    CMatrix::from_real(3, 3, &[0.0, h, 0.0, h, 0.0, h, 0.0, h, 0.0]).expect("3x3")
}

/// `R̃₊` for `sign = +1`, `R̃₋` for `sign = −1`.
pub fn r_tilde(sign: f64) -> CMatrix {
    let id = CMatrix::identity(3);
    let rz = r_z();
    let shifted = &rz + &id.scale_real(sign);
    let anti = &rz - &id.scale_real(sign);
    let hop = &(&shifted * &r_x()) * &shifted;
    &hop.scale_real(2f64.sqrt()) + &(&rz * &anti)
}

/// The interaction unitary on `S ⊗ T` (dimension 6).
pub fn interaction_matrix() -> CMatrix {
    let id = CMatrix::identity(2);
    let down_part = &id - &s_z().scale_real(2.0);
    let up_part = &id + &s_z().scale_real(2.0);
    let sum = &linalg::kron(&down_part, &r_tilde(1.0)) + &linalg::kron(&up_part, &r_tilde(-1.0));
    sum.scale_real(0.25)
}

fn permutation(n: usize, image: &[usize]) -> CMatrix {
    // column j maps to row image[j]
    CMatrix::from_fn(n, n, |i, j| Complex64::new(if image[j] == i { 1.0 } else { 0.0 }, 0.0))
}

fn basis_op(n: usize, i: usize) -> InfoOperator {
    InfoOperator::validate(&CMatrix::basis_projector(n, [i])).expect("basis projector")
}

pub fn stern_gerlach(params: SternGerlachParams, cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    let p = params.p_up_prior;
    check_probability("p_up_prior", p)?;
    let tol = cfg.tolerances;
    let mut report = ScenarioReport::new("stern-gerlach");
    report.input("p_up_prior", Value::Real(p));
    report.input("hbar", Value::Real(cfg.hbar));
    report.input("seed", Value::Int(cfg.seed as i64));
    report.input("samples", Value::Int(SAMPLES as i64));

    let up = basis_op(2, 0);
    let down = basis_op(2, 1);
    let (t_plus, t_zero, t_minus) = (basis_op(3, 0), basis_op(3, 1), basis_op(3, 2));

    // Independent oracle: R̃₊/2 swaps (+1, 0) and fixes −1; R̃₋/2 swaps (0, −1) and fixes +1.
    let perm_plus = permutation(3, &[1, 0, 2]);
    let perm_minus = permutation(3, &[0, 2, 1]);
    let rp = r_tilde(1.0).scale_real(0.5);
    let rm = r_tilde(-1.0).scale_real(0.5);
    report.check(Check::within(
        CheckKind::Reproduction,
        "R~+/2 is the permutation swapping R_z = +1 and 0",
        linalg::frobenius_dist(&rp, &perm_plus)?,
        tol.algebra,
    ));
    report.check(Check::within(
        CheckKind::Reproduction,
        "R~-/2 is the permutation swapping R_z = 0 and -1",
        linalg::frobenius_dist(&rm, &perm_minus)?,
        tol.algebra,
    ));

    let u_matrix = interaction_matrix();
    let oracle_u = &linalg::kron(up.matrix(), &perm_minus) + &linalg::kron(down.matrix(), &perm_plus);
    report.check(Check::within(
        CheckKind::Reproduction,
        "U equals the block permutation built from the oracle",
        linalg::frobenius_dist(&u_matrix, &oracle_u)?,
        tol.algebra,
    ));
    let unitarity = u_matrix.unitarity_residual();
    report.check(Check::within(
        CheckKind::Reproduction,
        "U is unitary: |U^dag U - I|_F",
        unitarity,
        tol.algebra,
    ));
    let u = UnitaryOp::new(u_matrix.clone())?;

    // Before the interaction.
    let atom = InfoOperator::validate(&(&up.matrix().scale_real(p) + &down.matrix().scale_real(1.0 - p)))?;
    let rho_t1 = composite::compose(&atom, &t_zero);
    let rho_t2 = dynamics::evolve(&rho_t1, &u)?;

    let expected_t2 = &linalg::kron(up.matrix(), t_minus.matrix()).scale_real(p)
        + &linalg::kron(down.matrix(), t_plus.matrix()).scale_real(1.0 - p);
    report.check(Check::within(
        CheckKind::Reproduction,
        "U rho(t1) U^dag = p rho_up (x) rho_T- + (1-p) rho_down (x) rho_T+",
        linalg::frobenius_dist(rho_t2.matrix(), &expected_t2)?,
        tol.algebra,
    ));

    // Apparatus condensation: one subspace per deflection.
    let t_structure = CondensationStructure::from_blocks([("+", 1), ("0", 1), ("-", 1)], (0.0, 1.0))?;
    let spec = CompositeSpec::new(2, t_structure.clone())?;
    let lifted = spec.lifted_structure();

    let branches = composite::branch_decompose(&rho_t2, &spec)?;
    let weight_of = |label: &str| branches.branch(label).map_or(0.0, |b| b.weight);
    report.check(Check::within(
        CheckKind::Reproduction,
        "branch weights: (-) = p_up, (+) = 1 - p_up, (0) absent",
        (weight_of("-") - p)
            .abs()
            .max((weight_of("+") - (1.0 - p)).abs())
            .max(weight_of("0")),
        tol.algebra,
    ));
    report.check(Check::within(
        CheckKind::Property,
        "every branch is separable (max residual)",
        branches.max_residual(),
        tol.algebra,
    ));
    let mut branch_object_err = 0.0f64;
    if let Some(b) = branches.branch("-") {
        branch_object_err = branch_object_err
            .max(b.rho_s.distance(&up)?)
            .max(b.rho_t.distance(&t_minus)?);
    }
    if let Some(b) = branches.branch("+") {
        branch_object_err = branch_object_err
            .max(b.rho_s.distance(&down)?)
            .max(b.rho_t.distance(&t_plus)?);
    }
    report.check(Check::within(
        CheckKind::Reproduction,
        "branch (-) carries rho_up (x) rho_T-, branch (+) carries rho_down (x) rho_T+",
        branch_object_err,
        tol.algebra,
    ));

    let label_probs = condensation::label_probabilities(&rho_t2, &lifted)?;
    let label_values: Vec<f64> = label_probs.iter().map(|(_, v)| *v).collect();
    report.check(Check::within(
        CheckKind::Property,
        "label probabilities on S+T equal the branch weights",
        max_abs_diff(&label_values, &[1.0 - p, 0.0, p]),
        tol.algebra,
    ));
    report.check(Check::within(
        CheckKind::Property,
        "rho(t2) is in condensed form for the apparatus structure",
        condensation::condensation_residual(&rho_t2, &lifted)?,
        tol.algebra,
    ));

    if p > 0.0 {
        let cond = condensation::condition_on_label(&rho_t2, &lifted, "-")?;
        let (object, product_residual) = composite::separate(&cond, &t_minus)?;
        report.check(Check::within(
            CheckKind::Reproduction,
            "given scale value m = -, S is described by rho_up",
            object.distance(&up)?.max(product_residual),
            tol.algebra,
        ));
    }
    if p < 1.0 {
        let cond = condensation::condition_on_label(&rho_t2, &lifted, "+")?;
        let (object, product_residual) = composite::separate(&cond, &t_plus)?;
        report.check(Check::within(
            CheckKind::Reproduction,
            "given scale value m = +, S is described by rho_down",
            object.distance(&down)?.max(product_residual),
            tol.algebra,
        ));
    }

    let unconditional = composite::unconditional_object(&branches)?;
    report.check(Check::within(
        CheckKind::Reproduction,
        "without the scale value, S is described by p rho_up + (1-p) rho_down",
        unconditional.distance(&atom)?,
        tol.algebra,
    ));

    // Negative controls: the interaction dissolves the condensation, and for a
    // mixed prior the final operator is not a product.
    report.check(Check::exceeds(
        CheckKind::NegativeControl,
        "U mixes apparatus subspaces during the interaction (leakage)",
        condensation::leakage(&u, &lifted)?,
        tol.invariance,
    ));
    if p > 0.0 && p < 1.0 {
        let marginal_t = InfoOperator::validate(&linalg::partial_trace(rho_t2.matrix(), 2, 3, linalg::Subsystem::A)?)?;
        let (_, residual) = composite::separate(&rho_t2, &marginal_t)?;
        report.check(Check::exceeds(
            CheckKind::NegativeControl,
            "rho(t2) is not a product of its marginals",
            residual,
            tol.algebra,
        ));
    }

    // After t2 the apparatus is condensed again: a free development that is
    // block diagonal in the apparatus basis keeps every label probability.
    let h_after = HamiltonianOp::new(linalg::kron(
        &CMatrix::from_real_diag(&[0.3, -0.2]),
        &CMatrix::from_real_diag(&[1.0, 0.0, -1.0]),
    ))?;
    let u_after = dynamics::propagator(&h_after, 0.0, 2.5, cfg.hbar);
    let rho_t3 = dynamics::evolve(&rho_t2, &u_after)?;
    let later: Vec<f64> = condensation::label_probabilities(&rho_t3, &lifted)?
        .iter()
        .map(|(_, v)| *v)
        .collect();
    report.check(Check::within(
        CheckKind::Property,
        "free development after t2 respects the condensation and keeps probabilities",
        max_abs_diff(&later, &label_values).max(condensation::leakage(&u_after, &lifted)?),
        tol.invariance,
    ));

    // The same statistics seen from S alone: the Kraus family induced by U with
    // the apparatus ready in |0>.
    let ready = [
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
    ];
    let ms = MeasurementSystem::from_interaction(&u, 2, &t_structure, &ready, vec![-0.5, 0.0, 0.5])?;
    report.check(Check::within(
        CheckKind::Property,
        "induced Kraus family is definitive: |sum M^dag M - I|_F",
        ms.completeness_residual(),
        tol.algebra,
    ));
    let probs = measurement::outcome_probabilities(&ms, &atom)?;
    let prob_values: Vec<f64> = probs.iter().map(|(_, v)| *v).collect();
    report.check(Check::within(
        CheckKind::Property,
        "Kraus outcome probabilities equal the branch weights",
        max_abs_diff(&prob_values, &label_values),
        tol.algebra,
    ));
    let f = measurement::observable(&ms)?;
    report.check(Check::within(
        CheckKind::Property,
        "observable built with f(-) = 1/2, f(0) = 0, f(+) = -1/2 is s_z",
        linalg::frobenius_dist(f.matrix(), &s_z())?,
        tol.algebra,
    ));
    let ev = measurement::expectation(&f, &atom)?;
    let by_values: f64 = prob_values.iter().zip(ms.values()).map(|(p, v)| p * v).sum();
    report.check(Check::within(
        CheckKind::Property,
        "expectation tr(F rho) equals sum f(m) p^m",
        (ev - by_values).abs(),
        tol.normalization,
    ));

    let estimated = measurement::estimate_probabilities(&ms, &atom, SAMPLES, cfg.seed)?;
    let mut worst_sigma = 0.0f64;
    for ((_, est), exact) in estimated.iter().zip(&prob_values) {
        let z = measurement::standard_errors(*est, *exact, SAMPLES);
        worst_sigma = worst_sigma.max(z);
    }
    report.check(Check::within(
        CheckKind::Property,
        "sampled frequencies within the allowed number of standard errors",
        worst_sigma,
        tol.mc_sigmas,
    ));

    report.output("interaction_unitary", Value::Matrix(u_matrix));
    report.output("r_tilde_plus", Value::Matrix(r_tilde(1.0)));
    report.output("r_tilde_minus", Value::Matrix(r_tilde(-1.0)));
    report.output("rho_t1", Value::Matrix(rho_t1.matrix().clone()));
    report.output("rho_t2", Value::Matrix(rho_t2.matrix().clone()));
    report.output(
        "branch_labels",
        Value::Texts(branches.branches.iter().map(|b| b.label.clone()).collect()),
    );
    report.output("branch_weights", Value::Reals(branches.weights()));
    report.output("label_probabilities", Value::Labeled(label_probs));
    report.output("object_unconditional", Value::Matrix(unconditional.matrix().clone()));
    report.output("observable", Value::Matrix(f.matrix().clone()));
    report.output("expectation", Value::Real(ev));
    report.output("estimated_probabilities", Value::Labeled(estimated));
    report.output("branches", Value::Branches(branches));
    report.note(String::from(
        "basis order: S = (up, down); T = R_z eigenvalues (+1, 0, -1)",
    ));
    report.note(format!(
        "scale value m = - accompanies spin up and m = + spin down; {} samples drawn with seed {}",
        SAMPLES, cfg.seed
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(p: f64) -> ScenarioReport {
        stern_gerlach(SternGerlachParams { p_up_prior: p }, &ScenarioConfig::default()).unwrap()
    }

    #[test]
    fn default_prior_reproduces_equal_branches() {
        let r = run(0.5);
        for c in &r.checks {
            assert!(c.passed, "{c:?}");
        }
        match r.get("branch_weights") {
            Some(Value::Reals(w)) => {
                assert_eq!(w.len(), 2);
                assert!(w.iter().all(|x| (x - 0.5).abs() <= 1e-12));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn certain_up_gives_single_minus_branch() {
        let r = run(1.0);
        assert!(r.all_passed(), "{:?}", r.checks);
        match r.get("branch_labels") {
            Some(Value::Texts(l)) => assert_eq!(l, &["-"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn r_tilde_entries() {
        // Hand evaluation in the (+1, 0, -1) basis.
        let plus = CMatrix::from_real(3, 3, &[0.0, 2.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 2.0]).unwrap();
        let minus = CMatrix::from_real(3, 3, &[2.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0, 2.0, 0.0]).unwrap();
        assert!(linalg::frobenius_dist(&r_tilde(1.0), &plus).unwrap() < 1e-14);
        assert!(linalg::frobenius_dist(&r_tilde(-1.0), &minus).unwrap() < 1e-14);
    }

    #[test]
    fn partial_trace_of_final_operator() {
        let u = UnitaryOp::new(interaction_matrix()).unwrap();
        let rho_t1 = composite::compose(&crate::iop::max_iop(2), &basis_op(3, 1));
        let rho_t2 = dynamics::evolve(&rho_t1, &u).unwrap();
        let s = linalg::partial_trace(rho_t2.matrix(), 2, 3, linalg::Subsystem::B).unwrap();
        assert!(linalg::frobenius_dist(&s, &CMatrix::from_real_diag(&[0.5, 0.5])).unwrap() < 1e-15);
    }

    #[test]
    fn rejects_bad_prior() {
        assert!(stern_gerlach(SternGerlachParams { p_up_prior: 1.5 }, &ScenarioConfig::default()).is_err());
    }
}
