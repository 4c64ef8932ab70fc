//! Spin-1 with `s_z = 0` excluded: `ρ' = ½(|+><+| + |−><−|)` in the basis
//! `(+, 0, −)`.

use alloc::string::String;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::{Check, CheckKind, ScenarioConfig, ScenarioReport, Value};
use crate::iop::{self, InfoOperator, Mixture};
use crate::linalg::CMatrix;
use crate::{Error, Result};

fn basis(i: usize) -> InfoOperator {
    InfoOperator::validate(&CMatrix::basis_projector(3, [i])).expect("basis projector")
}

pub fn spin_one_example(cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    let tol = cfg.tolerances;
    let mut report = ScenarioReport::new("spin-one");

    let rho_plus = basis(0);
    let rho_zero = basis(1);
    let rho_minus = basis(2);
    let rho_max = iop::max_iop(3);
    let mixture = Mixture::new(alloc::vec![0.5, 0.5], alloc::vec![rho_plus.clone(), rho_minus.clone()])?;
    let rho_prime = mixture.total();

    report.check(Check::within(
        CheckKind::Reproduction,
        "max operator equals (|0><0| + |+><+| + |-><-|)/3",
        crate::linalg::frobenius_dist(
            rho_max.matrix(),
            &(&(rho_zero.matrix() + rho_plus.matrix()) + rho_minus.matrix()).scale_real(1.0 / 3.0),
        )?,
        tol.algebra,
    ));

    let k_max = iop::contraction_from_max(&rho_prime);
    let from_max = iop::contract(&rho_max, &k_max)?;
    report.check(Check::within(
        CheckKind::Reproduction,
        "the max operator contracts to rho'",
        from_max.distance(&rho_prime)?,
        tol.contraction,
    ));

    let mut worst_part = 0.0f64;
    for (name, part) in [("plus", &rho_plus), ("minus", &rho_minus)] {
        let k = iop::contraction_from_mixture(&rho_prime, part)?;
        let got = iop::contract(&rho_prime, &k)?;
        let r = got.distance(part)?;
        worst_part = worst_part.max(r);
        report.output(&alloc::format!("contraction_to_{name}"), Value::Matrix(k.operator().clone()));
    }
    report.check(Check::within(
        CheckKind::Reproduction,
        "rho' contracts to both rho+ and rho-",
        worst_part,
        tol.contraction,
    ));

    let parts = iop::decompose(&mixture);
    let weights: alloc::vec::Vec<f64> = parts.iter().map(|(w, _)| *w).collect();
    let weight_err = weights.iter().map(|w| (w - 0.5).abs()).fold(0.0, f64::max);
    report.check(Check::within(
        CheckKind::Reproduction,
        "decomposition weights are exactly (1/2, 1/2)",
        weight_err,
        0.0,
    ));

    let e_prime = rho_prime.entropy();
    let e_max = rho_max.entropy();
    let (ln2, ln3) = (core::f64::consts::LN_2, 3f64.ln());
    report.check(Check::within(
        CheckKind::Reproduction,
        "entropy(rho') = log 2",
        (e_prime - ln2).abs(),
        tol.algebra,
    ));
    report.check(Check::within(
        CheckKind::Reproduction,
        "entropy(max) = log 3",
        (e_max - ln3).abs(),
        tol.algebra,
    ));
    report.check(Check::exceeds(
        CheckKind::Property,
        "excluding s_z = 0 lowers the entropy: entropy(max) - entropy(rho')",
        e_max - e_prime,
        0.0,
    ));

    // The zero eigenvector is outside the support of rho'.
    let violation = match iop::contraction_from_mixture(&rho_prime, &rho_zero) {
        Err(Error::SupportViolation { residual }) => residual,
        Err(e) => return Err(e),
        Ok(_) => 0.0,
    };
    report.check(Check::exceeds(
        CheckKind::NegativeControl,
        "|0><0| is rejected as a contraction of rho' (support residual)",
        violation,
        iop::SUPPORT_RESIDUAL_TOL,
    ));

    report.output("rho_prime", Value::Matrix(rho_prime.matrix().clone()));
    report.output("rho_max", Value::Matrix(rho_max.matrix().clone()));
    report.output("contraction_from_max", Value::Matrix(k_max.operator().clone()));
    report.output("decomposition_weights", Value::Reals(weights));
    report.output("entropy_rho_prime", Value::Real(e_prime));
    report.output("entropy_rho_max", Value::Real(e_max));
    report.note(String::from("basis order: s_z eigenvalues (+1, 0, -1)"));
    report.note(String::from(
        "entropy(rho') = log 2 and entropy(max) = log 3; a published statement of this example lists the two values the other way round, which contradicts the entropy definition and is treated as a transposition",
    ));
    Ok(report)
}
