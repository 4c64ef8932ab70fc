//! A condensed system with two macroscopically distinct subspaces ("+" alive,
//! "−" dead), each with two internal states.
//!
//! `ρ_T = p⁺ ρ_T⁺ ⊕ p⁻ ρ_T⁻` develops under a block-diagonal Hamiltonian, so
//! the label probabilities are constants of the motion and the conditioned
//! operators develop independently.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::{check_probability, max_abs_diff, Check, CheckKind, ScenarioConfig, ScenarioReport, Value};
use crate::condensation::{self, CondensationStructure};
use crate::dynamics::{self, HamiltonianOp, UnitaryOp};
use crate::iop::{self, InfoOperator};
use crate::linalg::CMatrix;
use crate::{Error, Result};

/// Upper bound on `steps`; the trajectory is stored in the report.
pub const MAX_STEPS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatParams {
    pub p_plus: f64,
    pub steps: usize,
    /// Duration of one step.
    pub dt: f64,
}

impl Default for CatParams {
    fn default() -> Self {
        Self {
            p_plus: 0.3,
            steps: 50,
            dt: 0.1,
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mat2(a: [Complex64; 4]) -> CMatrix {
    CMatrix::new(2, 2, a.to_vec()).expect("2x2")
}

/// `a ⊕ b` for 2×2 blocks.
fn direct_sum(a: &CMatrix, b: &CMatrix) -> CMatrix {
    CMatrix::from_fn(4, 4, |i, j| match (i < 2, j < 2) {
        (true, true) => a[(i, j)],
        (false, false) => b[(i - 2, j - 2)],
        _ => c(0.0, 0.0),
    })
}

fn alive() -> CMatrix {
    mat2([c(0.7, 0.0), c(0.2, 0.1), c(0.2, -0.1), c(0.3, 0.0)])
}

fn dead() -> CMatrix {
    mat2([c(0.4, 0.0), c(0.0, -0.3), c(0.0, 0.3), c(0.6, 0.0)])
}

fn h_alive() -> CMatrix {
    mat2([c(1.0, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(-1.0, 0.0)])
}

fn h_dead() -> CMatrix {
    mat2([c(0.3, 0.0), c(0.0, 0.2), c(0.0, -0.2), c(0.8, 0.0)])
}

fn embed(block: &CMatrix, label: &str) -> CMatrix {
    let zero = CMatrix::zeros(2, 2);
    if label == "+" {
        direct_sum(block, &zero)
    } else {
        direct_sum(&zero, block)
    }
}

pub fn cat(params: CatParams, cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    let CatParams { p_plus, steps, dt } = params;
    check_probability("p_plus", p_plus)?;
    if steps == 0 || steps > MAX_STEPS {
        return Err(Error::BadParameter(format!("steps must lie in 1..={MAX_STEPS}, got {steps}")));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::BadParameter(format!("dt must be positive, got {dt}")));
    }
    let p_minus = 1.0 - p_plus;
    let tol = cfg.tolerances;
    let mut report = ScenarioReport::new("cat");
    report.input("p_plus", Value::Real(p_plus));
    report.input("steps", Value::Int(steps as i64));
    report.input("dt", Value::Real(dt));
    report.input("hbar", Value::Real(cfg.hbar));

    let structure = CondensationStructure::from_blocks([("+", 2), ("-", 2)], (0.0, steps as f64 * dt))?;
    let weights = [p_plus, p_minus];
    let parts = [
        InfoOperator::validate(&embed(&alive(), "+"))?,
        InfoOperator::validate(&embed(&dead(), "-"))?,
    ];
    let rho0 = InfoOperator::validate(
        &(&parts[0].matrix().scale_real(p_plus) + &parts[1].matrix().scale_real(p_minus)),
    )?;
    let h = HamiltonianOp::new(direct_sum(&h_alive(), &h_dead()))?;
    let u_step = dynamics::propagator(&h, 0.0, dt, cfg.hbar);

    report.check(Check::within(
        CheckKind::Property,
        "the Hamiltonian respects the condensation (leakage)",
        condensation::leakage(&u_step, &structure)?,
        tol.invariance,
    ));

    let present: Vec<(usize, &str)> = structure
        .labels()
        .iter()
        .enumerate()
        .filter(|(i, _)| weights[*i] > condensation::MIN_LABEL_PROBABILITY)
        .map(|(i, l)| (i, l.as_str()))
        .collect();

    let mut rho = rho0.clone();
    let mut branch_states: Vec<InfoOperator> = parts.to_vec();
    let mut series = Vec::with_capacity(steps + 1);
    let mut trajectory = Vec::with_capacity(steps + 1);
    let (mut prob_drift, mut form_residual, mut commute_err, mut round_trip) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for step in 0..=steps {
        if step > 0 {
            let previous = rho.clone();
            rho = dynamics::evolve(&rho, &u_step)?;
            for (i, l) in &present {
                // Conditioning then evolving against evolving then conditioning.
                let cond_then_evolve = dynamics::evolve(&condensation::condition_on_label(&previous, &structure, l)?, &u_step)?;
                let evolve_then_cond = condensation::condition_on_label(&rho, &structure, l)?;
                commute_err = commute_err.max(cond_then_evolve.distance(&evolve_then_cond)?);
                branch_states[*i] = dynamics::evolve(&branch_states[*i], &u_step)?;
            }
        }
        let probs: Vec<f64> = condensation::label_probabilities(&rho, &structure)?
            .iter()
            .map(|(_, p)| *p)
            .collect();
        prob_drift = prob_drift.max(max_abs_diff(&probs, &weights));
        form_residual = form_residual.max(condensation::condensation_residual(&rho, &structure)?);
        // Both descriptions hold at once: ρ_T and each ρ_T^m, the latter
        // reached from the former by a mixture contraction.
        for (i, l) in &present {
            let cond = condensation::condition_on_label(&rho, &structure, l)?;
            round_trip = round_trip.max(cond.distance(&branch_states[*i])?);
            let k = iop::contraction_from_mixture(&rho, &branch_states[*i])?;
            round_trip = round_trip.max(iop::contract(&rho, &k)?.distance(&branch_states[*i])?);
        }
        trajectory.push(probs.iter().map(|p| if *p >= 0.5 { 1.0 } else { 0.0 }).collect::<Vec<f64>>());
        series.push(probs);
    }

    report.check(Check::within(
        CheckKind::Reproduction,
        "label probabilities stay (p+, p-) at every step",
        prob_drift,
        tol.invariance,
    ));
    report.check(Check::within(
        CheckKind::Property,
        "rho_T stays in condensed form",
        form_residual,
        tol.invariance,
    ));
    report.check(Check::within(
        CheckKind::Property,
        "conditioning commutes with the development",
        commute_err,
        tol.invariance,
    ));
    report.check(Check::within(
        CheckKind::Property,
        "conditioned operators equal the separately developed rho_T^m and are contractions of rho_T",
        round_trip,
        tol.contraction,
    ));

    // Negative control 1: coherence between the two subspaces.
    let psi = [c(p_plus.sqrt(), 0.0), c(0.0, 0.0), c(p_minus.sqrt(), 0.0), c(0.0, 0.0)];
    let coherent = InfoOperator::pure(&psi)?;
    let coherent_probs = condensation::label_probabilities(&coherent, &structure)?;
    let coherent_values: Vec<f64> = coherent_probs.iter().map(|(_, p)| *p).collect();
    let coherence = condensation::condensation_residual(&coherent, &structure)?;
    report.check(Check::within(
        CheckKind::Property,
        "label probabilities of the coherent superposition are still (p+, p-)",
        max_abs_diff(&coherent_values, &weights),
        tol.normalization,
    ));
    if p_plus > 0.0 && p_minus > 0.0 {
        report.check(Check::exceeds(
            CheckKind::NegativeControl,
            "a coherent superposition of alive and dead is not in condensed form",
            coherence,
            tol.invariance,
        ));
    }

    // Negative control 2: a Hamiltonian coupling the subspaces.
    let coupling = CMatrix::from_fn(4, 4, |i, j| match (i, j) {
        (1, 2) | (2, 1) => c(0.4, 0.0),
        _ => c(0.0, 0.0),
    });
    let h_coupled = HamiltonianOp::new(&direct_sum(&h_alive(), &h_dead()) + &coupling)?;
    let u_coupled: UnitaryOp = dynamics::propagator(&h_coupled, 0.0, dt * steps as f64, cfg.hbar);
    let leaked = dynamics::evolve(&rho0, &u_coupled)?;
    let leaked_probs: Vec<f64> = condensation::label_probabilities(&leaked, &structure)?
        .iter()
        .map(|(_, p)| *p)
        .collect();
    report.check(Check::exceeds(
        CheckKind::NegativeControl,
        "a Hamiltonian coupling alive and dead is detected (leakage)",
        condensation::leakage(&u_coupled, &structure)?,
        tol.invariance,
    ));

    report.output("labels", Value::Texts(structure.labels().to_vec()));
    report.output("probabilities", Value::Series(series));
    report.output("label_trajectory", Value::Series(trajectory));
    report.output("rho_initial", Value::Matrix(rho0.matrix().clone()));
    report.output("rho_final", Value::Matrix(rho.matrix().clone()));
    report.output("coherent_probabilities", Value::Labeled(coherent_probs));
    report.output("coherent_condensation_residual", Value::Real(coherence));
    report.output("coupled_final_probabilities", Value::Reals(leaked_probs));
    report.note(String::from(
        "label_trajectory marks, per step, the label holding probability at least 1/2; it is constant because the development respects the condensation",
    ));
    Ok(report)
}
