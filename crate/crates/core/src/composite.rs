//! Composite systems `S + T` and their decomposition into branches over the
//! condensation subspaces of the apparatus factor `T`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::condensation::CondensationStructure;
use crate::iop::InfoOperator;
use crate::linalg::{self, CMatrix, Subsystem};
use crate::{Error, Result};

/// Branches at or below this weight are dropped.
pub const MIN_BRANCH_WEIGHT: f64 = 1e-12;

/// Object/apparatus split of a composite space, with the apparatus
/// condensation structure.
#[derive(Clone, Debug)]
pub struct CompositeSpec {
    dim_s: usize,
    t_structure: CondensationStructure,
}

impl CompositeSpec {
    pub fn new(dim_s: usize, t_structure: CondensationStructure) -> Result<Self> {
        if dim_s == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        Ok(Self { dim_s, t_structure })
    }

    pub fn dim_s(&self) -> usize {
        self.dim_s
    }

    pub fn dim_t(&self) -> usize {
        self.t_structure.dim()
    }

    pub fn dim(&self) -> usize {
        self.dim_s * self.dim_t()
    }

    pub fn t_structure(&self) -> &CondensationStructure {
        &self.t_structure
    }

    /// The apparatus structure lifted to `S ⊗ T`.
    pub fn lifted_structure(&self) -> CondensationStructure {
        self.t_structure.lift_to_composite(self.dim_s)
    }
}

/// One term `p^m ρ_S^m ⊗ ρ_T^m` of a branch decomposition.
#[derive(Clone, Debug)]
pub struct Branch {
    pub label: String,
    pub weight: f64,
    pub rho_s: InfoOperator,
    pub rho_t: InfoOperator,
    /// `‖(I⊗P^m) ρ (I⊗P^m) − p^m ρ_S^m ⊗ ρ_T^m‖_F`; zero iff the projected
    /// block is separable.
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct BranchDecomposition {
    pub branches: Vec<Branch>,
}

impl BranchDecomposition {
    pub fn weights(&self) -> Vec<f64> {
        self.branches.iter().map(|b| b.weight).collect()
    }

    pub fn total_weight(&self) -> f64 {
        self.branches.iter().map(|b| b.weight).sum()
    }

    pub fn max_residual(&self) -> f64 {
        self.branches.iter().map(|b| b.residual).fold(0.0, f64::max)
    }

    pub fn branch(&self, label: &str) -> Option<&Branch> {
        self.branches.iter().find(|b| b.label == label)
    }

    /// `Σ_m p^m ρ_S^m ⊗ ρ_T^m`.
    pub fn reconstruct(&self) -> Option<CMatrix> {
        let first = self.branches.first()?;
        let n = first.rho_s.dim() * first.rho_t.dim();
        let mut acc = CMatrix::zeros(n, n);
        for b in &self.branches {
            let term = linalg::kron(b.rho_s.matrix(), b.rho_t.matrix()).scale_real(b.weight);
            acc = &acc + &term;
        }
        Some(acc)
    }
}

/// `ρ_S ⊗ ρ_T`.
pub fn compose(rho_s: &InfoOperator, rho_t: &InfoOperator) -> InfoOperator {
    InfoOperator::from_trusted(linalg::kron(rho_s.matrix(), rho_t.matrix()))
}

/// Projects onto each apparatus subspace and factors the block by partial
/// traces. Zero-weight branches are omitted.
pub fn branch_decompose(rho_st: &InfoOperator, spec: &CompositeSpec) -> Result<BranchDecomposition> {
    if rho_st.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: rho_st.dim(),
        });
    }
    let (ds, dt) = (spec.dim_s, spec.dim_t());
    let id_s = CMatrix::identity(ds);
    let mut branches = Vec::new();
    for (label, p) in spec.t_structure.labels().iter().zip(spec.t_structure.projectors()) {
        let lifted = linalg::kron(&id_s, p);
        let block = rho_st.matrix().conjugate_by(&lifted);
        let weight = block.trace().re;
        if weight <= MIN_BRANCH_WEIGHT {
            continue;
        }
        let rho_s = InfoOperator::validate(
            &linalg::partial_trace(&block, ds, dt, Subsystem::B)?.scale_real(1.0 / weight),
        )?;
        let rho_t = InfoOperator::validate(
            &linalg::partial_trace(&block, ds, dt, Subsystem::A)?.scale_real(1.0 / weight),
        )?;
        let product = linalg::kron(rho_s.matrix(), rho_t.matrix()).scale_real(weight);
        let residual = linalg::frobenius_dist(&block, &product)?;
        branches.push(Branch {
            label: label.clone(),
            weight,
            rho_s,
            rho_t,
            residual,
        });
    }
    Ok(BranchDecomposition { branches })
}

/// `ρ̃_S = Σ_m p^m ρ_S^m`.
pub fn unconditional_object(b: &BranchDecomposition) -> Result<InfoOperator> {
    let first = b
        .branches
        .first()
        .ok_or_else(|| Error::InvalidMixture(String::from("no branches")))?;
    let n = first.rho_s.dim();
    let mut acc = CMatrix::zeros(n, n);
    for br in &b.branches {
        acc = &acc + &br.rho_s.matrix().scale_real(br.weight);
    }
    let total = b.total_weight();
    InfoOperator::validate(&acc.scale_real(1.0 / total))
}

/// Recovers `σ_S` from `ρ_{S+T} = σ_S ⊗ ρ_T` by tracing out `T`, returning
/// it with `‖ρ_{S+T} − σ_S ⊗ ρ_T‖_F` so a non-product input is visible.
pub fn separate(rho_st: &InfoOperator, rho_t: &InfoOperator) -> Result<(InfoOperator, f64)> {
    let dt = rho_t.dim();
    let n = rho_st.dim();
    if n % dt != 0 {
        return Err(Error::DimensionMismatch {
            expected: dt,
            found: n,
        });
    }
    let ds = n / dt;
    let sigma = InfoOperator::validate(&linalg::partial_trace(rho_st.matrix(), ds, dt, Subsystem::B)?)?;
    let residual = linalg::frobenius_dist(rho_st.matrix(), &linalg::kron(sigma.matrix(), rho_t.matrix()))?;
    Ok((sigma, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::condensation;
    use crate::dynamics::{evolve, propagator, HamiltonianOp};
    use crate::iop::{self, max_iop};
    use crate::random;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn ket(n: usize, i: usize) -> Vec<Complex64> {
        (0..n)
            .map(|k| Complex64::new(if k == i { 1.0 } else { 0.0 }, 0.0))
            .collect()
    }

    fn pure(n: usize, i: usize) -> InfoOperator {
        InfoOperator::pure(&ket(n, i)).unwrap()
    }

    /// T basis (+, 0, −), one label per basis vector.
    fn deflection_spec() -> CompositeSpec {
        let t = CondensationStructure::from_blocks([("+", 1), ("0", 1), ("-", 1)], (0.0, 1.0)).unwrap();
        CompositeSpec::new(2, t).unwrap()
    }

    fn after_interaction() -> InfoOperator {
        let a = linalg::kron(pure(2, 0).matrix(), pure(3, 2).matrix());
        let b = linalg::kron(pure(2, 1).matrix(), pure(3, 0).matrix());
        InfoOperator::validate(&(&a + &b).scale_real(0.5)).unwrap()
    }

    #[test]
    fn compose_examples() {
        let joint = compose(&max_iop(2), &max_iop(3));
        assert!(joint.distance(&max_iop(6)).unwrap() < 1e-15);
        let mut rng = random::seeded(31);
        let a = random::pure_operator(&mut rng, 2);
        let b = random::pure_operator(&mut rng, 3);
        assert!(compose(&a, &b).is_pure());
    }

    #[test]
    fn compose_before_interaction_has_single_central_block() {
        // ½(ρ↑ + ρ↓) ⊗ ρ_T⁰: nonzero only at indices 1 and 4 (T = 0 for each spin).
        let joint = compose(&max_iop(2), &pure(3, 1));
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j && (i == 1 || i == 4) { 0.5 } else { 0.0 };
                assert_eq!(joint.matrix()[(i, j)].re, want);
            }
        }
    }

    #[test]
    fn deflection_branches() {
        let d = branch_decompose(&after_interaction(), &deflection_spec()).unwrap();
        assert_eq!(d.branches.len(), 2);
        let minus = d.branch("-").unwrap();
        let plus = d.branch("+").unwrap();
        assert!((minus.weight - 0.5).abs() < 1e-15);
        assert!((plus.weight - 0.5).abs() < 1e-15);
        assert!(minus.rho_s.distance(&pure(2, 0)).unwrap() < 1e-15);
        assert!(plus.rho_s.distance(&pure(2, 1)).unwrap() < 1e-15);
        assert!(minus.rho_t.distance(&pure(3, 2)).unwrap() < 1e-15);
        assert!(plus.rho_t.distance(&pure(3, 0)).unwrap() < 1e-15);
        assert!(d.max_residual() < 1e-15);
        let obj = unconditional_object(&d).unwrap();
        assert!(obj.distance(&max_iop(2)).unwrap() < 1e-15);
    }

    #[test]
    fn separable_input_gives_one_branch() {
        let mut rng = random::seeded(32);
        let s = random::info_operator(&mut rng, 2);
        let joint = compose(&s, &pure(3, 1));
        let d = branch_decompose(&joint, &deflection_spec()).unwrap();
        assert_eq!(d.branches.len(), 1);
        assert_eq!(d.branches[0].label, "0");
        assert!((d.branches[0].weight - 1.0).abs() < 1e-14);
        assert!(d.branches[0].residual < 1e-14);
        let single = unconditional_object(&d).unwrap();
        assert!(single.distance(&s).unwrap() < 1e-14);
    }

    #[test]
    fn entangled_block_reports_residual() {
        // (|0,0> + |1,1>)/√2 with T's subspace a = {0, 1}: residual² = 4/16 + 2/4.
        let t = CondensationStructure::from_blocks([("a", 2), ("b", 2)], (0.0, 1.0)).unwrap();
        let spec = CompositeSpec::new(2, t).unwrap();
        let h = 0.5f64.sqrt();
        let mut v = vec![Complex64::new(0.0, 0.0); 8];
        v[0] = Complex64::new(h, 0.0);
        v[5] = Complex64::new(h, 0.0);
        let rho = InfoOperator::pure(&v).unwrap();
        let d = branch_decompose(&rho, &spec).unwrap();
        assert_eq!(d.branches.len(), 1);
        assert!((d.branches[0].residual - 0.75f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            branch_decompose(&max_iop(5), &deflection_spec()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn quantization_axis_mixtures_coincide() {
        let h = 0.5f64.sqrt();
        let right = [Complex64::new(h, 0.0), Complex64::new(h, 0.0)];
        let left = [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)];
        let z = (pure(2, 0).matrix() + pure(2, 1).matrix()).scale_real(0.5);
        let x = (InfoOperator::pure(&right).unwrap().matrix() + InfoOperator::pure(&left).unwrap().matrix())
            .scale_real(0.5);
        assert!(linalg::frobenius_dist(&z, &x).unwrap() <= 1e-12);
    }

    #[test]
    fn separate_recovers_object_factor() {
        let mut rng = random::seeded(33);
        let s = random::info_operator(&mut rng, 3);
        let t = random::info_operator(&mut rng, 2);
        let (sigma, residual) = separate(&compose(&s, &t), &t).unwrap();
        assert!(sigma.distance(&s).unwrap() < 1e-12);
        assert!(residual < 1e-12);
        let (_, residual) = separate(&random::info_operator(&mut rng, 6), &t).unwrap();
        assert!(residual > 1e-6);
    }

    #[test]
    fn reverse_time_development_of_unconditional_object() {
        // Developing each branch operator backwards and remixing equals
        // developing the remixed operator backwards.
        let d = branch_decompose(&after_interaction(), &deflection_spec()).unwrap();
        let mut rng = random::seeded(34);
        let h = HamiltonianOp::new(random::hermitian(&mut rng, 2)).unwrap();
        let back = propagator(&h, 2.0, 1.0, 1.0);
        let tilde_t2 = unconditional_object(&d).unwrap();
        let tilde_t1 = evolve(&tilde_t2, &back).unwrap();
        let mut acc = CMatrix::zeros(2, 2);
        for b in &d.branches {
            acc = &acc + &evolve(&b.rho_s, &back).unwrap().matrix().scale_real(b.weight);
        }
        assert!(linalg::frobenius_dist(&acc, tilde_t1.matrix()).unwrap() < 1e-14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn compose_is_additive_in_entropy(seed in any::<u64>(), ds in 1usize..4, dt in 1usize..4) {
            let mut rng = random::seeded(seed);
            let s = random::info_operator(&mut rng, ds);
            let t = random::info_operator(&mut rng, dt);
            let joint = compose(&s, &t);
            prop_assert!(InfoOperator::validate(joint.matrix()).is_ok());
            prop_assert!((iop::entropy(&joint) - iop::entropy(&s) - iop::entropy(&t)).abs() <= 1e-9);
        }

        #[test]
        fn branches_reconstruct_within_residuals(seed in any::<u64>()) {
            let mut rng = random::seeded(seed);
            let t = CondensationStructure::from_blocks([("a", 1), ("b", 2)], (0.0, 1.0)).unwrap();
            let spec = CompositeSpec::new(2, t).unwrap();
            let rho = random::info_operator(&mut rng, 6);
            let d = branch_decompose(&rho, &spec).unwrap();
            prop_assert!((d.total_weight() - 1.0).abs() <= 1e-9);
            let condensed = spec.lifted_structure().condense(&rho).unwrap();
            let err = linalg::frobenius_dist(&d.reconstruct().unwrap(), condensed.matrix()).unwrap();
            let bound: f64 = d.branches.iter().map(|b| b.residual).sum();
            prop_assert!(err <= bound + 1e-12);
        }

        #[test]
        fn separable_branches_give_traced_object(seed in any::<u64>()) {
            let mut rng = random::seeded(seed);
            let t = CondensationStructure::from_blocks([("a", 1), ("b", 2)], (0.0, 1.0)).unwrap();
            let spec = CompositeSpec::new(2, t.clone()).unwrap();
            let w = rng_weight(&mut rng);
            let sa = random::info_operator(&mut rng, 2);
            let sb = random::info_operator(&mut rng, 2);
            let ta = condensation::condition_on_label(&random::info_operator(&mut rng, 3), &t, "a").unwrap();
            let tb = condensation::condition_on_label(&random::info_operator(&mut rng, 3), &t, "b").unwrap();
            let m = &compose(&sa, &ta).matrix().scale_real(w) + &compose(&sb, &tb).matrix().scale_real(1.0 - w);
            let rho = InfoOperator::validate(&m).unwrap();
            let d = branch_decompose(&rho, &spec).unwrap();
            prop_assert!(d.max_residual() <= 1e-9);
            let obj = unconditional_object(&d).unwrap();
            let condensed = spec.lifted_structure().condense(&rho).unwrap();
            let traced = linalg::partial_trace(condensed.matrix(), 2, 3, Subsystem::B).unwrap();
            prop_assert!(linalg::frobenius_dist(obj.matrix(), &traced).unwrap() <= 1e-8);
        }
    }

    fn rng_weight(rng: &mut random::Rng64) -> f64 {
        use rand::Rng;
        rng.random_range(0.05..0.95)
    }
}
