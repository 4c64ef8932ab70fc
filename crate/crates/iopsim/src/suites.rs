//! Randomised invariant suites shared by `iopsim selftest` and the
//! acceptance tests.
//!
//! Every suite draws from its own ChaCha stream derived from the seed, so a
//! failure is reproducible from `(seed, suite)` alone.

use std::fmt;
use std::time::{Duration, Instant};

use iopsim_core::condensation::{self, CondensationStructure};
use iopsim_core::dynamics::{self, UnitaryOp};
use iopsim_core::iop::{self, max_iop, InfoOperator};
use iopsim_core::linalg::CMatrix;
use iopsim_core::measurement::{self, MeasurementSystem};
use iopsim_core::random::{self, Rng64};
use rand::Rng;

/// Outcome of one property over many random cases.
#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    /// Largest residual seen.
    pub worst: f64,
    pub tolerance: f64,
    /// Cases that raised an error instead of producing a residual.
    pub errors: usize,
    pub elapsed: Duration,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.errors == 0 && self.worst <= self.tolerance
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} cases, worst {:.3e} (tol {:.1e}), {} errors, {:.2}s",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.worst,
            self.tolerance,
            self.errors,
            self.elapsed.as_secs_f64()
        )
    }
}

struct Tracker {
    name: String,
    cases: usize,
    worst: f64,
    tolerance: f64,
    errors: usize,
}

impl Tracker {
    fn new(name: String, tolerance: f64) -> Self {
        Self {
            name,
            cases: 0,
            worst: 0.0,
            tolerance,
            errors: 0,
        }
    }

    fn record(&mut self, r: iopsim_core::Result<f64>) {
        self.cases += 1;
        match r {
            // NaN must fail, so it is folded in as +inf.
            Ok(x) => self.worst = self.worst.max(if x.is_nan() { f64::INFINITY } else { x }),
            Err(_) => self.errors += 1,
        }
    }

    fn finish(self, elapsed: Duration) -> SuiteResult {
        SuiteResult {
            name: self.name,
            cases: self.cases,
            worst: self.worst,
            tolerance: self.tolerance,
            errors: self.errors,
            elapsed,
        }
    }
}

pub const PROPERTY_DIMS: [usize; 4] = [2, 3, 4, 8];

/// Random Kraus family with `outcomes` labels on dimension `n`: the column
/// blocks of a random isometry `C^n → C^(n·outcomes)`.
fn random_kraus(rng: &mut Rng64, n: usize, outcomes: usize) -> MeasurementSystem {
    let big = random::unitary(rng, n * outcomes);
    let kraus = (0..outcomes)
        .map(|m| CMatrix::from_fn(n, n, |i, j| big[(m * n + i, j)]))
        .collect();
    let labels = (0..outcomes).map(|m| format!("m{m}")).collect();
    let values = (0..outcomes).map(|_| rng.random_range(-2.0..2.0)).collect();
    MeasurementSystem::new(labels, kraus, values).expect("well-formed Kraus family")
}

/// The operator-level properties over `cases` random i-operators of
/// dimension `d`.
pub fn operator_properties(d: usize, cases: usize, seed: u64) -> Vec<SuiteResult> {
    let start = Instant::now();
    let mut rng = random::stream(seed, d as u64);
    let mut validity = Tracker::new(format!("d={d} evolve preserves validity"), 0.0);
    let mut entropy = Tracker::new(format!("d={d} entropy invariant under unitaries"), 1e-9);
    let mut from_max = Tracker::new(format!("d={d} max operator contracts to any operator"), 1e-8);
    let mut from_mix = Tracker::new(format!("d={d} mixture contracts to its component"), 1e-8);
    let mut normalization = Tracker::new(format!("d={d} Kraus completeness gives normalised probabilities"), 1e-9);
    let mut expectation = Tracker::new(format!("d={d} sum f(m) p^m equals tr(F rho)"), 1e-9);

    for _ in 0..cases {
        let rho = random::info_operator(&mut rng, d);
        let u = UnitaryOp::new(random::unitary(&mut rng, d)).expect("random unitary");

        let evolved = dynamics::evolve(&rho, &u);
        validity.record(evolved.as_ref().map(|_| 0.0).map_err(Clone::clone));
        entropy.record(evolved.map(|e| (e.entropy() - rho.entropy()).abs()));

        let k = iop::contraction_from_max(&rho);
        from_max.record(iop::contract(&max_iop(d), &k).and_then(|r| r.distance(&rho)));

        let other = random::info_operator(&mut rng, d);
        let w = rng.random_range(0.05..0.95);
        from_mix.record((|| {
            let whole = InfoOperator::validate(&(&rho.matrix().scale_real(w) + &other.matrix().scale_real(1.0 - w)))?;
            let k = iop::contraction_from_mixture(&whole, &rho)?;
            iop::contract(&whole, &k)?.distance(&rho)
        })());

        let outcomes = rng.random_range(1..=4);
        let ms = random_kraus(&mut rng, d, outcomes);
        let probs = measurement::outcome_probabilities(&ms, &rho);
        normalization.record(probs.as_ref().map(|p| (p.iter().map(|(_, x)| x).sum::<f64>() - 1.0).abs()).map_err(Clone::clone));
        expectation.record((|| {
            let by_values: f64 = probs?.iter().zip(ms.values()).map(|((_, p), f)| p * f).sum();
            let f = measurement::observable(&ms)?;
            Ok((measurement::expectation(&f, &rho)? - by_values).abs())
        })());
    }
    let elapsed = start.elapsed();
    [validity, entropy, from_max, from_mix, normalization, expectation]
        .into_iter()
        .map(|t| t.finish(elapsed))
        .collect()
}

/// Random partition of `n` into at least two positive block sizes.
fn random_blocks(rng: &mut Rng64, n: usize) -> Vec<usize> {
    let mut blocks = Vec::new();
    let mut left = n;
    while left > 0 {
        let max = if blocks.is_empty() { left.saturating_sub(1).max(1) } else { left };
        let b = rng.random_range(1..=max);
        blocks.push(b);
        left -= b;
    }
    blocks
}

/// Label probabilities under repeated block-diagonal development.
pub fn condensation_invariance(trials: usize, steps: usize, seed: u64) -> SuiteResult {
    let start = Instant::now();
    let mut rng = random::stream(seed, 100);
    let mut t = Tracker::new(
        format!("label probabilities constant over {steps} block-diagonal steps"),
        1e-9,
    );
    for _ in 0..trials {
        let n = rng.random_range(2..=8);
        let blocks = random_blocks(&mut rng, n);
        t.record((|| {
            let labels: Vec<(String, usize)> = blocks.iter().enumerate().map(|(i, b)| (format!("b{i}"), *b)).collect();
            let c = CondensationStructure::from_blocks(labels, (0.0, steps as f64))?;
            let u = UnitaryOp::new(random::block_unitary(&mut rng, &blocks))?;
            let mut rho = random::info_operator(&mut rng, n);
            let initial: Vec<f64> = condensation::label_probabilities(&rho, &c)?.into_iter().map(|(_, p)| p).collect();
            let mut drift = 0.0f64;
            for _ in 0..steps {
                rho = dynamics::evolve(&rho, &u)?;
                for ((_, p), q) in condensation::label_probabilities(&rho, &c)?.into_iter().zip(&initial) {
                    drift = drift.max((p - q).abs());
                }
            }
            Ok(drift)
        })());
    }
    t.finish(start.elapsed())
}

/// Sampled frequencies of the projective z-measurement against the Born
/// probabilities, in binomial standard errors.
pub fn monte_carlo(samples: usize, seed: u64) -> SuiteResult {
    let start = Instant::now();
    let mut rng = random::stream(seed, 200);
    let z = CondensationStructure::from_blocks([("up", 1), ("down", 1)], (0.0, 1.0)).expect("z structure");
    let ms = MeasurementSystem::projective(&z, vec![0.5, -0.5]).expect("z measurement");
    let mut states = vec![max_iop(2)];
    states.extend((0..3).map(|_| random::pure_operator(&mut rng, 2)));
    let mut t = Tracker::new(format!("z-measurement frequencies at n = {samples}"), 4.0);
    for (i, rho) in states.iter().enumerate() {
        t.record((|| {
            let exact = measurement::outcome_probabilities(&ms, rho)?;
            let mut stream = random::stream(seed, 300 + i as u64);
            let est = measurement::estimate_probabilities_with(&ms, rho, samples, &mut stream)?;
            Ok(exact
                .iter()
                .zip(&est)
                .map(|((_, p), (_, e))| measurement::standard_errors(*e, *p, samples))
                .fold(0.0, f64::max))
        })());
    }
    t.finish(start.elapsed())
}

/// Every suite at the acceptance sizes.
pub fn run_all(cases: usize, seed: u64) -> Vec<SuiteResult> {
    let mut out = Vec::new();
    for d in PROPERTY_DIMS {
        out.extend(operator_properties(d, cases, seed));
    }
    out.push(condensation_invariance(cases, 100, seed));
    out.push(monte_carlo(100_000, seed));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_property_run_passes() {
        for r in operator_properties(3, 50, 1) {
            assert!(r.passed(), "{r}");
            assert_eq!(r.cases, 50);
        }
    }

    #[test]
    fn block_partitions_cover_dimension() {
        let mut rng = random::seeded(4);
        for _ in 0..200 {
            let n = rng.random_range(2..=8);
            let b = random_blocks(&mut rng, n);
            assert_eq!(b.iter().sum::<usize>(), n);
            assert!(b.len() >= 2);
        }
    }

    #[test]
    fn tracker_counts_nan_as_failure() {
        let mut t = Tracker::new("x".into(), 1.0);
        t.record(Ok(f64::NAN));
        assert!(!t.finish(Duration::ZERO).passed());
    }

    #[test]
    fn monte_carlo_is_seeded() {
        let a = monte_carlo(1000, 9);
        let b = monte_carlo(1000, 9);
        assert_eq!(a.worst, b.worst);
    }
}
