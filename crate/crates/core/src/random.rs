//! Random operators for property checks and sampling.
//!
//! Every sampler takes the generator by `&mut`, so callers own the stream.
//! Reproducible runs use [`Rng64`], a ChaCha8 generator seeded from a `u64`;
//! [`stream`] derives independent sub-streams for parallel work by selecting
//! ChaCha stream number `index` under the same 256-bit key. Two generators
//! with the same seed and different stream indices never share output.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use rand::SeedableRng;

use crate::linalg::{self, CMatrix};
use crate::InfoOperator;

/// The seedable 64-bit generator used throughout the crate.
pub type Rng64 = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng64 {
    Rng64::seed_from_u64(seed)
}

/// Sub-stream `index` of `seed`.
pub fn stream(seed: u64, index: u64) -> Rng64 {
    let mut rng = seeded(seed);
    rng.set_stream(index);
    rng
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn complex_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Hermitian matrix from the Gaussian unitary ensemble (unnormalised).
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    complex_matrix(rng, n, n).hermitian_part()
}

/// Uniformly random unit vector.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| complex_normal(rng)).collect();
        let norm = linalg::vec_norm(&v);
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-random unitary: Gram-Schmidt on a Gaussian matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    'retry: loop {
        let g = complex_matrix(rng, n, n);
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        for j in 0..n {
            let mut v = g.column(j);
            // Two passes keep the columns orthogonal to working precision.
            for _ in 0..2 {
                for q in &cols {
                    let proj = linalg::inner(q, &v);
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= proj * qi;
                    }
                }
            }
            let norm = linalg::vec_norm(&v);
            if norm < 1e-8 {
                continue 'retry;
            }
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
        return CMatrix::from_fn(n, n, |i, j| cols[j][i]);
    }
}

/// Random block-diagonal unitary with the given block sizes.
pub fn block_unitary<R: Rng + ?Sized>(rng: &mut R, blocks: &[usize]) -> CMatrix {
    let n: usize = blocks.iter().sum();
    let mut u = CMatrix::zeros(n, n);
    let mut offset = 0;
    for &b in blocks {
        let block = unitary(rng, b);
        for i in 0..b {
            for j in 0..b {
                u[(offset + i, offset + j)] = block[(i, j)];
            }
        }
        offset += b;
    }
    u
}

/// Random spectrum on the probability simplex. With probability ¼ some
/// eigenvalues are zeroed so rank-deficient operators are also covered.
pub fn spectrum<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n)
        .map(|_| -Float::ln(rng.random::<f64>().max(f64::MIN_POSITIVE)))
        .collect();
    if n > 1 && rng.random_bool(0.25) {
        let zeros = rng.random_range(1..n);
        for x in w.iter_mut().take(zeros) {
            *x = 0.0;
        }
    }
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

/// Matrix of a random i-operator `U diag(p) U†`.
pub fn info_operator_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let p = spectrum(rng, n);
    let u = unitary(rng, n);
    CMatrix::from_real_diag(&p).conjugate_by(&u)
}

pub fn info_operator<R: Rng + ?Sized>(rng: &mut R, n: usize) -> InfoOperator {
    InfoOperator::validate(&info_operator_matrix(rng, n))
        .expect("random spectrum construction yields an i-operator")
}

/// Random pure i-operator `|ψ><ψ|`.
pub fn pure_operator<R: Rng + ?Sized>(rng: &mut R, n: usize) -> InfoOperator {
    let v = unit_vector(rng, n);
    InfoOperator::validate(&CMatrix::outer(&v, &v)).expect("rank-one projector is an i-operator")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = seeded(11);
        for n in 1..10 {
            assert!(unitary(&mut rng, n).unitarity_residual() < 1e-12);
        }
    }

    #[test]
    fn streams_differ_and_repeat() {
        let a: u64 = stream(5, 0).random();
        let b: u64 = stream(5, 1).random();
        let a2: u64 = stream(5, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, a2);
    }

    #[test]
    fn spectrum_sums_to_one() {
        let mut rng = seeded(2);
        for n in 1..9 {
            let p = spectrum(&mut rng, n);
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            assert!(p.iter().all(|&x| x >= 0.0));
        }
    }
}
