//! Seeded random generators for probes and identity suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::DenseMatrix;
use crate::scalar::Scalar;
use crate::seq::FinTailSeq;
use crate::spaces::{DualPoint, PairedPoint, PairedSpace};

pub type LabRng = ChaCha8Rng;

pub fn rng(seed: u64) -> LabRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec<T: Scalar>(rng: &mut LabRng, n: usize, scale: f64) -> Vec<T> {
    (0..n)
        .map(|_| T::lit(rng.gen_range(-scale..=scale)))
        .collect()
}

pub fn random_seq<T: Scalar>(rng: &mut LabRng, n: usize, scale: f64) -> FinTailSeq<T> {
    FinTailSeq::finite(random_vec(rng, n, scale))
}

/// Uniform point of `[-scale, scale]^{2n}` in `R^n x R^n` with Euclidean norms.
pub fn random_paired<T: Scalar>(rng: &mut LabRng, n: usize, scale: f64) -> PairedPoint<T> {
    PairedPoint::euclidean(&random_vec(rng, n, scale), &random_vec(rng, n, scale))
        .expect("matching dimensions")
}

pub fn random_paired_in<T: Scalar>(
    rng: &mut LabRng,
    space: PairedSpace,
    n: usize,
    scale: f64,
) -> PairedPoint<T> {
    let n = space.dim().unwrap_or(n);
    PairedPoint {
        x: random_seq(rng, n, scale),
        xstar: random_seq(rng, n, scale),
        space,
    }
}

pub fn random_dual<T: Scalar>(rng: &mut LabRng, n: usize, scale: f64) -> DualPoint<T> {
    DualPoint::euclidean(&random_vec(rng, n, scale), &random_vec(rng, n, scale))
        .expect("matching dimensions")
}

/// Random `n x n` matrix whose symmetric part is positive semidefinite:
/// `B B^T + (C - C^T)`, i.e. monotone as a linear map.
pub fn random_monotone_matrix<T: Scalar>(rng: &mut LabRng, n: usize, scale: f64) -> DenseMatrix<T> {
    let b = DenseMatrix::from_fn(n, n, |_, _| T::lit(rng.gen_range(-scale..=scale)));
    let c = DenseMatrix::from_fn(n, n, |_, _| T::lit(rng.gen_range(-scale..=scale)));
    let mut m = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let psd: T = (0..n).map(|k| b.get(i, k) * b.get(j, k)).sum();
            m.set(i, j, psd + c.get(i, j) - c.get(j, i));
        }
    }
    m
}
