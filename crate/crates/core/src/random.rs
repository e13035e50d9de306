//! Seeded generators for property suites. Everything is driven by
//! `ChaCha8Rng` so that a seed fixes every instance bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::frames::Frame;
use crate::linalg::{svd_decompose, ComplexMatrix, OperatorEnv, C64};
use crate::multipliers::Symbol;
use crate::tolerance::{RankTolerance, Tolerances};

pub const DEFAULT_SEED: u64 = 0x6b66_7261_6d65;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian, `E|z|^2 = 1`.
pub fn complex_normal<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn complex_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let entries = (0..rows * cols).map(|_| complex_normal(rng)).collect();
    ComplexMatrix::from_row_major(rows, cols, entries).expect("finite entries")
}

pub fn real_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let entries = (0..rows * cols)
        .map(|_| C64::new(rng.sample(StandardNormal), 0.0))
        .collect();
    ComplexMatrix::from_row_major(rows, cols, entries).expect("finite entries")
}

/// Generic `rows x cols` matrix of rank `rank` (a product of Gaussian
/// factors).
pub fn matrix_of_rank<R: Rng>(rng: &mut R, rows: usize, cols: usize, rank: usize) -> ComplexMatrix {
    if rank == 0 {
        return ComplexMatrix::zeros(rows, cols);
    }
    &complex_matrix(rng, rows, rank) * &complex_matrix(rng, rank, cols)
}

/// Orthonormal basis of a random `dim`-dimensional subspace containing the
/// columns of `seed_cols`.
pub fn subspace_containing<R: Rng>(rng: &mut R, seed_cols: &ComplexMatrix, dim: usize) -> ComplexMatrix {
    let n = seed_cols.rows();
    let extra = dim.saturating_sub(seed_cols.cols());
    let stacked = seed_cols
        .hstack(&complex_matrix(rng, n, extra))
        .expect("same row count");
    let f = svd_decompose(&stacked, RankTolerance::default()).expect("finite");
    f.range_basis().leading_columns(dim.min(f.rank))
}

/// A random K-frame with its operator: `K` of rank in `1..=n`, and `N`
/// vectors whose span is a random subspace containing `R(K)`.
#[derive(Debug, Clone)]
pub struct KFrameInstance {
    pub frame: Frame,
    pub env: OperatorEnv,
}

pub fn k_frame_instance<R: Rng>(rng: &mut R, max_dim: usize, max_len: usize) -> KFrameInstance {
    let n = rng.random_range(1..=max_dim);
    let big_n = rng.random_range(1..=max_len);
    k_frame_instance_with(rng, n, big_n)
}

pub fn k_frame_instance_with<R: Rng>(rng: &mut R, n: usize, big_n: usize) -> KFrameInstance {
    let tol = Tolerances::default();
    let r = rng.random_range(1..=n.min(big_n));
    let k = matrix_of_rank(rng, n, n, r);
    let env = OperatorEnv::new(k, &tol).expect("finite operator");
    let span_dim = rng.random_range(env.rank()..=n.min(big_n));
    let basis = subspace_containing(rng, env.range_k().basis(), span_dim);
    let coeffs = complex_matrix(rng, basis.cols(), big_n);
    let frame = Frame::from_synthesis(&basis * &coeffs).expect("nonempty");
    KFrameInstance { frame, env }
}

/// Moduli uniform in `[lower, upper]` with uniform random phases.
pub fn semi_normalized_symbol<R: Rng>(rng: &mut R, len: usize, lower: f64, upper: f64) -> Symbol {
    let values = (0..len)
        .map(|_| {
            let r = rng.random_range(lower..=upper);
            let t = rng.random_range(0.0..std::f64::consts::TAU);
            C64::from_polar(r, t)
        })
        .collect();
    Symbol::new(values).expect("finite symbol")
}

/// Real positive symbol with values in `[lower, upper]`.
pub fn positive_symbol<R: Rng>(rng: &mut R, len: usize, lower: f64, upper: f64) -> Symbol {
    let values = (0..len)
        .map(|_| C64::new(rng.random_range(lower..=upper), 0.0))
        .collect();
    Symbol::new(values).expect("finite symbol")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::k_frame_check;

    #[test]
    fn same_seed_same_instance() {
        let a = k_frame_instance(&mut rng(7), 6, 9);
        let b = k_frame_instance(&mut rng(7), 6, 9);
        assert_eq!(a.frame, b.frame);
        assert_eq!(a.env.k(), b.env.k());
    }

    #[test]
    fn instances_are_k_frames() {
        let mut g = rng(11);
        let tol = Tolerances::default();
        for _ in 0..40 {
            let inst = k_frame_instance(&mut g, 6, 9);
            k_frame_check(&inst.frame, &inst.env, &tol).unwrap();
        }
    }

    #[test]
    fn rank_is_as_requested() {
        let mut g = rng(3);
        let m = matrix_of_rank(&mut g, 5, 4, 2);
        assert_eq!(crate::linalg::rank(&m, RankTolerance::default()).unwrap(), 2);
    }
}
