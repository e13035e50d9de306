//! Singular value and Hermitian eigen decompositions.
//!
//! The iterative kernels come from faer; this module fixes the ordering,
//! numerical rank and the reconstruction guarantees the rest of the crate
//! relies on.

use faer::Mat;
use nalgebra::DMatrix;

use super::matrix::{ComplexMatrix, C64};
use crate::error::{KFrameError, Result};
use crate::tolerance::RankTolerance;

/// Thin SVD `M = U diag(s) V*` with numerical rank.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    /// `rows x min(rows, cols)`, orthonormal columns.
    pub left_vectors: ComplexMatrix,
    /// Descending, nonnegative.
    pub singular_values: Vec<f64>,
    /// `cols x min(rows, cols)`, orthonormal columns.
    pub right_vectors: ComplexMatrix,
    pub rank: usize,
    pub rank_tolerance: f64,
}

impl SvdFactors {
    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Smallest singular value counted in the rank; zero when rank is zero.
    pub fn sigma_min_nonzero(&self) -> f64 {
        if self.rank == 0 {
            0.0
        } else {
            self.singular_values[self.rank - 1]
        }
    }

    /// Orthonormal basis of the column space.
    pub fn range_basis(&self) -> ComplexMatrix {
        self.left_vectors.leading_columns(self.rank)
    }

    /// Orthonormal basis of the row space (range of the adjoint).
    pub fn corange_basis(&self) -> ComplexMatrix {
        self.right_vectors.leading_columns(self.rank)
    }

    /// `U diag(s) V*` using every singular value.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let s: Vec<C64> = self.singular_values.iter().map(|&x| C64::new(x, 0.0)).collect();
        &self.left_vectors.scale_columns(&s) * &self.right_vectors.adjoint()
    }

    /// Moore-Penrose pseudo-inverse `V_r diag(1/s_r) U_r*`.
    pub fn pseudo_inverse(&self) -> ComplexMatrix {
        let inv: Vec<C64> = self.singular_values[..self.rank]
            .iter()
            .map(|&x| C64::new(1.0 / x, 0.0))
            .collect();
        let v = self.corange_basis().scale_columns(&inv);
        &v * &self.range_basis().adjoint()
    }
}

/// Relative Frobenius residual allowed when reconstructing from factors.
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-10;

fn to_faer(m: &DMatrix<C64>) -> Mat<C64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, C64>) -> DMatrix<C64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Thin SVD with singular values sorted in descending order.
pub fn svd_decompose(m: &ComplexMatrix, policy: RankTolerance) -> Result<SvdFactors> {
    let (rows, cols) = m.shape();
    if m.is_empty() {
        return Err(KFrameError::EmptyMatrix { rows, cols });
    }
    if !m.is_finite() {
        return Err(KFrameError::NonFiniteInput);
    }
    let svd = to_faer(m.as_dmatrix())
        .thin_svd()
        .map_err(|_| KFrameError::DecompositionFailed)?;
    let raw: Vec<f64> = svd.S().column_vector().iter().map(|z| z.re).collect();
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| raw[b].total_cmp(&raw[a]));
    let u = from_faer(svd.U());
    let v = from_faer(svd.V());
    let pick = |x: &DMatrix<C64>| DMatrix::from_fn(x.nrows(), order.len(), |i, j| x[(i, order[j])]);
    let factors_u = pick(&u);
    let factors_v = pick(&v);
    let singular_values: Vec<f64> = order.iter().map(|&k| raw[k].max(0.0)).collect();
    let sigma_max = singular_values.first().copied().unwrap_or(0.0);
    let rank_tolerance = policy.threshold(sigma_max, rows, cols);
    let rank = singular_values.iter().filter(|&&s| s > rank_tolerance).count();
    let factors = SvdFactors {
        left_vectors: ComplexMatrix::wrap(factors_u),
        singular_values,
        right_vectors: ComplexMatrix::wrap(factors_v),
        rank,
        rank_tolerance,
    };
    let fro = m.frobenius_norm();
    if (&factors.reconstruct() - m).frobenius_norm() > RECONSTRUCTION_TOLERANCE * fro.max(1.0) {
        return Err(KFrameError::DecompositionFailed);
    }
    Ok(factors)
}

/// Numerical rank; zero for empty matrices.
pub fn rank(m: &ComplexMatrix, policy: RankTolerance) -> Result<usize> {
    if m.is_empty() {
        return Ok(0);
    }
    Ok(svd_decompose(m, policy)?.rank)
}

/// Moore-Penrose pseudo-inverse. An empty matrix maps to the empty
/// matrix of transposed shape.
pub fn pseudo_inverse(m: &ComplexMatrix, policy: RankTolerance) -> Result<ComplexMatrix> {
    if m.is_empty() {
        if !m.is_finite() {
            return Err(KFrameError::NonFiniteInput);
        }
        return Ok(ComplexMatrix::zeros(m.cols(), m.rows()));
    }
    Ok(svd_decompose(m, policy)?.pseudo_inverse())
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    m.require_square("hermitian_eigen input")?;
    let n = m.rows();
    if n == 0 {
        return Ok((Vec::new(), ComplexMatrix::zeros(0, 0)));
    }
    if !m.is_finite() {
        return Err(KFrameError::NonFiniteInput);
    }
    let h = to_faer(m.hermitian_part().as_dmatrix());
    let eig = h
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| KFrameError::DecompositionFailed)?;
    let raw: Vec<f64> = eig.S().column_vector().iter().map(|z| z.re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]));
    let values = order.iter().map(|&k| raw[k]).collect();
    let u = eig.U();
    let vectors = DMatrix::from_fn(n, n, |i, j| u[(i, order[j])]);
    Ok((values, ComplexMatrix::wrap(vectors)))
}

/// Eigenvalues of the Hermitian part, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(m)?.0)
}

pub fn min_hermitian_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.first().copied().unwrap_or(0.0))
}

/// Largest value of `<num x, x> / <den x, x>` over nonzero `x` in the span
/// of the orthonormal columns of `basis`, for Hermitian `num`, `den` with
/// `den` positive definite on that span.
///
/// Solved as the top eigenvalue of `D^{-1/2} N D^{-1/2}` where `N`, `D` are
/// the compressions of `num`, `den` to the span. Returns zero for an empty
/// span.
pub fn compressed_pencil_max(num: &ComplexMatrix, den: &ComplexMatrix, basis: &ComplexMatrix) -> Result<f64> {
    if basis.cols() == 0 {
        return Ok(0.0);
    }
    let qa = basis.adjoint();
    let n_c = &(&qa * num) * basis;
    let d_c = &(&qa * den) * basis;
    let (d_vals, d_vecs) = hermitian_eigen(&d_c)?;
    if d_vals[0] <= 0.0 {
        return Err(KFrameError::InternalConsistency(format!(
            "pencil denominator is not positive definite on the span (min eigenvalue {:e})",
            d_vals[0]
        )));
    }
    let inv_sqrt: Vec<C64> = d_vals.iter().map(|&x| C64::new(x.sqrt().recip(), 0.0)).collect();
    let w = d_vecs.scale_columns(&inv_sqrt);
    let reduced = &(&w.adjoint() * &n_c) * &w;
    let vals = hermitian_eigenvalues(&reduced)?;
    Ok(*vals.last().expect("nonempty span"))
}
