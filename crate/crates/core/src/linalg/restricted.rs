use super::matrix::{ComplexMatrix, ComplexVector};
use super::subspace::Subspace;
use super::svd::svd_decompose;
use crate::error::{KFrameError, Result};
use crate::tolerance::{Check, Tolerances};

/// The inverse of `s` viewed as a bijection `V -> s(V)`.
///
/// Stored as an ambient operator `Q (s Q)^dag`, where `Q` is an orthonormal
/// basis of `V`. On `s(V)` it inverts `s|_V`; it annihilates `s(V)^⊥`, so
/// as an ambient matrix it equals `(s|_V)^{-1} pi_{s(V)}`.
#[derive(Debug, Clone)]
pub struct RestrictedMap {
    domain: Subspace,
    codomain: Subspace,
    matrix: ComplexMatrix,
    singular_values: Vec<f64>,
}

impl RestrictedMap {
    /// `s(V)`.
    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    /// `V`.
    pub fn codomain(&self) -> &Subspace {
        &self.codomain
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, y: &ComplexVector) -> ComplexVector {
        self.matrix.apply(y)
    }

    /// Singular values of `s|_V` in descending order.
    pub fn restriction_singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    /// `(min, max)` of `|map y| / |y|` over nonzero `y` in `s(V)`.
    pub fn gain_range(&self) -> (f64, f64) {
        match (self.singular_values.first(), self.singular_values.last()) {
            (Some(&hi), Some(&lo)) => (1.0 / hi, 1.0 / lo),
            _ => (0.0, 0.0),
        }
    }

    /// Operator norm of the inverse.
    pub fn norm(&self) -> f64 {
        self.gain_range().1
    }

    /// Checks `lower |y| <= |map y| <= upper |y|` on the domain, with
    /// relative slack `tol.identity`.
    pub fn gain_within(&self, lower: f64, upper: f64, tol: &Tolerances) -> Check {
        let (lo, hi) = self.gain_range();
        let below = (lower - lo).max(0.0) / lower.abs().max(1.0);
        let above = (hi - upper).max(0.0) / upper.abs().max(1.0);
        Check::new(below.max(above), tol.identity)
    }
}

/// Inverse of `s` restricted to `v`, mapping `s(v)` back onto `v`.
pub fn restricted_inverse(s: &ComplexMatrix, v: &Subspace, tol: &Tolerances) -> Result<RestrictedMap> {
    s.require_square("restricted operator")?;
    if s.cols() != v.ambient_dim() {
        return Err(KFrameError::ShapeMismatch(format!(
            "operator on C^{} restricted to a subspace of C^{}",
            s.cols(),
            v.ambient_dim()
        )));
    }
    if !s.is_finite() {
        return Err(KFrameError::NonFiniteInput);
    }
    let dim = v.dim();
    if dim == 0 {
        return Ok(RestrictedMap {
            domain: Subspace::zero(s.rows()),
            codomain: v.clone(),
            matrix: ComplexMatrix::zeros(s.cols(), s.rows()),
            singular_values: Vec::new(),
        });
    }
    let sq = s * v.basis();
    let f = svd_decompose(&sq, tol.rank)?;
    if f.rank < dim {
        return Err(KFrameError::RankDeficientRestriction { rank: f.rank, dim });
    }
    let matrix = v.basis() * &f.pseudo_inverse();
    Ok(RestrictedMap {
        domain: Subspace::from_basis_unchecked(f.range_basis()),
        codomain: v.clone(),
        matrix,
        singular_values: f.singular_values,
    })
}
