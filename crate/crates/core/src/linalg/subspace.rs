use super::matrix::ComplexMatrix;
use super::svd::svd_decompose;
use crate::error::{KFrameError, Result};
use crate::tolerance::{RankTolerance, Tolerances};

/// Subspace of `C^n` held by an orthonormal basis (possibly empty).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: ComplexMatrix,
}

impl Subspace {
    /// Accepts `basis` if its columns are orthonormal to `1e-10`.
    pub fn from_orthonormal(basis: ComplexMatrix) -> Result<Self> {
        let k = basis.cols();
        let gram = &basis.adjoint() * &basis;
        let err = gram.distance(&ComplexMatrix::identity(k));
        if err > 1e-10 {
            return Err(KFrameError::ShapeMismatch(format!(
                "basis columns are not orthonormal (|B*B - I| = {err:e})"
            )));
        }
        Ok(Subspace {
            ambient_dim: basis.rows(),
            basis,
        })
    }

    pub(crate) fn from_basis_unchecked(basis: ComplexMatrix) -> Self {
        Subspace {
            ambient_dim: basis.rows(),
            basis,
        }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: ComplexMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: ComplexMatrix::identity(ambient_dim),
        }
    }

    /// Span of the columns of `m`.
    pub fn span_of(m: &ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        Ok(range_projector(m, tol)?.0)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    /// Orthogonal projection onto the subspace.
    pub fn projector(&self) -> ComplexMatrix {
        &self.basis * &self.basis.adjoint()
    }

    /// Spectral norm of the component of `m`'s columns outside the subspace.
    pub fn residual_of(&self, m: &ComplexMatrix) -> f64 {
        let inside = &self.basis * &(&self.basis.adjoint() * m);
        (m - &inside).norm()
    }

    pub fn orthogonal_complement(&self) -> Self {
        let n = self.ambient_dim;
        if self.dim() == 0 {
            return Subspace::full(n);
        }
        if self.dim() == n {
            return Subspace::zero(n);
        }
        let comp = &ComplexMatrix::identity(n) - &self.projector();
        // singular values of a projector are exactly 0 or 1
        let f =
            svd_decompose(&comp, RankTolerance::Absolute(0.5)).expect("projector complement is finite and nonempty");
        Subspace::from_basis_unchecked(f.range_basis())
    }
}

/// Orthonormal basis of `R(m)` and the orthogonal projection onto it.
pub fn range_projector(m: &ComplexMatrix, tol: &Tolerances) -> Result<(Subspace, ComplexMatrix)> {
    if !m.is_finite() {
        return Err(KFrameError::NonFiniteInput);
    }
    let space = if m.is_empty() {
        Subspace::zero(m.rows())
    } else {
        Subspace::from_basis_unchecked(svd_decompose(m, tol.rank)?.range_basis())
    };
    let p = space.projector();
    Ok((space, p))
}

/// Kernel of `m` as a subspace of `C^{cols}`.
pub fn null_space(m: &ComplexMatrix, tol: &Tolerances) -> Result<Subspace> {
    let (corange, _) = range_projector(&m.adjoint(), tol)?;
    Ok(corange.orthogonal_complement())
}
