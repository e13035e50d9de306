use super::matrix::ComplexMatrix;
use super::subspace::Subspace;
use super::svd::svd_decompose;
use crate::error::{KFrameError, Result};
use crate::tolerance::Tolerances;

/// Outcome of the perturbation test "if `|T - U| < |T^{-1}|^{-1}` then `U`
/// is invertible".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginReport {
    /// `|T - U|`.
    pub distance: f64,
    /// `|T^{-1}|^{-1}`, the smallest singular value of `T`.
    pub margin: f64,
    /// The sufficient condition `distance < margin` holds.
    pub sufficient: bool,
    /// Smallest singular value of `U`.
    pub perturbed_sigma_min: f64,
    /// Final verdict; when the sufficient condition fails this comes from
    /// a direct rank test on `U`.
    pub invertible: bool,
}

fn margin_of(t: &ComplexMatrix, u: &ComplexMatrix, tol: &Tolerances) -> Result<MarginReport> {
    let ft = svd_decompose(t, tol.rank)?;
    let cols = t.cols();
    if ft.rank < cols {
        return Err(KFrameError::NotInvertible {
            sigma_min: ft.singular_values.last().copied().unwrap_or(0.0),
        });
    }
    let margin = ft.singular_values[cols - 1];
    let distance = t.distance(u);
    let fu = svd_decompose(u, tol.rank)?;
    let sufficient = distance < margin;
    let direct = fu.rank == cols;
    if sufficient && !direct {
        return Err(KFrameError::InternalConsistency(format!(
            "perturbation {distance:e} below margin {margin:e} but perturbed operator is singular"
        )));
    }
    Ok(MarginReport {
        distance,
        margin,
        sufficient,
        perturbed_sigma_min: fu.singular_values.last().copied().unwrap_or(0.0),
        invertible: sufficient || direct,
    })
}

/// Perturbation test for square `t`, `u`.
pub fn neumann_invertibility_margin(t: &ComplexMatrix, u: &ComplexMatrix, tol: &Tolerances) -> Result<MarginReport> {
    t.require_square("T")?;
    t.require_same_shape(u, "T and U")?;
    margin_of(t, u, tol)
}

/// The same test for `t|_V` and `u|_V` as maps `V -> C^n`: invertibility
/// means being bijective onto the image, i.e. injective on `V`.
pub fn restricted_invertibility_margin(
    t: &ComplexMatrix,
    u: &ComplexMatrix,
    v: &Subspace,
    tol: &Tolerances,
) -> Result<MarginReport> {
    t.require_same_shape(u, "T and U")?;
    if t.cols() != v.ambient_dim() {
        return Err(KFrameError::ShapeMismatch(format!(
            "operator on C^{} restricted to a subspace of C^{}",
            t.cols(),
            v.ambient_dim()
        )));
    }
    if v.dim() == 0 {
        return Ok(MarginReport {
            distance: 0.0,
            margin: f64::INFINITY,
            sufficient: true,
            perturbed_sigma_min: f64::INFINITY,
            invertible: true,
        });
    }
    margin_of(&(t * v.basis()), &(u * v.basis()), tol)
}
