//! Range inclusion, majorization and factorization for a pair of operators
//! `L1: C^p -> C^n`, `L2: C^q -> C^n`. The three conditions
//!
//! * `R(L1) ⊆ R(L2)`,
//! * `L1 L1* <= lambda^2 L2 L2*` for some `lambda >= 0`,
//! * `L1 = L2 X` for some `X`,
//!
//! are equivalent; each has its own entry point here and they share one
//! tolerance so their verdicts agree.

use super::matrix::ComplexMatrix;
use super::subspace::range_projector;
use super::svd::{compressed_pencil_max, min_hermitian_eigenvalue, pseudo_inverse};
use crate::error::{KFrameError, Result};
use crate::tolerance::{Check, Tolerances};

/// Largest admissible disagreement between the two routes to `lambda`.
pub const MAJORIZATION_ROUTE_TOLERANCE: f64 = 1e-8;

/// Floor for the least eigenvalue of `lambda^2 L2 L2* - L1 L1*`,
/// relative to `max(1, |L1|^2)`.
pub const MAJORIZATION_PSD_TOLERANCE: f64 = 1e-9;

fn require_same_rows(l1: &ComplexMatrix, l2: &ComplexMatrix) -> Result<()> {
    if l1.rows() != l2.rows() {
        return Err(KFrameError::ShapeMismatch(format!(
            "operators map into spaces of dimension {} and {}",
            l1.rows(),
            l2.rows()
        )));
    }
    Ok(())
}

/// `|(I - pi_R(l2)) l1| <= tol * max(1, |l1|)`.
pub fn range_inclusion_check(l1: &ComplexMatrix, l2: &ComplexMatrix, tol: &Tolerances) -> Result<Check> {
    require_same_rows(l1, l2)?;
    let (range, _) = range_projector(l2, tol)?;
    Ok(tol.check(range.residual_of(l1), l1.norm()))
}

/// Minimal-norm solution `X = l2^dag l1` of `l2 X = l1`.
pub fn douglas_solve(l1: &ComplexMatrix, l2: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let inclusion = range_inclusion_check(l1, l2, tol)?;
    if !inclusion.passed {
        return Err(KFrameError::RangeNotIncluded {
            residual: inclusion.residual,
            threshold: inclusion.threshold,
        });
    }
    let x = &pseudo_inverse(l2, tol.rank)? * l1;
    let residual = (&(l2 * &x) - l1).norm();
    let threshold = tol.threshold(l1.norm());
    if residual > threshold {
        return Err(KFrameError::InternalConsistency(format!(
            "range inclusion accepted but |L2 X - L1| = {residual:e} > {threshold:e}"
        )));
    }
    Ok(x)
}

/// Least `lambda` with `L1 L1* <= lambda^2 L2 L2*`.
#[derive(Debug, Clone)]
pub struct Majorization {
    /// `|l2^dag l1|`.
    pub lambda: f64,
    /// Same constant from the compressed eigenvalue problem on `R(l2)`.
    pub lambda_eigen: f64,
    /// Least eigenvalue of `lambda^2 L2 L2* - L1 L1*`.
    pub min_eigenvalue: f64,
    pub solution: ComplexMatrix,
}

pub fn majorization_constant(l1: &ComplexMatrix, l2: &ComplexMatrix, tol: &Tolerances) -> Result<Majorization> {
    let x = douglas_solve(l1, l2, tol)?;
    let lambda = x.norm();

    let (range, _) = range_projector(l2, tol)?;
    let g1 = l1 * &l1.adjoint();
    let g2 = l2 * &l2.adjoint();
    let lambda_eigen = compressed_pencil_max(&g1, &g2, range.basis())?.max(0.0).sqrt();
    if (lambda - lambda_eigen).abs() > MAJORIZATION_ROUTE_TOLERANCE * lambda.max(1.0) {
        return Err(KFrameError::InternalConsistency(format!(
            "majorization constant disagrees between routes: {lambda} vs {lambda_eigen}"
        )));
    }

    let gap = &g2.scale_real(lambda * lambda) - &g1;
    let min_eigenvalue = if gap.is_empty() {
        0.0
    } else {
        min_hermitian_eigenvalue(&gap)?
    };
    let floor = -MAJORIZATION_PSD_TOLERANCE * g1.norm().max(1.0);
    if min_eigenvalue < floor {
        return Err(KFrameError::InternalConsistency(format!(
            "lambda^2 L2 L2* - L1 L1* has eigenvalue {min_eigenvalue:e} below {floor:e}"
        )));
    }
    Ok(Majorization {
        lambda,
        lambda_eigen,
        min_eigenvalue,
        solution: x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn shear() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
        ])
        .unwrap()
    }

    fn first_three_axes() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]])
            .unwrap()
    }

    #[test]
    fn identity_pair() {
        let i = ComplexMatrix::identity(3);
        assert!(range_inclusion_check(&i, &i, &tol()).unwrap().passed);
        assert!(douglas_solve(&i, &i, &tol()).unwrap().distance(&i) < 1e-15);
        assert!((majorization_constant(&i, &i, &tol()).unwrap().lambda - 1.0).abs() < 1e-14);
    }

    #[test]
    fn nothing_fits_in_zero() {
        let i = ComplexMatrix::identity(2);
        let z = ComplexMatrix::zeros(2, 2);
        let c = range_inclusion_check(&i, &z, &tol()).unwrap();
        assert!(!c.passed);
        assert!((c.residual - 1.0).abs() < 1e-15);
        let e1 = ComplexMatrix::from_real_rows(&[&[1.0], &[0.0]]).unwrap();
        assert!(matches!(
            douglas_solve(&e1, &z, &tol()),
            Err(KFrameError::RangeNotIncluded { .. })
        ));
    }

    #[test]
    fn shear_fits_in_first_three_axes() {
        let k = shear();
        let t = first_three_axes();
        assert!(range_inclusion_check(&k, &t, &tol()).unwrap().passed);
        let x = douglas_solve(&k, &t, &tol()).unwrap();
        let expected =
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0, 0.0], &[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0]])
                .unwrap();
        assert!(x.distance(&expected) < 1e-14);
    }

    #[test]
    fn projection_against_tilted_frame() {
        // K = diag(1, 0); T has columns (-1,1)/sqrt2 twice and (1,1)/sqrt2
        let s = 0.5f64.sqrt();
        let k = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let t = ComplexMatrix::from_real_rows(&[&[-s, -s, s], &[s, s, s]]).unwrap();
        let m = majorization_constant(&k, &t, &tol()).unwrap();
        assert!((m.lambda - 3f64.sqrt() / 2.0).abs() < 1e-14);
        assert!((m.lambda_eigen - m.lambda).abs() < 1e-12);
        assert!(m.min_eigenvalue > -1e-12);
    }

    #[test]
    fn scaling_constant() {
        let i = ComplexMatrix::identity(2);
        let m = majorization_constant(&i.scale_real(2.0), &i, &tol()).unwrap();
        assert!((m.lambda - 2.0).abs() < 1e-14);
    }

    #[test]
    fn shape_mismatch() {
        assert!(matches!(
            range_inclusion_check(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3), &tol()),
            Err(KFrameError::ShapeMismatch(_))
        ));
    }
}
