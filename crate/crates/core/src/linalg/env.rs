use super::matrix::ComplexMatrix;
use super::subspace::Subspace;
use super::svd::svd_decompose;
use crate::error::{KFrameError, Result};
use crate::tolerance::Tolerances;

/// An operator `K` on `C^n` together with everything derived from its SVD:
/// `K*`, `K^dag`, orthonormal bases of `R(K)` and `R(K*)` and the
/// projections onto them.
#[derive(Debug, Clone)]
pub struct OperatorEnv {
    k: ComplexMatrix,
    k_adjoint: ComplexMatrix,
    k_pinv: ComplexMatrix,
    range_k: Subspace,
    range_k_adjoint: Subspace,
    proj_range_k: ComplexMatrix,
    proj_range_k_adjoint: ComplexMatrix,
    norm: f64,
    pinv_norm: f64,
}

impl OperatorEnv {
    pub fn new(k: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        k.require_square("K")?;
        if k.is_empty() {
            return Err(KFrameError::EmptyMatrix { rows: 0, cols: 0 });
        }
        let f = svd_decompose(&k, tol.rank)?;
        let range_k = Subspace::from_basis_unchecked(f.range_basis());
        let range_k_adjoint = Subspace::from_basis_unchecked(f.corange_basis());
        let pinv_norm = if f.rank == 0 { 0.0 } else { 1.0 / f.sigma_min_nonzero() };
        Ok(OperatorEnv {
            k_adjoint: k.adjoint(),
            k_pinv: f.pseudo_inverse(),
            proj_range_k: range_k.projector(),
            proj_range_k_adjoint: range_k_adjoint.projector(),
            range_k,
            range_k_adjoint,
            norm: f.sigma_max(),
            pinv_norm,
            k,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(ComplexMatrix::identity(n), &Tolerances::default()).expect("identity is a valid operator")
    }

    /// Environment for `K*`; ranges and projections swap roles.
    pub fn adjoint(&self) -> Self {
        OperatorEnv {
            k: self.k_adjoint.clone(),
            k_adjoint: self.k.clone(),
            k_pinv: self.k_pinv.adjoint(),
            range_k: self.range_k_adjoint.clone(),
            range_k_adjoint: self.range_k.clone(),
            proj_range_k: self.proj_range_k_adjoint.clone(),
            proj_range_k_adjoint: self.proj_range_k.clone(),
            norm: self.norm,
            pinv_norm: self.pinv_norm,
        }
    }

    pub fn dim(&self) -> usize {
        self.k.rows()
    }

    pub fn k(&self) -> &ComplexMatrix {
        &self.k
    }

    pub fn k_adjoint(&self) -> &ComplexMatrix {
        &self.k_adjoint
    }

    pub fn k_pinv(&self) -> &ComplexMatrix {
        &self.k_pinv
    }

    pub fn range_k(&self) -> &Subspace {
        &self.range_k
    }

    pub fn range_k_adjoint(&self) -> &Subspace {
        &self.range_k_adjoint
    }

    pub fn proj_range_k(&self) -> &ComplexMatrix {
        &self.proj_range_k
    }

    pub fn proj_range_k_adjoint(&self) -> &ComplexMatrix {
        &self.proj_range_k_adjoint
    }

    pub fn rank(&self) -> usize {
        self.range_k.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    /// `|K|`.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// `|K^dag|`, the reciprocal of the smallest nonzero singular value.
    pub fn pinv_norm(&self) -> f64 {
        self.pinv_norm
    }

    /// Largest residual among the Moore-Penrose identities, the projector
    /// identities and `K K^dag = pi_R(K)`, each relative to `max(1, |K|)`
    /// or `max(1, |K^dag|)` as appropriate.
    pub fn invariant_residual(&self) -> f64 {
        let k = &self.k;
        let p = &self.k_pinv;
        let kn = self.norm.max(1.0);
        let pn = self.pinv_norm.max(1.0);
        let kp = k * p;
        let pk = p * k;
        let pr = &self.proj_range_k;
        let pra = &self.proj_range_k_adjoint;
        [
            (&kp * k).distance(k) / kn,
            (&pk * p).distance(p) / pn,
            kp.distance(&kp.adjoint()),
            pk.distance(&pk.adjoint()),
            pr.distance(&pr.adjoint()),
            (pr * pr).distance(pr),
            (pr * k).distance(k) / kn,
            kp.distance(pr),
            pk.distance(pra),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}
