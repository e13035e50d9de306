//! Finite frames and K-frames in `C^n`.
//!
//! A sequence `F = {f_1, ..., f_N}` is a K-frame when
//! `A |K* f|^2 <= sum_i |<f, f_i>|^2 <= B |f|^2` for all `f`. In finite
//! dimension the upper bound always exists and the lower one exists
//! exactly when `R(K) ⊆ R(T_F)`, so the optimal pair is computable from
//! the synthesis operator alone.

use crate::error::{KFrameError, Result};
use crate::linalg::{
    compressed_pencil_max, majorization_constant, range_inclusion_check, range_projector, rank, ComplexMatrix,
    ComplexVector, OperatorEnv, C64,
};
use crate::tolerance::{Check, Tolerances};

/// Relative disagreement allowed between the two routes to the optimal
/// lower bound.
pub const LOWER_BOUND_ROUTE_TOLERANCE: f64 = 1e-8;

/// Ordered finite sequence of vectors in `C^n`, stored as its synthesis
/// matrix (`n x N`, column `i` is `f_i`).
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    synthesis: ComplexMatrix,
}

impl Frame {
    pub fn from_synthesis(synthesis: ComplexMatrix) -> Result<Self> {
        if synthesis.rows() == 0 || synthesis.cols() == 0 {
            return Err(KFrameError::EmptyMatrix {
                rows: synthesis.rows(),
                cols: synthesis.cols(),
            });
        }
        if !synthesis.is_finite() {
            return Err(KFrameError::NonFiniteInput);
        }
        Ok(Frame { synthesis })
    }

    pub fn from_vectors(dim: usize, vectors: &[ComplexVector]) -> Result<Self> {
        Self::from_synthesis(ComplexMatrix::from_columns(dim, vectors)?)
    }

    /// Each inner slice is one vector.
    pub fn from_real_vectors(vectors: &[&[f64]]) -> Result<Self> {
        let dim = vectors.first().map_or(0, |v| v.len());
        let cols: Vec<ComplexVector> = vectors.iter().map(|v| crate::linalg::real_vector(v)).collect();
        Self::from_vectors(dim, &cols)
    }

    pub fn standard_basis(n: usize) -> Self {
        Frame {
            synthesis: ComplexMatrix::identity(n),
        }
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.synthesis.rows()
    }

    /// Number of vectors `N`.
    pub fn len(&self) -> usize {
        self.synthesis.cols()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vector(&self, i: usize) -> ComplexVector {
        self.synthesis.column(i)
    }

    pub fn vectors(&self) -> Vec<ComplexVector> {
        self.synthesis.columns()
    }

    /// `T_F`.
    pub fn synthesis(&self) -> &ComplexMatrix {
        &self.synthesis
    }

    /// `T_F*`.
    pub fn analysis(&self) -> ComplexMatrix {
        self.synthesis.adjoint()
    }

    /// `S_F = T_F T_F*`.
    pub fn frame_operator(&self) -> ComplexMatrix {
        (&self.synthesis * &self.synthesis.adjoint()).hermitian_part()
    }

    /// `{L f_i}`.
    pub fn mapped(&self, l: &ComplexMatrix) -> Result<Frame> {
        if l.cols() != self.dim() {
            return Err(KFrameError::ShapeMismatch(format!(
                "operator with {} columns applied to vectors of length {}",
                l.cols(),
                self.dim()
            )));
        }
        Frame::from_synthesis(l * &self.synthesis)
    }

    /// `{c f_i}`.
    pub fn scaled(&self, c: f64) -> Frame {
        Frame {
            synthesis: self.synthesis.scale_real(c),
        }
    }

    pub fn distance(&self, other: &Frame) -> f64 {
        self.synthesis.distance(&other.synthesis)
    }

    /// Largest vector-wise distance to `other`.
    pub fn max_vector_distance(&self, other: &Frame) -> f64 {
        (0..self.len().min(other.len()))
            .map(|i| (self.vector(i) - other.vector(i)).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn require_dim(&self, dim: usize, what: &str) -> Result<()> {
        if self.dim() != dim {
            return Err(KFrameError::ShapeMismatch(format!(
                "{what}: vectors of length {} in an operator space of dimension {dim}",
                self.dim()
            )));
        }
        Ok(())
    }

    pub(crate) fn require_same_index(&self, other: &Frame, what: &str) -> Result<()> {
        if self.len() != other.len() || self.dim() != other.dim() {
            return Err(KFrameError::ShapeMismatch(format!(
                "{what}: {} vectors in C^{} vs {} vectors in C^{}",
                self.len(),
                self.dim(),
                other.len(),
                other.dim()
            )));
        }
        Ok(())
    }
}

/// Largest vector-wise distance between the multisets `a` and `b`, found by
/// trying every pairing. Meant for the short sequences of worked examples.
pub fn multiset_distance(a: &Frame, b: &Frame) -> f64 {
    if a.len() != b.len() || a.dim() != b.dim() {
        return f64::INFINITY;
    }
    let n = a.len();
    let va = a.vectors();
    let vb = b.vectors();
    let cost: Vec<Vec<f64>> = va.iter().map(|x| vb.iter().map(|y| (x - y).norm()).collect()).collect();
    fn search(row: usize, used: &mut [bool], cost: &[Vec<f64>], acc: f64, best: &mut f64) {
        if acc >= *best {
            return;
        }
        if row == cost.len() {
            *best = acc;
            return;
        }
        for j in 0..cost.len() {
            if !used[j] {
                used[j] = true;
                search(row + 1, used, cost, acc.max(cost[row][j]), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    search(0, &mut vec![false; n], &cost, 0.0, &mut best);
    best
}

#[derive(Debug, Clone)]
pub struct FrameOperators {
    /// `n x N`.
    pub synthesis: ComplexMatrix,
    /// `N x n`.
    pub analysis: ComplexMatrix,
    /// `n x n`, Hermitian positive semidefinite.
    pub frame_op: ComplexMatrix,
}

pub fn build_frame_ops(f: &Frame) -> FrameOperators {
    FrameOperators {
        synthesis: f.synthesis().clone(),
        analysis: f.analysis(),
        frame_op: f.frame_operator(),
    }
}

/// The least Bessel bound, `sigma_max(T_F)^2`.
pub fn optimal_bessel_bound(f: &Frame) -> f64 {
    let s = f.synthesis().norm();
    s * s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower_a: f64,
    pub upper_b: f64,
    pub optimal: bool,
}

/// Optimal K-frame bounds of `f`.
///
/// The upper bound is `|T_F|^2`. The lower bound is `1 / lambda^2` where
/// `lambda` is the majorization constant of `K` against `T_F`; it is
/// cross-checked against the largest generalized eigenvalue of the pencil
/// `(K K*, S_F)` compressed to `R(S_F)`.
pub fn k_frame_check(f: &Frame, env: &OperatorEnv, tol: &Tolerances) -> Result<FrameBounds> {
    f.require_dim(env.dim(), "k_frame_check")?;
    if env.is_zero() {
        return Err(KFrameError::ZeroOperator);
    }
    let t = f.synthesis();
    let inclusion = range_inclusion_check(env.k(), t, tol)?;
    if !inclusion.passed {
        return Err(KFrameError::NotKFrame {
            residual: inclusion.residual,
            threshold: inclusion.threshold,
        });
    }
    let lambda = majorization_constant(env.k(), t, tol)?.lambda;
    let lower_a = 1.0 / (lambda * lambda);

    let s = f.frame_operator();
    let (range_s, _) = range_projector(&s, tol)?;
    let kk = env.k() * env.k_adjoint();
    let ratio = compressed_pencil_max(&kk, &s, range_s.basis())?;
    let lower_direct = 1.0 / ratio;
    if (lower_a - lower_direct).abs() > LOWER_BOUND_ROUTE_TOLERANCE * lower_a.max(1.0) {
        return Err(KFrameError::InternalConsistency(format!(
            "optimal lower bound disagrees between routes: {lower_a} vs {lower_direct}"
        )));
    }
    Ok(FrameBounds {
        lower_a,
        upper_b: optimal_bessel_bound(f),
        optimal: true,
    })
}

/// Whether a user-supplied pair is admissible next to the optimal one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsValidation {
    pub optimal: FrameBounds,
    pub lower_valid: bool,
    pub upper_valid: bool,
}

impl BoundsValidation {
    pub fn valid(&self) -> bool {
        self.lower_valid && self.upper_valid
    }
}

/// `(a, b)` are valid K-frame bounds iff `0 < a <= A_opt` and `b >= B_opt`
/// (relative slack `tol.identity`).
pub fn validate_bounds(f: &Frame, env: &OperatorEnv, a: f64, b: f64, tol: &Tolerances) -> Result<BoundsValidation> {
    let optimal = k_frame_check(f, env, tol)?;
    let slack = tol.identity;
    Ok(BoundsValidation {
        optimal,
        lower_valid: a > 0.0 && a <= optimal.lower_a * (1.0 + slack),
        upper_valid: b >= optimal.upper_b * (1.0 - slack),
    })
}

/// Checks `B^{-1} |y| <= |(S_F|_{R(K)})^{-1} y| <= A^{-1} |K^dag|^2 |y|` for
/// `y` in `S_F(R(K))`, given valid bounds `(a, b)`.
pub fn restricted_inverse_bound_check(f: &Frame, env: &OperatorEnv, a: f64, b: f64, tol: &Tolerances) -> Result<Check> {
    f.require_dim(env.dim(), "restricted_inverse_bound_check")?;
    let map = crate::linalg::restricted_inverse(&f.frame_operator(), env.range_k(), tol)?;
    let k_pinv = env.pinv_norm();
    Ok(map.gain_within(1.0 / b, k_pinv * k_pinv / a, tol))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightnessReport {
    /// Best constant in `S_F ≈ A K K*` (least squares in Frobenius norm).
    pub constant: f64,
    /// `|S_F - A K K*| / max(1, |S_F|)`.
    pub residual: f64,
    pub threshold: f64,
    pub tight: bool,
    pub parseval: bool,
}

/// `F` is A-tight iff `S_F = A K K*`; Parseval iff moreover `A = 1`.
pub fn tightness_check(f: &Frame, env: &OperatorEnv, tol: &Tolerances) -> Result<TightnessReport> {
    f.require_dim(env.dim(), "tightness_check")?;
    let s = f.frame_operator();
    let kk = env.k() * env.k_adjoint();
    let denom = kk.frobenius_norm().powi(2);
    let constant = if denom == 0.0 {
        0.0
    } else {
        let inner: C64 = kk
            .as_dmatrix()
            .iter()
            .zip(s.as_dmatrix().iter())
            .map(|(x, y)| x.conj() * y)
            .sum();
        inner.re / denom
    };
    let residual = (&s - &kk.scale_real(constant)).norm() / s.norm().max(1.0);
    let threshold = tol.identity;
    let tight = residual <= threshold && constant > 0.0;
    Ok(TightnessReport {
        constant,
        residual,
        threshold,
        tight,
        parseval: tight && (constant - 1.0).abs() <= threshold,
    })
}

/// The operator `K e_i = f_i` (and `K e_i = 0` for `i > N`), for which `F`
/// is a Parseval K-frame. Requires `N <= n`.
pub fn bessel_as_k_frame(f: &Frame, tol: &Tolerances) -> Result<OperatorEnv> {
    let (n, count) = (f.dim(), f.len());
    if count > n {
        return Err(KFrameError::IndexExceedsDimension { count, dim: n });
    }
    let k = f.synthesis().hstack(&ComplexMatrix::zeros(n, n - count))?;
    OperatorEnv::new(k, tol)
}

/// `T_F` has trivial kernel.
pub fn minimality_check(f: &Frame, tol: &Tolerances) -> Result<bool> {
    Ok(rank(f.synthesis(), tol.rank)? == f.len())
}

/// The unique biorthogonal sequence lying in `span F`,
/// `G = T_F (T_F* T_F)^{-1} = (T_F^dag)*`.
pub fn biorthogonal_sequence(f: &Frame, tol: &Tolerances) -> Result<Frame> {
    let r = rank(f.synthesis(), tol.rank)?;
    if r < f.len() {
        return Err(KFrameError::NotMinimal {
            rank: r,
            count: f.len(),
        });
    }
    let g = crate::linalg::pseudo_inverse(f.synthesis(), tol.rank)?.adjoint();
    Frame::from_synthesis(g)
}

/// `|T_F* T_G - I|`, zero for a biorthogonal pair.
pub fn biorthogonality_residual(f: &Frame, g: &Frame) -> Result<f64> {
    f.require_same_index(g, "biorthogonality_residual")?;
    let gram = &f.analysis() * g.synthesis();
    Ok(gram.distance(&ComplexMatrix::identity(f.len())))
}

/// How far the vectors of `g` stick out of `span F`.
pub fn span_residual(f: &Frame, g: &Frame, tol: &Tolerances) -> Result<Check> {
    if f.dim() != g.dim() {
        return Err(KFrameError::ShapeMismatch(
            "span_residual: ambient dimensions differ".into(),
        ));
    }
    let (span, _) = range_projector(f.synthesis(), tol)?;
    Ok(tol.check(span.residual_of(g.synthesis()), g.synthesis().norm()))
}
