//! K-duals: the canonical construction, verification of
//! `K = pi_R(K) T_F T_G*`, the parameterization of all K-duals, reciprocal
//! duality and the minimal-norm property of canonical coefficients.

use crate::error::{KFrameError, Result};
use crate::frames::{k_frame_check, optimal_bessel_bound, validate_bounds, Frame, LOWER_BOUND_ROUTE_TOLERANCE};
use crate::linalg::{
    null_space, pseudo_inverse, restricted_inverse, ComplexMatrix, ComplexVector, OperatorEnv, RestrictedMap, Subspace,
};
use crate::tolerance::{Check, Tolerances};

/// The pieces of the canonical construction: `M = (S_F|_{R(K)})^{-1}`,
/// `pi_{S_F(R(K))}` and the dual itself.
#[derive(Debug, Clone)]
pub struct CanonicalDual {
    pub dual: Frame,
    pub restricted: RestrictedMap,
    pub image_projector: ComplexMatrix,
}

pub fn canonical_parts(f: &Frame, env: &OperatorEnv, tol: &Tolerances) -> Result<CanonicalDual> {
    k_frame_check(f, env, tol)?;
    let restricted = restricted_inverse(&f.frame_operator(), env.range_k(), tol)?;
    let image_projector = restricted.domain().projector();
    let t = &(&(env.k_adjoint() * restricted.matrix()) * &image_projector) * f.synthesis();
    Ok(CanonicalDual {
        dual: Frame::from_synthesis(t)?,
        restricted,
        image_projector,
    })
}

/// `f~_i = K* (S_F|_{R(K)})^{-1} pi_{S_F(R(K))} f_i`.
pub fn canonical_k_dual(f: &Frame, env: &OperatorEnv, tol: &Tolerances) -> Result<Frame> {
    Ok(canonical_parts(f, env, tol)?.dual)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualLowerBounds {
    /// Optimal lower K*-frame bound of the dual.
    pub dual_lower: f64,
    /// Optimal lower K-frame bound of `pi_{R(K)} F`.
    pub projected_lower: f64,
    /// `1 / B_F`.
    pub inverse_frame_bessel: f64,
    /// `1 / B_G`.
    pub inverse_dual_bessel: f64,
}

impl DualLowerBounds {
    pub fn dominated(&self) -> bool {
        let ok = |x: f64, floor: f64| x >= floor * (1.0 - LOWER_BOUND_ROUTE_TOLERANCE);
        ok(self.dual_lower, self.inverse_frame_bessel) && ok(self.projected_lower, self.inverse_dual_bessel)
    }
}

#[derive(Debug, Clone)]
pub struct KDualCertificate {
    pub frame: Frame,
    pub dual: Frame,
    pub env: OperatorEnv,
    /// `|K - pi_{R(K)} T_F T_G*|`.
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
    /// Present when the certificate passes and both sequences admit finite
    /// bounds.
    pub lower_bound_report: Option<DualLowerBounds>,
}

impl KDualCertificate {
    pub fn check(&self) -> Check {
        Check::new(self.residual, self.threshold)
    }
}

fn dual_residual(f: &Frame, g: &Frame, env: &OperatorEnv) -> f64 {
    let recon = &(env.proj_range_k() * f.synthesis()) * &g.analysis();
    env.k().distance(&recon)
}

fn lower_bounds(f: &Frame, g: &Frame, env: &OperatorEnv, tol: &Tolerances) -> Option<DualLowerBounds> {
    let dual_lower = k_frame_check(g, &env.adjoint(), tol).ok()?.lower_a;
    let projected = f.mapped(env.proj_range_k()).ok()?;
    let projected_lower = k_frame_check(&projected, env, tol).ok()?.lower_a;
    Some(DualLowerBounds {
        dual_lower,
        projected_lower,
        inverse_frame_bessel: 1.0 / optimal_bessel_bound(f),
        inverse_dual_bessel: 1.0 / optimal_bessel_bound(g),
    })
}

pub fn verify_k_dual(f: &Frame, g: &Frame, env: &OperatorEnv, tol: &Tolerances) -> Result<KDualCertificate> {
    f.require_same_index(g, "verify_k_dual")?;
    f.require_dim(env.dim(), "verify_k_dual")?;
    let residual = dual_residual(f, g, env);
    let threshold = tol.threshold(env.norm());
    let passed = residual <= threshold;
    let lower_bound_report = if passed && !env.is_zero() {
        lower_bounds(f, g, env, tol)
    } else {
        None
    };
    Ok(KDualCertificate {
        frame: f.clone(),
        dual: g.clone(),
        env: env.clone(),
        residual,
        threshold,
        passed,
        lower_bound_report,
    })
}

/// Lower bounds of `G` (as a K*-frame) and `pi_{R(K)} F` (as a K-frame)
/// for a verified K-dual pair, checked against `1/B_F` and `1/B_G`.
pub fn k_dual_lower_bounds(cert: &KDualCertificate) -> Result<DualLowerBounds> {
    if !cert.passed {
        return Err(KFrameError::NotADual {
            residual: cert.residual,
            threshold: cert.threshold,
        });
    }
    let report = cert
        .lower_bound_report
        .ok_or_else(|| KFrameError::InternalConsistency("verified K-dual without finite lower bounds".into()))?;
    if !report.dominated() {
        return Err(KFrameError::InternalConsistency(format!(
            "lower bounds {report:?} fall below the reciprocal Bessel bounds"
        )));
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub envelope_lower: f64,
    pub envelope_upper: f64,
    /// Optimal lower K*-frame bound of the canonical dual.
    pub dual_lower: f64,
    /// Optimal Bessel bound of the canonical dual.
    pub dual_upper: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

/// The canonical dual of a K-frame with bounds `(a, b)` is a K*-frame with
/// bounds inside `[1/b, b a^{-1} |K|^2 |K^dag|^2]`.
pub fn canonical_dual_bound_certificate(
    f: &Frame,
    env: &OperatorEnv,
    a: f64,
    b: f64,
    tol: &Tolerances,
) -> Result<BoundReport> {
    let v = validate_bounds(f, env, a, b, tol)?;
    if !v.valid() {
        return Err(KFrameError::InvalidBounds(format!(
            "({a}, {b}) are not K-frame bounds; optimal pair is ({}, {})",
            v.optimal.lower_a, v.optimal.upper_b
        )));
    }
    let dual = canonical_k_dual(f, env, tol)?;
    let dual_bounds = k_frame_check(&dual, &env.adjoint(), tol)?;
    let envelope_lower = 1.0 / b;
    let envelope_upper = b / a * (env.norm() * env.pinv_norm()).powi(2);
    let slack = LOWER_BOUND_ROUTE_TOLERANCE;
    Ok(BoundReport {
        envelope_lower,
        envelope_upper,
        dual_lower: dual_bounds.lower_a,
        dual_upper: dual_bounds.upper_b,
        lower_ok: dual_bounds.lower_a >= envelope_lower * (1.0 - slack),
        upper_ok: dual_bounds.upper_b <= envelope_upper * (1.0 + slack),
    })
}

/// A map `phi: C^n -> C^N` with `pi_{R(K)} T_F phi = 0`; adding `phi*`
/// to the canonical synthesis operator gives another K-dual.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPerturbation {
    pub phi: ComplexMatrix,
}

impl DualPerturbation {
    pub fn new(phi: ComplexMatrix) -> Result<Self> {
        if !phi.is_finite() {
            return Err(KFrameError::NonFiniteInput);
        }
        Ok(DualPerturbation { phi })
    }

    pub fn zero(f: &Frame) -> Self {
        DualPerturbation {
            phi: ComplexMatrix::zeros(f.len(), f.dim()),
        }
    }

    /// `|pi_{R(K)} T_F phi|` against `tol * max(1, |K|, |T_F| |phi|)`.
    pub fn admissibility(&self, f: &Frame, env: &OperatorEnv, tol: &Tolerances) -> Result<Check> {
        if self.phi.shape() != (f.len(), f.dim()) || f.dim() != env.dim() {
            return Err(KFrameError::ShapeMismatch(format!(
                "perturbation is {}x{}, expected {}x{}",
                self.phi.rows(),
                self.phi.cols(),
                f.len(),
                f.dim()
            )));
        }
        let violation = (&(env.proj_range_k() * f.synthesis()) * &self.phi).norm();
        let scale = env.norm().max(f.synthesis().norm() * self.phi.norm());
        Ok(tol.check(violation, scale))
    }
}

/// Coefficient directions `c` with `pi_{R(K)} T_F c = 0`; every admissible
/// perturbation has its range in this subspace.
pub fn admissible_directions(f: &Frame, env: &OperatorEnv, tol: &Tolerances) -> Result<Subspace> {
    f.require_dim(env.dim(), "admissible_directions")?;
    null_space(&(env.proj_range_k() * f.synthesis()), tol)
}

/// `g_i = f~_i + phi* delta_i`.
pub fn dual_family_generate(f: &Frame, env: &OperatorEnv, pert: &DualPerturbation, tol: &Tolerances) -> Result<Frame> {
    let adm = pert.admissibility(f, env, tol)?;
    if !adm.passed {
        return Err(KFrameError::InadmissiblePerturbation {
            violation: adm.residual,
            threshold: adm.threshold,
        });
    }
    let canonical = canonical_k_dual(f, env, tol)?;
    let g = Frame::from_synthesis(canonical.synthesis() + &pert.phi.adjoint())?;
    let cert = verify_k_dual(f, &g, env, tol)?;
    if !cert.passed {
        return Err(KFrameError::InternalConsistency(format!(
            "admissible perturbation produced a non-dual (residual {:e} > {:e})",
            cert.residual, cert.threshold
        )));
    }
    Ok(g)
}

/// `phi = T_G* - T_F* ((S_F|_{R(K)})^{-1})* K`.
pub fn dual_family_recover_phi(f: &Frame, g: &Frame, env: &OperatorEnv, tol: &Tolerances) -> Result<DualPerturbation> {
    let cert = verify_k_dual(f, g, env, tol)?;
    if !cert.passed {
        return Err(KFrameError::NotADual {
            residual: cert.residual,
            threshold: cert.threshold,
        });
    }
    let parts = canonical_parts(f, env, tol)?;
    let base = &(&f.analysis() * &parts.restricted.matrix().adjoint()) * env.k();
    let pert = DualPerturbation::new(&g.analysis() - &base)?;
    let adm = pert.admissibility(f, env, tol)?;
    if !adm.passed {
        return Err(KFrameError::InternalConsistency(format!(
            "recovered perturbation violates admissibility ({:e} > {:e})",
            adm.residual, adm.threshold
        )));
    }
    Ok(pert)
}

/// Certificate that `H = {K* pi_{R(K)} f_i}` is a K-dual of
/// `D = {(S_F|_{R(K)})^{-1} pi_{S_F(R(K))} f_i}`.
pub fn reciprocal_dual(f: &Frame, env: &OperatorEnv, tol: &Tolerances) -> Result<KDualCertificate> {
    let parts = canonical_parts(f, env, tol)?;
    let d = Frame::from_synthesis(&(parts.restricted.matrix() * &parts.image_projector) * f.synthesis())?;
    let h = Frame::from_synthesis(&(env.k_adjoint() * env.proj_range_k()) * f.synthesis())?;
    verify_k_dual(&d, &h, env, tol)
}

#[derive(Debug, Clone)]
pub struct WitnessReport {
    /// `K (S_{F~}|_{R(K*)})^{-1} pi_{S_{F~}(R(K*))} f_i`.
    pub composition: Frame,
    /// `|composition_i - f_i|`.
    pub composition_discrepancies: Vec<f64>,
    /// Canonical K*-dual of `F~`, i.e. the same composition applied to `f~_i`.
    pub double_dual: Frame,
    /// `|double_dual_i - f_i|`.
    pub double_dual_discrepancies: Vec<f64>,
    pub threshold: f64,
    /// The double dual reproduces `F`.
    pub recovers: bool,
}

impl WitnessReport {
    pub fn max_discrepancy(&self) -> f64 {
        self.double_dual_discrepancies.iter().copied().fold(0.0, f64::max)
    }
}

/// Applies the canonical construction with `K` and `K*` exchanged to the
/// canonical dual and compares the outcome with `F`.
pub fn noncommutativity_witness(f: &Frame, env: &OperatorEnv, tol: &Tolerances) -> Result<WitnessReport> {
    let dual = canonical_k_dual(f, env, tol)?;
    let m = restricted_inverse(&dual.frame_operator(), env.range_k_adjoint(), tol)?;
    let p = m.domain().projector();
    let map = &(env.k() * m.matrix()) * &p;
    let composition = Frame::from_synthesis(&map * f.synthesis())?;
    let double_dual = Frame::from_synthesis(&map * dual.synthesis())?;
    let distances = |x: &Frame| -> Vec<f64> { (0..f.len()).map(|i| (x.vector(i) - f.vector(i)).norm()).collect() };
    let composition_discrepancies = distances(&composition);
    let double_dual_discrepancies = distances(&double_dual);
    let threshold = tol.threshold(f.synthesis().norm());
    let recovers = double_dual_discrepancies.iter().all(|&d| d <= threshold);
    Ok(WitnessReport {
        composition,
        composition_discrepancies,
        double_dual,
        double_dual_discrepancies,
        threshold,
        recovers,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    /// `d_i = <target, f~_i>`.
    pub canonical: ComplexVector,
    /// `sum |c_i|^2`.
    pub lhs: f64,
    /// `sum |d_i|^2`.
    pub canonical_norm_sq: f64,
    /// `sum |c_i - d_i|^2`.
    pub offset_norm_sq: f64,
    /// `|lhs - rhs| / lhs` (absolute when `lhs = 0`).
    pub relative_gap: f64,
    pub identity_threshold: f64,
    pub identity_holds: bool,
    /// `|S_{F~} - K* M pi S_F M* K|` with `M = (S_F|_{R(K)})^{-1}`.
    pub frame_operator_residual: f64,
    pub frame_operator_threshold: f64,
    pub frame_operator_holds: bool,
}

/// Relative gap allowed in the Pythagoras identity.
pub const PYTHAGORAS_TOLERANCE: f64 = 1e-9;

/// For coefficients `c` with `T_F c = T_F d`, `d_i = <target, f~_i>`:
/// `|c|^2 = |d|^2 + |c - d|^2`.
pub fn minimal_norm_identity(
    f: &Frame,
    env: &OperatorEnv,
    target: &ComplexVector,
    coeffs: &ComplexVector,
    tol: &Tolerances,
) -> Result<IdentityReport> {
    if target.len() != f.dim() || coeffs.len() != f.len() {
        return Err(KFrameError::ShapeMismatch(format!(
            "target of length {} and {} coefficients for {} vectors in C^{}",
            target.len(),
            coeffs.len(),
            f.len(),
            f.dim()
        )));
    }
    let parts = canonical_parts(f, env, tol)?;
    let d = parts.dual.analysis().apply(target);
    let t = f.synthesis();
    let gap = (t.apply(coeffs) - t.apply(&d)).norm();
    let scale = t.norm() * coeffs.norm().max(d.norm());
    let pre = tol.check(gap, scale);
    if !pre.passed {
        return Err(KFrameError::NotARepresentation {
            residual: pre.residual,
            threshold: pre.threshold,
        });
    }
    let lhs = coeffs.norm_squared();
    let canonical_norm_sq = d.norm_squared();
    let offset_norm_sq = (coeffs - &d).norm_squared();
    let diff = (lhs - canonical_norm_sq - offset_norm_sq).abs();
    let relative_gap = if lhs > 0.0 { diff / lhs } else { diff };

    let m = parts.restricted.matrix();
    let closed =
        &(&(&(&(env.k_adjoint() * m) * &parts.image_projector) * &f.frame_operator()) * &m.adjoint()) * env.k();
    let s_dual = parts.dual.frame_operator();
    let op = tol.check(s_dual.distance(&closed), s_dual.norm());

    Ok(IdentityReport {
        canonical: d,
        lhs,
        canonical_norm_sq,
        offset_norm_sq,
        relative_gap,
        identity_threshold: PYTHAGORAS_TOLERANCE,
        identity_holds: relative_gap <= PYTHAGORAS_TOLERANCE,
        frame_operator_residual: op.residual,
        frame_operator_threshold: op.threshold,
        frame_operator_holds: op.passed,
    })
}

/// Relative agreement required between the two routes to the canonical
/// coefficients.
pub const COEFFICIENT_ROUTE_TOLERANCE: f64 = 1e-9;

/// `T_F^dag S_F ((S_F|_{R(K)})^{-1})* K target`, checked against
/// `<target, f~_i>`.
pub fn canonical_coefficients(
    f: &Frame,
    env: &OperatorEnv,
    target: &ComplexVector,
    tol: &Tolerances,
) -> Result<ComplexVector> {
    if target.len() != f.dim() {
        return Err(KFrameError::ShapeMismatch(format!(
            "target of length {} in C^{}",
            target.len(),
            f.dim()
        )));
    }
    let parts = canonical_parts(f, env, tol)?;
    let t_pinv = pseudo_inverse(f.synthesis(), tol.rank)?;
    let op = &(&(&t_pinv * &f.frame_operator()) * &parts.restricted.matrix().adjoint()) * env.k();
    let c = op.apply(target);
    let d = parts.dual.analysis().apply(target);
    let gap = (&c - &d).norm();
    if gap > COEFFICIENT_ROUTE_TOLERANCE * d.norm().max(1.0) {
        return Err(KFrameError::InternalConsistency(format!(
            "canonical coefficients disagree between routes by {gap:e}"
        )));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, c4_canonical_dual, planar_canonical_dual, PLANAR_WITNESS};
    use crate::frames::{multiset_distance, tightness_check};
    use crate::linalg::{basis_vector, real_vector, C64};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn canonical_dual_of_standard_basis_is_itself() {
        let f = Frame::standard_basis(3);
        let g = canonical_k_dual(&f, &OperatorEnv::identity(3), &tol()).unwrap();
        assert!(g.distance(&f) < 1e-14);
    }

    #[test]
    fn canonical_duals_of_reference_instances() {
        let p = fixtures::planar_projection();
        let g = canonical_k_dual(&p.frame, &p.env(), &tol()).unwrap();
        assert!(g.max_vector_distance(&planar_canonical_dual()) < 1e-12);

        let c = fixtures::c4_minimal();
        let g = canonical_k_dual(&c.frame, &c.env(), &tol()).unwrap();
        assert!(g.max_vector_distance(&c4_canonical_dual()) < 1e-12);
        // not biorthogonal: <f_1, f~_2> = 1
        assert!((g.vector(1).dotc(&c.frame.vector(0)) - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn planar_dual_is_tight_for_k_star() {
        let p = fixtures::planar_projection();
        let g = canonical_k_dual(&p.frame, &p.env(), &tol()).unwrap();
        let r = tightness_check(&g, &p.env().adjoint(), &tol()).unwrap();
        assert!(r.tight);
        assert!((r.constant - 0.72).abs() < 1e-12);
    }

    #[test]
    fn verification() {
        let e = Frame::standard_basis(2);
        let cert = verify_k_dual(&e, &e, &OperatorEnv::identity(2), &tol()).unwrap();
        assert!(cert.passed && cert.residual == 0.0);

        let c = fixtures::c4_minimal();
        assert!(
            verify_k_dual(&c.frame, &c4_canonical_dual(), &c.env(), &tol())
                .unwrap()
                .passed
        );

        let p = fixtures::planar_projection();
        let doubled = planar_canonical_dual().scaled(2.0);
        let cert = verify_k_dual(&p.frame, &doubled, &p.env(), &tol()).unwrap();
        assert!(!cert.passed);
        assert!((cert.residual - 1.0).abs() < 1e-12);

        let short = Frame::standard_basis(2);
        assert!(matches!(
            verify_k_dual(&p.frame, &short, &p.env(), &tol()),
            Err(KFrameError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn lower_bounds_of_dual_pairs() {
        let e = Frame::standard_basis(2);
        let cert = verify_k_dual(&e, &e, &OperatorEnv::identity(2), &tol()).unwrap();
        let lb = k_dual_lower_bounds(&cert).unwrap();
        assert!((lb.dual_lower - 1.0).abs() < 1e-12 && (lb.projected_lower - 1.0).abs() < 1e-12);

        let p = fixtures::planar_projection();
        let g = canonical_k_dual(&p.frame, &p.env(), &tol()).unwrap();
        let lb = k_dual_lower_bounds(&verify_k_dual(&p.frame, &g, &p.env(), &tol()).unwrap()).unwrap();
        assert!((lb.dual_lower - 0.72).abs() < 1e-12);
        assert!((lb.inverse_frame_bessel - 0.5).abs() < 1e-12);
        assert!((lb.projected_lower - 1.5).abs() < 1e-12);
        assert!((lb.inverse_dual_bessel - 1.0 / 0.72).abs() < 1e-12);

        let bad = verify_k_dual(&p.frame, &g.scaled(2.0), &p.env(), &tol()).unwrap();
        assert!(matches!(k_dual_lower_bounds(&bad), Err(KFrameError::NotADual { .. })));
    }

    #[test]
    fn bound_envelopes() {
        let e = Frame::standard_basis(2);
        let r = canonical_dual_bound_certificate(&e, &OperatorEnv::identity(2), 1.0, 1.0, &tol()).unwrap();
        assert!(r.passed());

        let p = fixtures::planar_projection();
        let r = canonical_dual_bound_certificate(&p.frame, &p.env(), 1.0, 2.0, &tol()).unwrap();
        assert!((r.envelope_lower - 0.5).abs() < 1e-15 && (r.envelope_upper - 2.0).abs() < 1e-12);
        assert!((r.dual_upper - 0.72).abs() < 1e-12 && (r.dual_lower - 0.72).abs() < 1e-12);
        assert!(r.passed());

        let c = fixtures::c4_minimal();
        let r = canonical_dual_bound_certificate(&c.frame, &c.env(), 0.125, 1.0, &tol()).unwrap();
        assert!((r.dual_upper - 2.0).abs() < 1e-12 && (r.dual_lower - 1.0).abs() < 1e-12);
        assert!((r.envelope_lower - 1.0).abs() < 1e-15);
        assert!((r.envelope_upper - 16.0).abs() < 1e-10);
        assert!(r.passed());

        assert!(matches!(
            canonical_dual_bound_certificate(&p.frame, &p.env(), 2.0, 2.0, &tol()),
            Err(KFrameError::InvalidBounds(_))
        ));
    }

    fn planar_phi() -> DualPerturbation {
        // w spans the kernel of T_F, v = e_1
        let s = fixtures::INV_SQRT2.value;
        let w = real_vector(&[s, -s, 0.0]);
        DualPerturbation::new(ComplexMatrix::outer(&w, &basis_vector(2, 0))).unwrap()
    }

    #[test]
    fn dual_family() {
        let p = fixtures::planar_projection();
        let env = p.env();
        let zero = dual_family_generate(&p.frame, &env, &DualPerturbation::zero(&p.frame), &tol()).unwrap();
        assert!(zero.distance(&planar_canonical_dual()) < 1e-12);

        let phi = planar_phi();
        assert!(phi.admissibility(&p.frame, &env, &tol()).unwrap().passed);
        let g = dual_family_generate(&p.frame, &env, &phi, &tol()).unwrap();
        assert!(verify_k_dual(&p.frame, &g, &env, &tol()).unwrap().passed);
        let back = dual_family_recover_phi(&p.frame, &g, &env, &tol()).unwrap();
        assert!(back.phi.distance(&phi.phi) < 1e-12);

        let bad = DualPerturbation::new(ComplexMatrix::outer(
            &real_vector(&[1.0, 0.0, 0.0]),
            &basis_vector(2, 0),
        ))
        .unwrap();
        assert!(matches!(
            dual_family_generate(&p.frame, &env, &bad, &tol()),
            Err(KFrameError::InadmissiblePerturbation { .. })
        ));
    }

    #[test]
    fn admissible_directions_of_planar_instance() {
        // pi T_F = [[-s, -s, s], [0, 0, 0]] has a two dimensional kernel
        let p = fixtures::planar_projection();
        let w = admissible_directions(&p.frame, &p.env(), &tol()).unwrap();
        assert_eq!(w.dim(), 2);
    }

    #[test]
    fn recovering_phi_of_canonical_duals() {
        let c = fixtures::c4_minimal();
        let phi = dual_family_recover_phi(&c.frame, &c4_canonical_dual(), &c.env(), &tol()).unwrap();
        assert!(phi.phi.norm() < 1e-12);
        let p = fixtures::planar_projection();
        assert!(matches!(
            dual_family_recover_phi(&p.frame, &p.frame, &p.env(), &tol()),
            Err(KFrameError::NotADual { .. })
        ));
    }

    #[test]
    fn reciprocal_duals() {
        let e = Frame::standard_basis(2);
        let cert = reciprocal_dual(&e, &OperatorEnv::identity(2), &tol()).unwrap();
        assert!(cert.passed && cert.frame.distance(&e) < 1e-14 && cert.dual.distance(&e) < 1e-14);

        let c = fixtures::c4_minimal();
        let cert = reciprocal_dual(&c.frame, &c.env(), &tol()).unwrap();
        assert!(cert.passed);
        let d =
            Frame::from_real_vectors(&[&[0.5, 0.5, 0.0, 0.0], &[0.5, 0.5, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0]]).unwrap();
        assert!(cert.frame.distance(&d) < 1e-12);
        assert!(cert.dual.distance(&c4_canonical_dual()) < 1e-12);

        let p = fixtures::planar_projection();
        let cert = reciprocal_dual(&p.frame, &p.env(), &tol()).unwrap();
        assert!(cert.passed && cert.residual <= 1e-10);
    }

    #[test]
    fn witnesses() {
        let e = Frame::standard_basis(2);
        let w = noncommutativity_witness(&e, &OperatorEnv::identity(2), &tol()).unwrap();
        assert!(w.recovers);

        let p = fixtures::planar_projection();
        let w = noncommutativity_witness(&p.frame, &p.env(), &tol()).unwrap();
        assert!(!w.recovers);
        let third = w.composition.vector(2);
        assert!((third[0].re - PLANAR_WITNESS.value).abs() < 1e-12);
        assert!(third[1].norm() < 1e-12);
        assert!(w.composition_discrepancies[2] > 0.1);

        let c = fixtures::c4_minimal();
        let w = noncommutativity_witness(&c.frame, &c.env(), &tol()).unwrap();
        assert!(!w.recovers);
        assert!(w.double_dual_discrepancies[2] < 1e-12);
    }

    #[test]
    fn minimal_norm() {
        let e = Frame::standard_basis(2);
        let t = basis_vector(2, 0);
        let r = minimal_norm_identity(&e, &OperatorEnv::identity(2), &t, &t, &tol()).unwrap();
        assert!(r.identity_holds && r.offset_norm_sq == 0.0);

        let p = fixtures::planar_projection();
        let d = canonical_coefficients(&p.frame, &p.env(), &basis_vector(2, 0), &tol()).unwrap();
        let expected = real_vector(&[-0.8, -0.8, 0.4]) * C64::new(fixtures::INV_SQRT2.value, 0.0);
        assert!((&d - &expected).norm() < 1e-12);
        let c = &d + real_vector(&[0.7, -0.7, 0.0]);
        let r = minimal_norm_identity(&p.frame, &p.env(), &basis_vector(2, 0), &c, &tol()).unwrap();
        assert!(r.identity_holds && r.frame_operator_holds);
        assert!((r.lhs - (0.72 + 2.0 * 0.49)).abs() < 1e-12);
        assert!((r.canonical_norm_sq - 0.72).abs() < 1e-12);

        let off = &d + real_vector(&[1.0, 0.0, 0.0]);
        assert!(matches!(
            minimal_norm_identity(&p.frame, &p.env(), &basis_vector(2, 0), &off, &tol()),
            Err(KFrameError::NotARepresentation { .. })
        ));
    }

    #[test]
    fn coefficients_of_reference_instances() {
        let c = canonical_coefficients(
            &Frame::standard_basis(2),
            &OperatorEnv::identity(2),
            &basis_vector(2, 0),
            &tol(),
        )
        .unwrap();
        assert!((&c - &basis_vector(2, 0)).norm() < 1e-14);
        let inst = fixtures::c4_minimal();
        let c = canonical_coefficients(&inst.frame, &inst.env(), &basis_vector(4, 0), &tol()).unwrap();
        assert!((&c - &real_vector(&[1.0, 1.0, 0.0])).norm() < 1e-12);
    }

    #[test]
    fn canonical_dual_as_multiset_matches_the_unordered_listing() {
        let p = fixtures::planar_projection();
        let g = canonical_k_dual(&p.frame, &p.env(), &tol()).unwrap();
        let (a, b) = (fixtures::PLANAR_DUAL_PAIRED.value, fixtures::PLANAR_DUAL_SINGLE.value);
        let listed = Frame::from_real_vectors(&[&[a, 0.0], &[b, 0.0], &[a, 0.0]]).unwrap();
        assert!(multiset_distance(&g, &listed) < 1e-12);
    }
}
