//! Multipliers `M_{m,Phi,Psi} f = sum_i m_i <f, psi_i> phi_i`, their
//! K-right and K-left inverses, and the constructions that build such
//! inverses out of further multipliers.

use crate::duality::{canonical_k_dual, verify_k_dual, KDualCertificate};
use crate::error::{KFrameError, Result};
use crate::frames::{
    biorthogonal_sequence, k_frame_check, optimal_bessel_bound, validate_bounds, Frame, LOWER_BOUND_ROUTE_TOLERANCE,
};
use crate::linalg::{
    majorization_constant, pseudo_inverse, range_inclusion_check, restricted_inverse, restricted_invertibility_margin,
    ComplexMatrix, MarginReport, OperatorEnv, C64,
};
use crate::tolerance::{Check, Tolerances};

/// Relative slack when comparing declared symbol bounds with the moduli.
const SYMBOL_BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    values: Vec<C64>,
    lower_mod: f64,
    upper_mod: f64,
    declared: bool,
}

impl Symbol {
    /// Bounds are the least and largest moduli of `values`.
    pub fn new(values: Vec<C64>) -> Result<Self> {
        if values.is_empty() {
            return Err(KFrameError::EmptyMatrix { rows: 0, cols: 0 });
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(KFrameError::NonFiniteInput);
        }
        let lower_mod = values.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        let upper_mod = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Ok(Symbol {
            values,
            lower_mod,
            upper_mod,
            declared: false,
        })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn ones(len: usize) -> Self {
        Self::new(vec![C64::new(1.0, 0.0); len]).expect("nonempty constant symbol")
    }

    /// A symbol declared semi-normalized with bounds `0 < a <= |m_i| <= b`.
    pub fn with_bounds(values: Vec<C64>, a: f64, b: f64) -> Result<Self> {
        let s = Self::new(values)?;
        if !(a > 0.0 && a <= b && b.is_finite()) {
            return Err(KFrameError::NotSemiNormalized(format!(
                "bounds ({a}, {b}) must satisfy 0 < a <= b < inf"
            )));
        }
        if s.lower_mod < a * (1.0 - SYMBOL_BOUND_SLACK) || s.upper_mod > b * (1.0 + SYMBOL_BOUND_SLACK) {
            return Err(KFrameError::NotSemiNormalized(format!(
                "moduli range over [{}, {}], outside the declared [{a}, {b}]",
                s.lower_mod, s.upper_mod
            )));
        }
        Ok(Symbol {
            lower_mod: a,
            upper_mod: b,
            declared: true,
            ..s
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn lower_mod(&self) -> f64 {
        self.lower_mod
    }

    pub fn upper_mod(&self) -> f64 {
        self.upper_mod
    }

    pub fn bounds_declared(&self) -> bool {
        self.declared
    }

    /// `sup |m_i|`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn conj(&self) -> Symbol {
        Symbol {
            values: self.values.iter().map(|z| z.conj()).collect(),
            ..self.clone()
        }
    }

    pub fn is_semi_normalized(&self) -> bool {
        self.lower_mod > 0.0
    }

    /// `(a, b)` when the symbol is semi-normalized.
    pub fn semi_normalized_bounds(&self) -> Result<(f64, f64)> {
        if !self.is_semi_normalized() {
            return Err(KFrameError::NotSemiNormalized(format!(
                "least modulus is {}",
                self.lower_mod
            )));
        }
        Ok((self.lower_mod, self.upper_mod))
    }
}

#[derive(Debug, Clone)]
pub struct Multiplier {
    symbol: Symbol,
    phi: Frame,
    psi: Frame,
    matrix: ComplexMatrix,
}

impl Multiplier {
    pub fn symbol(&self) -> &Symbol {
        &self.symbol
    }

    pub fn phi(&self) -> &Frame {
        &self.phi
    }

    pub fn psi(&self) -> &Frame {
        &self.psi
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `sqrt(B_Phi B_Psi) |m|_inf`.
    pub fn norm_bound(&self) -> f64 {
        (optimal_bessel_bound(&self.phi) * optimal_bessel_bound(&self.psi)).sqrt() * self.symbol.sup_norm()
    }

    pub fn norm_bound_check(&self, tol: &Tolerances) -> Check {
        let bound = self.norm_bound();
        let excess = (self.matrix.norm() - bound).max(0.0);
        tol.check(excess, bound)
    }

    /// `M_{conj(m),Psi,Phi}`, the adjoint.
    pub fn adjoint(&self) -> Multiplier {
        Multiplier {
            symbol: self.symbol.conj(),
            phi: self.psi.clone(),
            psi: self.phi.clone(),
            matrix: self.matrix.adjoint(),
        }
    }
}

/// `T_Phi diag(m) T_Psi*`.
pub fn assemble_multiplier(m: &Symbol, phi: &Frame, psi: &Frame, tol: &Tolerances) -> Result<Multiplier> {
    phi.require_same_index(psi, "assemble_multiplier")?;
    if m.len() != phi.len() {
        return Err(KFrameError::ShapeMismatch(format!(
            "symbol of length {} for {} vectors",
            m.len(),
            phi.len()
        )));
    }
    let matrix = &phi.synthesis().scale_columns(m.values()) * &psi.analysis();
    let mult = Multiplier {
        symbol: m.clone(),
        phi: phi.clone(),
        psi: psi.clone(),
        matrix,
    };
    let c = mult.norm_bound_check(tol);
    if !c.passed {
        return Err(KFrameError::InternalConsistency(format!(
            "multiplier norm {} exceeds sqrt(B_Phi B_Psi)|m|_inf = {}",
            mult.matrix.norm(),
            mult.norm_bound()
        )));
    }
    Ok(mult)
}

/// `M_{1,Phi,Psi} = T_Phi T_Psi*`.
pub fn unit_multiplier(phi: &Frame, psi: &Frame, tol: &Tolerances) -> Result<Multiplier> {
    assemble_multiplier(&Symbol::ones(phi.len()), phi, psi, tol)
}

#[derive(Debug, Clone)]
pub struct KInverse {
    pub operator: ComplexMatrix,
    /// Least `lambda` with `K K* <= lambda^2 M M*` (right inverse) or
    /// `K* K <= lambda^2 M* M` (left inverse).
    pub lambda: f64,
    pub residual: f64,
    pub threshold: f64,
}

fn require_env(mult: &Multiplier, env: &OperatorEnv) -> Result<()> {
    if mult.matrix.rows() != env.dim() {
        return Err(KFrameError::ShapeMismatch(format!(
            "multiplier on C^{} with K on C^{}",
            mult.matrix.rows(),
            env.dim()
        )));
    }
    Ok(())
}

/// `R = M^dag K`, the least-norm solution of `M R = K`.
pub fn k_right_inverse(mult: &Multiplier, env: &OperatorEnv, tol: &Tolerances) -> Result<KInverse> {
    require_env(mult, env)?;
    let m = mult.matrix();
    let inc = range_inclusion_check(env.k(), m, tol)?;
    if !inc.passed {
        return Err(KFrameError::NoRightInverse {
            residual: inc.residual,
            threshold: inc.threshold,
        });
    }
    let lambda = majorization_constant(env.k(), m, tol)?.lambda;
    let r = &pseudo_inverse(m, tol.rank)? * env.k();
    let residual = (m * &r).distance(env.k());
    let threshold = tol.threshold(env.norm());
    if residual > threshold {
        return Err(KFrameError::InternalConsistency(format!(
            "range inclusion holds but |M R - K| = {residual:e} > {threshold:e}"
        )));
    }
    Ok(KInverse {
        operator: r,
        lambda,
        residual,
        threshold,
    })
}

/// `L = K M^dag`, obtained as the adjoint of the K*-right inverse of `M*`.
pub fn k_left_inverse(mult: &Multiplier, env: &OperatorEnv, tol: &Tolerances) -> Result<KInverse> {
    match k_right_inverse(&mult.adjoint(), &env.adjoint(), tol) {
        Ok(r) => Ok(KInverse {
            operator: r.operator.adjoint(),
            ..r
        }),
        Err(KFrameError::NoRightInverse { residual, threshold }) => {
            Err(KFrameError::NoLeftInverse { residual, threshold })
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiplierHypothesis {
    /// `M = K`.
    EqualsK,
    /// `M` has a K-right and/or K-left inverse.
    Invertible,
}

/// A guaranteed lower bound next to the optimal one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuaranteedBound {
    pub guaranteed: f64,
    pub optimal: f64,
}

impl GuaranteedBound {
    pub fn holds(&self) -> bool {
        self.guaranteed <= self.optimal * (1.0 + LOWER_BOUND_ROUTE_TOLERANCE)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBoundReport {
    pub hypothesis: MultiplierHypothesis,
    /// `Phi` as a K-frame.
    pub phi: Option<GuaranteedBound>,
    /// `Psi` as a K*-frame.
    pub psi: Option<GuaranteedBound>,
}

/// If `M_{m,Phi,Psi} = K`, or it has a K-right (K-left) inverse, then `Phi`
/// is a K-frame (`Psi` is a K*-frame). The guaranteed lower bounds are
/// `1/(sup|m|^2 B)` times `1/|R|^2` (`1/|L|^2`) in the inverse case.
pub fn frames_from_multiplier_identity(
    mult: &Multiplier,
    env: &OperatorEnv,
    tol: &Tolerances,
) -> Result<LowerBoundReport> {
    require_env(mult, env)?;
    let sup2 = mult.symbol.sup_norm().powi(2);
    let b_phi = optimal_bessel_bound(&mult.phi);
    let b_psi = optimal_bessel_bound(&mult.psi);
    let phi_side = |scale: f64| -> Result<GuaranteedBound> {
        Ok(GuaranteedBound {
            guaranteed: 1.0 / (sup2 * scale * b_psi),
            optimal: k_frame_check(&mult.phi, env, tol)?.lower_a,
        })
    };
    let psi_side = |scale: f64| -> Result<GuaranteedBound> {
        Ok(GuaranteedBound {
            guaranteed: 1.0 / (sup2 * scale * b_phi),
            optimal: k_frame_check(&mult.psi, &env.adjoint(), tol)?.lower_a,
        })
    };

    let equal = tol.check(mult.matrix.distance(env.k()), env.norm());
    let report = if equal.passed {
        LowerBoundReport {
            hypothesis: MultiplierHypothesis::EqualsK,
            phi: Some(phi_side(1.0)?),
            psi: Some(psi_side(1.0)?),
        }
    } else {
        let right = k_right_inverse(mult, env, tol).ok();
        let left = k_left_inverse(mult, env, tol).ok();
        if right.is_none() && left.is_none() {
            return Err(KFrameError::HypothesisNotMet(format!(
                "|M - K| = {:e} and M has neither a K-right nor a K-left inverse",
                equal.residual
            )));
        }
        LowerBoundReport {
            hypothesis: MultiplierHypothesis::Invertible,
            phi: right.map(|r| phi_side(r.operator.norm().powi(2))).transpose()?,
            psi: left.map(|l| psi_side(l.operator.norm().powi(2))).transpose()?,
        }
    };
    for side in [report.phi, report.psi].into_iter().flatten() {
        if !side.holds() {
            return Err(KFrameError::InternalConsistency(format!(
                "guaranteed lower bound {} exceeds the optimal {}",
                side.guaranteed, side.optimal
            )));
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedCheck {
    pub name: &'static str,
    pub check: Check,
    /// Informational checks do not enter the overall verdict.
    pub informational: bool,
}

impl NamedCheck {
    fn new(name: &'static str, check: Check) -> Self {
        NamedCheck {
            name,
            check,
            informational: false,
        }
    }

    fn info(name: &'static str, check: Check) -> Self {
        NamedCheck {
            name,
            check,
            informational: true,
        }
    }
}

/// A multiplier (or product of multipliers) asserted equal to a target
/// operator, together with the side conditions checked along the way.
#[derive(Debug, Clone)]
pub struct MultiplierFactorization {
    pub factors: Vec<Multiplier>,
    /// The operator the construction produced.
    pub operator: ComplexMatrix,
    pub checks: Vec<NamedCheck>,
}

impl MultiplierFactorization {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.informational || c.check.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.check)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| !c.informational)
            .map(|c| c.check.residual)
            .fold(0.0, f64::max)
    }
}

fn require_dual(cert: &KDualCertificate) -> Result<()> {
    if !cert.passed {
        return Err(KFrameError::NotADual {
            residual: cert.residual,
            threshold: cert.threshold,
        });
    }
    Ok(())
}

fn identity_check(lhs: &ComplexMatrix, rhs: &ComplexMatrix, tol: &Tolerances) -> Check {
    tol.check(lhs.distance(rhs), lhs.norm().max(rhs.norm()))
}

/// Given a K-left inverse `L` of `M_{1, pi_{R(K)} Phi, Psi}` and a K-dual
/// `Phi_d` of `Phi`: `M_{1, L pi_{R(K)} Phi, Phi_d} = L K`.
pub fn left_inverse_as_multiplier(
    phi: &Frame,
    psi: &Frame,
    env: &OperatorEnv,
    left: &ComplexMatrix,
    phi_dual: &Frame,
    tol: &Tolerances,
) -> Result<MultiplierFactorization> {
    phi.require_dim(env.dim(), "left_inverse_as_multiplier")?;
    let projected = phi.mapped(env.proj_range_k())?;
    let base = unit_multiplier(&projected, psi, tol)?;
    let inv = tol.check((left * base.matrix()).distance(env.k()), env.norm());
    if !inv.passed {
        return Err(KFrameError::NotAnInverse {
            residual: inv.residual,
            threshold: inv.threshold,
        });
    }
    require_dual(&verify_k_dual(phi, phi_dual, env, tol)?)?;
    let mapped = projected.mapped(left)?;
    let intermediate = verify_k_dual(&mapped, psi, env, tol)?;
    let mult = unit_multiplier(&mapped, phi_dual, tol)?;
    let target = left * env.k();
    Ok(MultiplierFactorization {
        checks: vec![
            NamedCheck::new("left_inverse", inv),
            NamedCheck::new("psi_dual_of_mapped_phi", intermediate.check()),
            NamedCheck::new("multiplier_equals_LK", identity_check(mult.matrix(), &target, tol)),
        ],
        operator: mult.matrix().clone(),
        factors: vec![mult],
    })
}

/// Given a K-right inverse `R` of `M_{1, Phi, pi_{R(K*)} Psi}` and a
/// K*-dual `Psi_d` of `Psi`: `M_{1, Psi_d, R* pi_{R(K*)} Psi} = K R`.
pub fn right_inverse_as_multiplier(
    phi: &Frame,
    psi: &Frame,
    env: &OperatorEnv,
    right: &ComplexMatrix,
    psi_dual: &Frame,
    tol: &Tolerances,
) -> Result<MultiplierFactorization> {
    psi.require_dim(env.dim(), "right_inverse_as_multiplier")?;
    let adj = env.adjoint();
    let projected = psi.mapped(adj.proj_range_k())?;
    let base = unit_multiplier(phi, &projected, tol)?;
    let inv = tol.check((base.matrix() * right).distance(env.k()), env.norm());
    if !inv.passed {
        return Err(KFrameError::NotAnInverse {
            residual: inv.residual,
            threshold: inv.threshold,
        });
    }
    require_dual(&verify_k_dual(psi, psi_dual, &adj, tol)?)?;
    let mapped = projected.mapped(&right.adjoint())?;
    let intermediate = verify_k_dual(&mapped, phi, &adj, tol)?;
    let mult = unit_multiplier(psi_dual, &mapped, tol)?;
    let target = env.k() * right;
    Ok(MultiplierFactorization {
        checks: vec![
            NamedCheck::new("right_inverse", inv),
            NamedCheck::new("phi_k_star_dual_of_mapped_psi", intermediate.check()),
            NamedCheck::new("multiplier_equals_KR", identity_check(mult.matrix(), &target, tol)),
        ],
        operator: mult.matrix().clone(),
        factors: vec![mult],
    })
}

#[derive(Debug, Clone)]
pub struct BiorthogonalInverses {
    pub biorthogonal: Frame,
    pub canonical_dual: Frame,
    /// `M_{1, pi_{R(K)} Phi, Psi} M_{1, G, Phi~} = K`.
    pub right: MultiplierFactorization,
    /// `M_{1, Phi~, G} M_{1, Psi, pi_{R(K)} Phi} = K*`.
    pub left: MultiplierFactorization,
}

/// For a K-frame `Phi` and a minimal K*-frame `Psi` with biorthogonal
/// sequence `G`, `M_{1, G, Phi~}` is a K-right inverse of
/// `M_{1, pi_{R(K)} Phi, Psi}`, and mirrored for `K*`.
pub fn biorthogonal_right_inverse(
    phi: &Frame,
    psi: &Frame,
    env: &OperatorEnv,
    tol: &Tolerances,
) -> Result<BiorthogonalInverses> {
    phi.require_same_index(psi, "biorthogonal_right_inverse")?;
    phi.require_dim(env.dim(), "biorthogonal_right_inverse")?;
    let g = biorthogonal_sequence(psi, tol)?;
    k_frame_check(psi, &env.adjoint(), tol)?;
    let dual = canonical_k_dual(phi, env, tol)?;
    let projected = phi.mapped(env.proj_range_k())?;

    let outer = unit_multiplier(&projected, psi, tol)?;
    let inner = unit_multiplier(&g, &dual, tol)?;
    let product = outer.matrix() * inner.matrix();
    let right = MultiplierFactorization {
        checks: vec![NamedCheck::new(
            "composition_equals_K",
            identity_check(&product, env.k(), tol),
        )],
        operator: product,
        factors: vec![outer, inner],
    };

    let outer = unit_multiplier(&dual, &g, tol)?;
    let inner = unit_multiplier(psi, &projected, tol)?;
    let product = outer.matrix() * inner.matrix();
    let left = MultiplierFactorization {
        checks: vec![NamedCheck::new(
            "composition_equals_K_star",
            identity_check(&product, env.k_adjoint(), tol),
        )],
        operator: product,
        factors: vec![outer, inner],
    };
    Ok(BiorthogonalInverses {
        biorthogonal: g,
        canonical_dual: dual,
        right,
        left,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    /// `|(T_Psi - T_Phi)*|_{R(K)}|`.
    pub rho: f64,
    /// `a A / (b sqrt(B) |K^dag|^2)`.
    pub tau: f64,
    pub satisfied: bool,
    pub symbol_bounds: (f64, f64),
    pub frame_bounds: (f64, f64),
}

/// Checks `(sum |<f, psi_i - phi_i>|^2)^{1/2} <= tau |f|` on `R(K)`.
pub fn perturbation_condition(
    phi: &Frame,
    psi: &Frame,
    env: &OperatorEnv,
    m: &Symbol,
    a_bound: f64,
    b_bound: f64,
    tol: &Tolerances,
) -> Result<ConditionReport> {
    phi.require_same_index(psi, "perturbation_condition")?;
    if m.len() != phi.len() {
        return Err(KFrameError::ShapeMismatch(format!(
            "symbol of length {} for {} vectors",
            m.len(),
            phi.len()
        )));
    }
    let (a, b) = m.semi_normalized_bounds()?;
    let v = validate_bounds(phi, env, a_bound, b_bound, tol)?;
    if !v.valid() {
        return Err(KFrameError::InvalidBounds(format!(
            "({a_bound}, {b_bound}) are not K-frame bounds; optimal pair is ({}, {})",
            v.optimal.lower_a, v.optimal.upper_b
        )));
    }
    let diff = psi.synthesis() - phi.synthesis();
    let rho = (&diff.adjoint() * env.range_k().basis()).norm();
    let tau = a * a_bound / (b * b_bound.sqrt() * env.pinv_norm().powi(2));
    Ok(ConditionReport {
        rho,
        tau,
        satisfied: rho <= tau,
        symbol_bounds: (a, b),
        frame_bounds: (a_bound, b_bound),
    })
}

#[derive(Debug, Clone)]
pub struct PerturbationSetup {
    pub condition: ConditionReport,
    pub multiplier: Multiplier,
    /// `M_{m,Phi,Phi}` (for positive `m`, the frame operator of
    /// `{sqrt(m_i) phi_i}`) against `M_{m,Phi,Psi}` on `R(K)`.
    pub margin: Option<MarginReport>,
    /// `(M|_{R(K)})^{-1}`, ambient.
    pub restricted_inverse: ComplexMatrix,
    /// `pi_{M(R(K))}`.
    pub image_projector: ComplexMatrix,
}

fn perturbation_setup(
    phi: &Frame,
    psi: &Frame,
    env: &OperatorEnv,
    m: &Symbol,
    a_bound: f64,
    b_bound: f64,
    tol: &Tolerances,
) -> Result<PerturbationSetup> {
    let condition = perturbation_condition(phi, psi, env, m, a_bound, b_bound, tol)?;
    if !condition.satisfied {
        return Err(KFrameError::ConditionViolated {
            rho: condition.rho,
            tau: condition.tau,
        });
    }
    let multiplier = assemble_multiplier(m, phi, psi, tol)?;
    let reference = assemble_multiplier(m, phi, phi, tol)?;
    let margin = match restricted_invertibility_margin(reference.matrix(), multiplier.matrix(), env.range_k(), tol) {
        Ok(r) => Some(r),
        Err(KFrameError::NotInvertible { .. }) => None,
        Err(e) => return Err(e),
    };
    if let Some(r) = &margin {
        if !r.invertible {
            return Err(KFrameError::RestrictionSingular {
                sigma_min: r.perturbed_sigma_min,
            });
        }
    }
    let inv = match restricted_inverse(multiplier.matrix(), env.range_k(), tol) {
        Ok(inv) => inv,
        Err(KFrameError::RankDeficientRestriction { .. }) => {
            let q = env.range_k().basis();
            let sigma_min = crate::linalg::svd_decompose(&(multiplier.matrix() * q), tol.rank)?
                .singular_values
                .last()
                .copied()
                .unwrap_or(0.0);
            return Err(KFrameError::RestrictionSingular { sigma_min });
        }
        Err(e) => return Err(e),
    };
    Ok(PerturbationSetup {
        condition,
        multiplier,
        margin,
        image_projector: inv.domain().projector(),
        restricted_inverse: inv.matrix().clone(),
    })
}

#[derive(Debug, Clone)]
pub struct PerturbationDual {
    pub setup: PerturbationSetup,
    pub certificate: KDualCertificate,
}

/// Under the perturbation condition, `{K* M^{-1} pi_{M(R(K))} m_i phi_i}`
/// is a K-dual of `Psi`, with `M = M_{m,Phi,Psi}` restricted to `R(K)`.
pub fn perturbation_k_dual(
    phi: &Frame,
    psi: &Frame,
    env: &OperatorEnv,
    m: &Symbol,
    a_bound: f64,
    b_bound: f64,
    tol: &Tolerances,
) -> Result<PerturbationDual> {
    let setup = perturbation_setup(phi, psi, env, m, a_bound, b_bound, tol)?;
    let weighted = phi.synthesis().scale_columns(m.values());
    let t = &(&(env.k_adjoint() * &setup.restricted_inverse) * &setup.image_projector) * &weighted;
    let dual = Frame::from_synthesis(t)?;
    let certificate = verify_k_dual(psi, &dual, env, tol)?;
    Ok(PerturbationDual { setup, certificate })
}

/// Under the perturbation condition, `R = (M^{-1})* K` with
/// `pi_{R(K)} M_{conj(m),Psi,Phi} R = K`, and
/// `M_{1, (M^{-1})* pi_{R(K)} Phi, Phi_d} = R` for any K-dual `Phi_d` of
/// `Phi`.
///
/// The unprojected product `M_{conj(m),Psi,Phi} R` is reported as an
/// informational check: it differs from `K` by a term in `R(K)^⊥`.
#[allow(clippy::too_many_arguments)]
pub fn perturbation_right_inverse(
    phi: &Frame,
    psi: &Frame,
    env: &OperatorEnv,
    m: &Symbol,
    a_bound: f64,
    b_bound: f64,
    dual_choice: &Frame,
    tol: &Tolerances,
) -> Result<MultiplierFactorization> {
    require_dual(&verify_k_dual(phi, dual_choice, env, tol)?)?;
    let setup = perturbation_setup(phi, psi, env, m, a_bound, b_bound, tol)?;
    let inv_adj = setup.restricted_inverse.adjoint();
    let r = &inv_adj * env.k();
    let adjoint_mult = setup.multiplier.adjoint();
    let product = adjoint_mult.matrix() * &r;
    let projected_product = env.proj_range_k() * &product;

    let mapped = phi.mapped(&(&inv_adj * env.proj_range_k()))?;
    let form = unit_multiplier(&mapped, dual_choice, tol)?;
    Ok(MultiplierFactorization {
        checks: vec![
            NamedCheck::new(
                "projected_composition_equals_K",
                identity_check(&projected_product, env.k(), tol),
            ),
            NamedCheck::new("multiplier_form_equals_R", identity_check(form.matrix(), &r, tol)),
            NamedCheck::info(
                "unprojected_composition_equals_K",
                identity_check(&product, env.k(), tol),
            ),
        ],
        operator: r,
        factors: vec![adjoint_mult, form],
    })
}

#[derive(Debug, Clone)]
pub struct RangeInclusionInverses {
    /// Built when `R(T_Psi*) ⊆ R(T_Phi* K*)`.
    pub right: Option<MultiplierFactorization>,
    /// Built when `R(T_Phi*) ⊆ R(T_Psi* K)`.
    pub left: Option<MultiplierFactorization>,
    pub right_inclusion: Check,
    pub left_inclusion: Check,
}

fn range_inclusion_preamble(psi: &Frame, phi: &Frame, env: &OperatorEnv, tol: &Tolerances) -> Result<()> {
    psi.require_same_index(phi, "range_inclusion_inverses")?;
    psi.require_dim(env.dim(), "range_inclusion_inverses")?;
    k_frame_check(psi, env, tol)?;
    k_frame_check(phi, &env.adjoint(), tol)?;
    Ok(())
}

fn inclusion_error(c: Check) -> KFrameError {
    KFrameError::RangeNotIncluded {
        residual: c.residual,
        threshold: c.threshold,
    }
}

/// `(S|_V)^{-1} pi_{S(V)} T` as a frame.
fn restricted_pullback(f: &Frame, v: &crate::linalg::Subspace, tol: &Tolerances) -> Result<(Frame, ComplexMatrix)> {
    let inv = restricted_inverse(&f.frame_operator(), v, tol)?;
    let map = inv.matrix() * &inv.domain().projector();
    Ok((Frame::from_synthesis(&map * f.synthesis())?, inv.matrix().clone()))
}

/// If `R(T_Psi*) ⊆ R(T_Phi* K*)`: with
/// `Phi_dag = {(S_Phi|_{R(K*)})^{-1} pi_{S_Phi(R(K*))} phi_i}` and `Psi~` the
/// canonical K-dual of `Psi`, `M_{1, pi_{R(K)} Psi, Phi} M_{1, Phi_dag, Psi~} = K`.
pub fn range_inclusion_right_inverse(
    psi: &Frame,
    phi: &Frame,
    env: &OperatorEnv,
    tol: &Tolerances,
) -> Result<MultiplierFactorization> {
    range_inclusion_preamble(psi, phi, env, tol)?;
    let inc = range_inclusion_check(&psi.analysis(), &(&phi.analysis() * env.k_adjoint()), tol)?;
    if !inc.passed {
        return Err(inclusion_error(inc));
    }
    right_construction(psi, phi, env, inc, tol)
}

fn right_construction(
    psi: &Frame,
    phi: &Frame,
    env: &OperatorEnv,
    inc: Check,
    tol: &Tolerances,
) -> Result<MultiplierFactorization> {
    let (phi_dag, _) = restricted_pullback(phi, env.range_k_adjoint(), tol)?;
    let psi_dual = canonical_k_dual(psi, env, tol)?;
    let outer = unit_multiplier(&psi.mapped(env.proj_range_k())?, phi, tol)?;
    let inner = unit_multiplier(&phi_dag, &psi_dual, tol)?;
    let product = outer.matrix() * inner.matrix();
    Ok(MultiplierFactorization {
        checks: vec![
            NamedCheck::new("range_inclusion", inc),
            NamedCheck::new("composition_equals_K", identity_check(&product, env.k(), tol)),
        ],
        operator: product,
        factors: vec![outer, inner],
    })
}

/// If `R(T_Phi*) ⊆ R(T_Psi* K)`: with
/// `Psi_dag = {((S_Psi|_{R(K)})^{-1})* pi_{R(K)} psi_i}` and
/// `Phi~ = {K (S_Phi|_{R(K*)})^{-1} pi_{S_Phi(R(K*))} phi_i}`,
/// `M_{1, Phi~, Psi_dag} M_{1, Psi, Phi} K* = K K*`.
pub fn range_inclusion_left_inverse(
    psi: &Frame,
    phi: &Frame,
    env: &OperatorEnv,
    tol: &Tolerances,
) -> Result<MultiplierFactorization> {
    range_inclusion_preamble(psi, phi, env, tol)?;
    let inc = range_inclusion_check(&phi.analysis(), &(&psi.analysis() * env.k()), tol)?;
    if !inc.passed {
        return Err(inclusion_error(inc));
    }
    left_construction(psi, phi, env, inc, tol)
}

fn left_construction(
    psi: &Frame,
    phi: &Frame,
    env: &OperatorEnv,
    inc: Check,
    tol: &Tolerances,
) -> Result<MultiplierFactorization> {
    let m_psi = restricted_inverse(&psi.frame_operator(), env.range_k(), tol)?;
    let psi_dag = psi.mapped(&(&m_psi.matrix().adjoint() * env.proj_range_k()))?;
    let (pulled, _) = restricted_pullback(phi, env.range_k_adjoint(), tol)?;
    let phi_dual = pulled.mapped(env.k())?;
    let outer = unit_multiplier(&phi_dual, &psi_dag, tol)?;
    let inner = unit_multiplier(psi, phi, tol)?;
    let product = &(outer.matrix() * inner.matrix()) * env.k_adjoint();
    let target = env.k() * env.k_adjoint();
    Ok(MultiplierFactorization {
        checks: vec![
            NamedCheck::new("range_inclusion", inc),
            NamedCheck::new("composition_equals_KK_star", identity_check(&product, &target, tol)),
        ],
        operator: product,
        factors: vec![outer, inner],
    })
}

/// Runs whichever of the two range-inclusion constructions apply.
pub fn range_inclusion_inverses(
    psi: &Frame,
    phi: &Frame,
    env: &OperatorEnv,
    tol: &Tolerances,
) -> Result<RangeInclusionInverses> {
    range_inclusion_preamble(psi, phi, env, tol)?;
    let right_inclusion = range_inclusion_check(&psi.analysis(), &(&phi.analysis() * env.k_adjoint()), tol)?;
    let left_inclusion = range_inclusion_check(&phi.analysis(), &(&psi.analysis() * env.k()), tol)?;
    if !right_inclusion.passed && !left_inclusion.passed {
        return Err(inclusion_error(right_inclusion));
    }
    let right = if right_inclusion.passed {
        Some(right_construction(psi, phi, env, right_inclusion, tol)?)
    } else {
        None
    };
    let left = if left_inclusion.passed {
        Some(left_construction(psi, phi, env, left_inclusion, tol)?)
    } else {
        None
    };
    Ok(RangeInclusionInverses {
        right,
        left,
        right_inclusion,
        left_inclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, c4_canonical_dual};
    use crate::frames::multiset_distance;
    use crate::linalg::real_vector;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn e2() -> Frame {
        Frame::standard_basis(2)
    }

    #[test]
    fn symbols() {
        let s = Symbol::from_real(&[1.0, -2.0, 0.5]).unwrap();
        assert_eq!((s.lower_mod(), s.upper_mod(), s.sup_norm()), (0.5, 2.0, 2.0));
        assert!(s.is_semi_normalized());
        assert!(!Symbol::from_real(&[0.0, 1.0]).unwrap().is_semi_normalized());
        assert!(Symbol::with_bounds(vec![C64::new(1.0, 0.0)], 0.5, 2.0).is_ok());
        assert!(matches!(
            Symbol::with_bounds(vec![C64::new(3.0, 0.0)], 0.5, 2.0),
            Err(KFrameError::NotSemiNormalized(_))
        ));
        assert!(matches!(
            Symbol::from_real(&[0.0]).unwrap().semi_normalized_bounds(),
            Err(KFrameError::NotSemiNormalized(_))
        ));
    }

    #[test]
    fn assembling() {
        let m = unit_multiplier(&e2(), &e2(), &tol()).unwrap();
        assert!(m.matrix().distance(&ComplexMatrix::identity(2)) < 1e-15);

        let p = fixtures::planar_projection();
        let m = unit_multiplier(&p.frame, &p.frame, &tol()).unwrap();
        assert!(m.matrix().distance(&p.frame.frame_operator()) < 1e-15);

        let env = p.env();
        let dual = canonical_k_dual(&p.frame, &env, &tol()).unwrap();
        let m = unit_multiplier(&p.frame.mapped(env.proj_range_k()).unwrap(), &dual, &tol()).unwrap();
        assert!(m.matrix().distance(env.k()) < 1e-12);

        assert!(matches!(
            assemble_multiplier(&Symbol::ones(2), &p.frame, &p.frame, &tol()),
            Err(KFrameError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn right_and_left_inverses() {
        let id = unit_multiplier(&e2(), &e2(), &tol()).unwrap();
        let r = k_right_inverse(&id, &OperatorEnv::identity(2), &tol()).unwrap();
        assert!(r.operator.distance(&ComplexMatrix::identity(2)) < 1e-15);
        let l = k_left_inverse(&id, &OperatorEnv::identity(2), &tol()).unwrap();
        assert!(l.operator.distance(&ComplexMatrix::identity(2)) < 1e-15);

        let p = fixtures::planar_projection();
        let env = p.env();
        let s = unit_multiplier(&p.frame, &p.frame, &tol()).unwrap();
        // S_F^{-1} = [[3/4, 1/4], [1/4, 3/4]]
        let s_inv = ComplexMatrix::from_real_rows(&[&[0.75, 0.25], &[0.25, 0.75]]).unwrap();
        let r = k_right_inverse(&s, &env, &tol()).unwrap();
        assert!(r.operator.distance(&(&s_inv * env.k())) < 1e-12);
        let l = k_left_inverse(&s, &env, &tol()).unwrap();
        assert!(l.operator.distance(&(env.k() * &s_inv)) < 1e-12);
        assert!((&l.operator * s.matrix()).distance(env.k()) < 1e-12);

        let m = assemble_multiplier(&Symbol::from_real(&[0.0, 1.0]).unwrap(), &e2(), &e2(), &tol()).unwrap();
        assert!(matches!(
            k_right_inverse(&m, &env, &tol()),
            Err(KFrameError::NoRightInverse { .. })
        ));
        assert!(matches!(
            k_left_inverse(&m, &env, &tol()),
            Err(KFrameError::NoLeftInverse { .. })
        ));
    }

    #[test]
    fn zero_symbol_has_no_right_inverse() {
        let m = assemble_multiplier(&Symbol::from_real(&[0.0, 0.0]).unwrap(), &e2(), &e2(), &tol()).unwrap();
        assert_eq!(m.matrix().norm(), 0.0);
        let env = fixtures::planar_projection().env();
        assert!(k_right_inverse(&m, &env, &tol()).is_err());
    }

    #[test]
    fn frames_from_identity() {
        let id = unit_multiplier(&e2(), &e2(), &tol()).unwrap();
        let r = frames_from_multiplier_identity(&id, &OperatorEnv::identity(2), &tol()).unwrap();
        assert_eq!(r.hypothesis, MultiplierHypothesis::EqualsK);
        let phi = r.phi.unwrap();
        assert!((phi.guaranteed - 1.0).abs() < 1e-12 && (phi.optimal - 1.0).abs() < 1e-12);

        let p = fixtures::planar_projection();
        let env = p.env();
        let dual = canonical_k_dual(&p.frame, &env, &tol()).unwrap();
        let m = unit_multiplier(&p.frame.mapped(env.proj_range_k()).unwrap(), &dual, &tol()).unwrap();
        let r = frames_from_multiplier_identity(&m, &env, &tol()).unwrap();
        let (phi, psi) = (r.phi.unwrap(), r.psi.unwrap());
        assert!((phi.guaranteed - 1.0 / 0.72).abs() < 1e-12 && (phi.optimal - 1.5).abs() < 1e-12);
        assert!((psi.guaranteed - 1.0 / 1.5).abs() < 1e-12 && (psi.optimal - 0.72).abs() < 1e-12);

        let s = unit_multiplier(&p.frame, &p.frame, &tol()).unwrap();
        let r = frames_from_multiplier_identity(&s, &env, &tol()).unwrap();
        assert_eq!(r.hypothesis, MultiplierHypothesis::Invertible);
        assert!(r.phi.unwrap().holds() && r.psi.unwrap().holds());

        let m = assemble_multiplier(&Symbol::from_real(&[0.0, 1.0]).unwrap(), &e2(), &e2(), &tol()).unwrap();
        assert!(matches!(
            frames_from_multiplier_identity(&m, &env, &tol()),
            Err(KFrameError::HypothesisNotMet(_))
        ));
    }

    #[test]
    fn squared_symbol_bound_is_needed() {
        // m = 2, Phi = {1}, Psi = {1/2} in C^1: M = K = 1, optimal bound of
        // Phi is 1 while 1/(sup|m| B_Psi) would claim 2.
        let phi = Frame::from_real_vectors(&[&[1.0]]).unwrap();
        let psi = Frame::from_real_vectors(&[&[0.5]]).unwrap();
        let m = assemble_multiplier(&Symbol::from_real(&[2.0]).unwrap(), &phi, &psi, &tol()).unwrap();
        let r = frames_from_multiplier_identity(&m, &OperatorEnv::identity(1), &tol()).unwrap();
        let side = r.phi.unwrap();
        assert!((side.optimal - 1.0).abs() < 1e-12);
        assert!((side.guaranteed - 1.0).abs() < 1e-12);
        assert!(1.0 / (2.0 * optimal_bessel_bound(&psi)) > side.optimal);
    }

    #[test]
    fn inverses_as_multipliers() {
        let env = OperatorEnv::identity(2);
        let id = ComplexMatrix::identity(2);
        let f = left_inverse_as_multiplier(&e2(), &e2(), &env, &id, &e2(), &tol()).unwrap();
        assert!(f.passed() && f.operator.distance(&id) < 1e-15);

        let p = fixtures::planar_projection();
        let env = p.env();
        let dual = canonical_k_dual(&p.frame, &env, &tol()).unwrap();
        let l = env.proj_range_k().clone();
        let f = left_inverse_as_multiplier(&p.frame, &dual, &env, &l, &dual, &tol()).unwrap();
        assert!(f.passed(), "{:?}", f.checks);
        assert!(f.operator.distance(env.k()) < 1e-12);

        let bad = ComplexMatrix::zeros(2, 2);
        assert!(matches!(
            left_inverse_as_multiplier(&p.frame, &dual, &env, &bad, &dual, &tol()),
            Err(KFrameError::NotAnInverse { .. })
        ));
        assert!(matches!(
            left_inverse_as_multiplier(&p.frame, &dual, &env, &l, &dual.scaled(2.0), &tol()),
            Err(KFrameError::NotADual { .. })
        ));
    }

    #[test]
    fn right_inverse_as_multiplier_equals_k_r() {
        let c = fixtures::c4_minimal();
        let env = c.env();
        let adj = env.adjoint();
        // Psi a K*-frame, Phi arbitrary with the right inverse existing
        let psi = c4_canonical_dual();
        let phi = c.frame.clone();
        let base = unit_multiplier(&phi, &psi.mapped(adj.proj_range_k()).unwrap(), &tol()).unwrap();
        let r = k_right_inverse(&base, &env, &tol()).unwrap();
        let psi_dual = canonical_k_dual(&psi, &adj, &tol()).unwrap();
        let f = right_inverse_as_multiplier(&phi, &psi, &env, &r.operator, &psi_dual, &tol()).unwrap();
        assert!(f.passed(), "{:?}", f.checks);
        assert!(f.operator.distance(&(env.k() * &r.operator)) < 1e-12);
    }

    #[test]
    fn biorthogonal_inverses() {
        let env = OperatorEnv::identity(2);
        let r = biorthogonal_right_inverse(&e2(), &e2(), &env, &tol()).unwrap();
        assert!(r.right.passed() && r.left.passed());
        for m in r.right.factors.iter().chain(&r.left.factors) {
            assert!(m.matrix().distance(&ComplexMatrix::identity(2)) < 1e-15);
        }

        let c = fixtures::c4_minimal();
        let env = c.env();
        let r = biorthogonal_right_inverse(&c.frame, &c.frame, &env, &tol()).unwrap();
        assert!(r.biorthogonal.distance(&c.frame) < 1e-14);
        assert!(r.canonical_dual.distance(&c4_canonical_dual()) < 1e-12);
        assert!(r.right.factors[1].matrix().distance(env.k()) < 1e-12);
        assert!(r.right.passed() && r.left.passed());

        let dup = c4_canonical_dual();
        assert!(matches!(
            biorthogonal_right_inverse(&c.frame, &dup, &env, &tol()),
            Err(KFrameError::NotMinimal { .. })
        ));
    }

    #[test]
    fn perturbation_conditions() {
        let p = fixtures::planar_projection();
        let env = p.env();
        let ones = Symbol::ones(3);
        let c = perturbation_condition(&p.frame, &p.frame, &env, &ones, 1.0, 2.0, &tol()).unwrap();
        assert_eq!(c.rho, 0.0);
        assert!((c.tau - fixtures::PLANAR_THRESHOLD.value).abs() < 1e-12);
        assert!(c.satisfied);

        let mut shifted = p.frame.synthesis().clone();
        shifted = &shifted + &ComplexMatrix::outer(&real_vector(&[1.0, 0.0]), &real_vector(&[1.0, 0.0, 0.0]));
        let psi = Frame::from_synthesis(shifted).unwrap();
        let c = perturbation_condition(&p.frame, &psi, &env, &ones, 1.0, 2.0, &tol()).unwrap();
        assert!((c.rho - 1.0).abs() < 1e-12 && !c.satisfied);
        assert!(matches!(
            perturbation_k_dual(&p.frame, &psi, &env, &ones, 1.0, 2.0, &tol()),
            Err(KFrameError::ConditionViolated { .. })
        ));

        let zero = Symbol::from_real(&[0.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            perturbation_condition(&p.frame, &p.frame, &env, &zero, 1.0, 2.0, &tol()),
            Err(KFrameError::NotSemiNormalized(_))
        ));
    }

    #[test]
    fn unperturbed_dual_is_canonical() {
        let p = fixtures::planar_projection();
        let env = p.env();
        let d = perturbation_k_dual(&p.frame, &p.frame, &env, &Symbol::ones(3), 1.0, 2.0, &tol()).unwrap();
        assert!(d.certificate.passed);
        assert!(multiset_distance(&d.certificate.dual, &fixtures::planar_canonical_dual()) < 1e-10);
        let margin = d.setup.margin.unwrap();
        assert!(margin.sufficient && margin.distance == 0.0);

        let d = perturbation_k_dual(
            &e2(),
            &e2(),
            &OperatorEnv::identity(2),
            &Symbol::ones(2),
            1.0,
            1.0,
            &tol(),
        )
        .unwrap();
        assert!(d.certificate.dual.distance(&e2()) < 1e-14);
    }

    #[test]
    fn perturbed_dual_and_right_inverse() {
        let p = fixtures::planar_projection();
        let env = p.env();
        let tau = fixtures::PLANAR_THRESHOLD.value;
        // shift every vector along e_2: invisible on R(K) = span{e_1}, so
        // add a small e_1 component as well to get rho = tau / 2
        let dir = ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 1.0]]).unwrap();
        let rho_dir = (&dir.adjoint() * env.range_k().basis()).norm();
        let psi = Frame::from_synthesis(p.frame.synthesis() + &dir.scale_real(0.5 * tau / rho_dir)).unwrap();
        let ones = Symbol::ones(3);
        let c = perturbation_condition(&p.frame, &psi, &env, &ones, 1.0, 2.0, &tol()).unwrap();
        assert!((c.rho - tau / 2.0).abs() < 1e-12);
        let d = perturbation_k_dual(&p.frame, &psi, &env, &ones, 1.0, 2.0, &tol()).unwrap();
        assert!(d.certificate.passed && d.certificate.residual <= 1e-9);
        assert!(d.setup.margin.unwrap().sufficient);

        let dual = canonical_k_dual(&p.frame, &env, &tol()).unwrap();
        let f = perturbation_right_inverse(&p.frame, &psi, &env, &ones, 1.0, 2.0, &dual, &tol()).unwrap();
        assert!(f.passed(), "{:?}", f.checks);
    }

    #[test]
    fn unprojected_composition_fails_on_the_planar_instance() {
        let p = fixtures::planar_projection();
        let env = p.env();
        let dual = canonical_k_dual(&p.frame, &env, &tol()).unwrap();
        let f =
            perturbation_right_inverse(&p.frame, &p.frame, &env, &Symbol::ones(3), 1.0, 2.0, &dual, &tol()).unwrap();
        assert!(f.passed());
        let raw = f.factors[0].matrix() * &f.operator;
        let expected = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[-0.6, 0.0]]).unwrap();
        assert!(raw.distance(&expected) < 1e-12);
        assert!(!f.check("unprojected_composition_equals_K").unwrap().passed);
    }

    #[test]
    fn range_inclusion_hand_instance() {
        let env = fixtures::planar_projection().env();
        let f = Frame::from_real_vectors(&[&[1.0, 0.0], &[1.0, 0.0]]).unwrap();
        let r = range_inclusion_inverses(&f, &f, &env, &tol()).unwrap();
        let right = r.right.unwrap();
        assert!(right.passed());
        assert!(right.operator.distance(env.k()) < 1e-12);
        let outer = ComplexMatrix::from_real_diagonal(&[2.0, 0.0]);
        let inner = ComplexMatrix::from_real_diagonal(&[0.5, 0.0]);
        assert!(right.factors[0].matrix().distance(&outer) < 1e-12);
        assert!(right.factors[1].matrix().distance(&inner) < 1e-12);
        assert!(r.left.unwrap().passed());
    }

    #[test]
    fn range_inclusion_identity_and_mismatch() {
        let env = OperatorEnv::identity(2);
        let r = range_inclusion_inverses(&e2(), &e2(), &env, &tol()).unwrap();
        assert!(r.right.unwrap().operator.distance(&ComplexMatrix::identity(2)) < 1e-14);
        assert!(r.left.unwrap().operator.distance(&ComplexMatrix::identity(2)) < 1e-14);

        let env = fixtures::planar_projection().env();
        let psi = e2();
        let phi = Frame::from_real_vectors(&[&[1.0, 0.0], &[1.0, 0.0]]).unwrap();
        assert!(matches!(
            range_inclusion_inverses(&psi, &phi, &env, &tol()),
            Err(KFrameError::RangeNotIncluded { .. })
        ));
        assert!(matches!(
            range_inclusion_right_inverse(&psi, &phi, &env, &tol()),
            Err(KFrameError::RangeNotIncluded { .. })
        ));
        let three = Frame::from_real_vectors(&[&[1.0, 0.0], &[1.0, 0.0], &[1.0, 0.0]]).unwrap();
        assert!(matches!(
            range_inclusion_inverses(&psi, &three, &env, &tol()),
            Err(KFrameError::ShapeMismatch(_))
        ));
    }
}
