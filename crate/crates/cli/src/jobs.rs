use std::path::PathBuf;

use clap::ValueEnum;
use kframe_core::duality::{
    admissible_directions, canonical_dual_bound_certificate, canonical_parts, dual_family_generate,
    dual_family_recover_phi, k_dual_lower_bounds, noncommutativity_witness, reciprocal_dual, verify_k_dual,
    DualLowerBounds, DualPerturbation,
};
use kframe_core::frames::{
    k_frame_check, minimality_check, restricted_inverse_bound_check, tightness_check, validate_bounds,
    BoundsValidation, TightnessReport, LOWER_BOUND_ROUTE_TOLERANCE,
};
use kframe_core::linalg::douglas::MAJORIZATION_ROUTE_TOLERANCE;
use kframe_core::linalg::{majorization_constant, range_inclusion_check};
use kframe_core::multipliers::{
    assemble_multiplier, frames_from_multiplier_identity, k_left_inverse, k_right_inverse, perturbation_condition,
    perturbation_k_dual, perturbation_right_inverse, range_inclusion_left_inverse, range_inclusion_right_inverse,
    GuaranteedBound, MultiplierFactorization, MultiplierHypothesis,
};
use kframe_core::random::{self, complex_matrix, DEFAULT_SEED};
use kframe_core::{duality, Check, ComplexMatrix, Frame, OperatorEnv, Symbol, Tolerances};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::golden;
use crate::io::{frame_json, load_frame, load_matrix, load_symbol, matrix_json, symbol_json};
use crate::report::{Report, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Optimal K-frame bounds, tightness and minimality.
    Analyze,
    /// Canonical K-dual with its certificates.
    Dual,
    /// A seeded member of the K-dual family and its round trip.
    DualFamily,
    /// Assemble a multiplier and check its norm bound.
    Multiplier,
    /// K-right inverse of a multiplier.
    RightInverse,
    /// K-left inverse of a multiplier.
    LeftInverse,
    /// Perturbation condition, perturbed K-dual and right inverse.
    PerturbCheck,
    /// Verify that the second frame is a K-dual of the first.
    Verify,
    /// Built-in golden suite.
    Examples,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Dual => "dual",
            Command::DualFamily => "dual-family",
            Command::Multiplier => "multiplier",
            Command::RightInverse => "right-inverse",
            Command::LeftInverse => "left-inverse",
            Command::PerturbCheck => "perturb-check",
            Command::Verify => "verify",
            Command::Examples => "examples",
        }
    }
}

#[derive(Debug, Clone)]
pub struct JobSpec {
    pub command: Command,
    pub frames: Vec<PathBuf>,
    pub operator: Option<PathBuf>,
    pub symbol: Option<PathBuf>,
    pub tolerances: Tolerances,
    pub seed: Option<u64>,
    /// Stated `(A, B)` for `analyze` and `perturb-check`.
    pub bounds: Option<(f64, f64)>,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        JobSpec {
            command,
            frames: Vec::new(),
            operator: None,
            symbol: None,
            tolerances: Tolerances::default(),
            seed: None,
            bounds: None,
        }
    }
}

struct Inputs {
    frames: Vec<Frame>,
    operator: Option<ComplexMatrix>,
    symbol: Option<Symbol>,
}

impl Inputs {
    fn env(&self, tol: &Tolerances) -> Result<OperatorEnv, CliError> {
        match &self.operator {
            Some(k) => Ok(OperatorEnv::new(k.clone(), tol)?),
            // No operator: K is the identity and K-frames are ordinary frames.
            None => Ok(OperatorEnv::new(ComplexMatrix::identity(self.frames[0].dim()), tol)?),
        }
    }

    fn symbol_or_ones(&self, len: usize) -> Symbol {
        self.symbol.clone().unwrap_or_else(|| Symbol::ones(len))
    }

    fn symbol(&self) -> Result<Symbol, CliError> {
        self.symbol
            .clone()
            .ok_or_else(|| CliError::Usage("--symbol is required".into()))
    }
}

fn frame_count(cmd: Command) -> Option<usize> {
    match cmd {
        Command::Analyze | Command::Dual | Command::DualFamily => Some(1),
        Command::Multiplier
        | Command::RightInverse
        | Command::LeftInverse
        | Command::PerturbCheck
        | Command::Verify => Some(2),
        Command::Examples => None,
    }
}

/// Reads and parses every referenced file before any computation.
fn load(spec: &JobSpec, report: &mut Report) -> Result<Inputs, CliError> {
    if let Some(n) = frame_count(spec.command) {
        if spec.frames.len() != n {
            return Err(CliError::Usage(format!(
                "{} needs exactly {n} --frame argument(s), got {}",
                spec.command.name(),
                spec.frames.len()
            )));
        }
    }
    let mut frames = Vec::new();
    let mut listed = Vec::new();
    for p in &spec.frames {
        let f = load_frame(p)?;
        listed.push(json!({ "path": p.display().to_string(), "dim": f.dim(), "len": f.len() }));
        frames.push(f);
    }
    if !listed.is_empty() {
        report.input("frames", Value::Array(listed));
    }
    let operator = match &spec.operator {
        Some(p) => {
            let k = load_matrix(p)?;
            report.input(
                "operator",
                json!({ "path": p.display().to_string(), "rows": k.rows(), "cols": k.cols() }),
            );
            Some(k)
        }
        None => None,
    };
    let symbol = match &spec.symbol {
        Some(p) => {
            let s = load_symbol(p)?;
            report.input("symbol", json!({ "path": p.display().to_string(), "len": s.len() }));
            Some(s)
        }
        None => None,
    };
    if let Some((a, b)) = spec.bounds {
        report.input("bounds", json!([a, b]));
    }
    Ok(Inputs {
        frames,
        operator,
        symbol,
    })
}

/// Runs one job. Errors end up inside the report, never as a panic.
pub fn run_job(spec: &JobSpec) -> Report {
    let mut report = Report::new(spec.command.name(), spec.tolerances);
    let outcome = load(spec, &mut report).and_then(|inputs| dispatch(spec, &inputs, &mut report));
    if let Err(e) = outcome {
        report.fail_with(&e);
    }
    report
}

fn dispatch(spec: &JobSpec, inputs: &Inputs, report: &mut Report) -> Result<(), CliError> {
    let tol = &spec.tolerances;
    match spec.command {
        Command::Analyze => analyze(inputs, spec.bounds, tol, report),
        Command::Dual => dual(inputs, tol, report),
        Command::DualFamily => {
            let seed = spec.seed.unwrap_or(DEFAULT_SEED);
            report.seed = Some(seed);
            dual_family(inputs, seed, tol, report)
        }
        Command::Multiplier => multiplier(inputs, tol, report),
        Command::RightInverse => right_inverse(inputs, tol, report),
        Command::LeftInverse => left_inverse(inputs, tol, report),
        Command::PerturbCheck => perturb_check(inputs, spec.bounds, tol, report),
        Command::Verify => verify(inputs, tol, report),
        Command::Examples => golden::run(tol, report),
    }
}

fn bounds_verdict(v: &BoundsValidation, a: f64, b: f64, tol: &Tolerances) -> Verdict {
    let lower = (a - v.optimal.lower_a) / v.optimal.lower_a;
    let upper = (v.optimal.upper_b - b) / v.optimal.upper_b;
    Verdict {
        name: "stated_bounds".into(),
        passed: v.valid(),
        residual: lower.max(upper).max(0.0),
        threshold: tol.identity,
        informational: false,
    }
}

fn tightness_json(t: &TightnessReport) -> Value {
    json!({
        "constant": t.constant,
        "residual": t.residual,
        "threshold": t.threshold,
        "tight": t.tight,
        "parseval": t.parseval,
    })
}

fn analyze(inputs: &Inputs, bounds: Option<(f64, f64)>, tol: &Tolerances, report: &mut Report) -> Result<(), CliError> {
    let f = &inputs.frames[0];
    let env = inputs.env(tol)?;
    let inc = range_inclusion_check(env.k(), f.synthesis(), tol)?;
    report.check("range_inclusion", inc);
    if !inc.passed {
        return Ok(());
    }
    let maj = majorization_constant(env.k(), f.synthesis(), tol)?;
    let routes = Check::new(
        (maj.lambda - maj.lambda_eigen).abs(),
        MAJORIZATION_ROUTE_TOLERANCE * maj.lambda.max(1.0),
    );
    report.check("lower_bound_routes_agree", routes);
    let b = k_frame_check(f, &env, tol)?;
    report.result("optimal_lower", json!(b.lower_a));
    report.result("optimal_upper", json!(b.upper_b));
    report.result("majorization_constant", json!(maj.lambda));
    report.result("operator_rank", json!(env.rank()));
    report.result("operator_norm", json!(env.norm()));
    report.result("operator_pinv_norm", json!(env.pinv_norm()));
    report.result("tightness", tightness_json(&tightness_check(f, &env, tol)?));
    report.result("minimal", json!(minimality_check(f, tol)?));
    report.check(
        "restricted_inverse_gain",
        restricted_inverse_bound_check(f, &env, b.lower_a, b.upper_b, tol)?,
    );
    if let Some((a, bb)) = bounds {
        let v = validate_bounds(f, &env, a, bb, tol)?;
        report.verdict(bounds_verdict(&v, a, bb, tol));
    }
    Ok(())
}

fn lower_bounds_verdict(lb: &DualLowerBounds) -> Verdict {
    let short = |x: f64, floor: f64| ((floor - x) / floor).max(0.0);
    Verdict {
        name: "dual_lower_bounds_dominate".into(),
        passed: lb.dominated(),
        residual: short(lb.dual_lower, lb.inverse_frame_bessel).max(short(lb.projected_lower, lb.inverse_dual_bessel)),
        threshold: LOWER_BOUND_ROUTE_TOLERANCE,
        informational: false,
    }
}

fn lower_bounds_json(lb: &DualLowerBounds) -> Value {
    json!({
        "dual_lower": lb.dual_lower,
        "projected_lower": lb.projected_lower,
        "inverse_frame_bessel": lb.inverse_frame_bessel,
        "inverse_dual_bessel": lb.inverse_dual_bessel,
    })
}

fn dual(inputs: &Inputs, tol: &Tolerances, report: &mut Report) -> Result<(), CliError> {
    let f = &inputs.frames[0];
    let env = inputs.env(tol)?;
    let parts = canonical_parts(f, &env, tol)?;
    report.result("canonical_dual", frame_json(&parts.dual));
    let cert = verify_k_dual(f, &parts.dual, &env, tol)?;
    report.check("k_dual", cert.check());
    let lb = k_dual_lower_bounds(&cert)?;
    report.result("lower_bounds", lower_bounds_json(&lb));
    report.verdict(lower_bounds_verdict(&lb));

    let b = k_frame_check(f, &env, tol)?;
    let env_report = canonical_dual_bound_certificate(f, &env, b.lower_a, b.upper_b, tol)?;
    report.result(
        "dual_bounds",
        json!({
            "envelope": [env_report.envelope_lower, env_report.envelope_upper],
            "dual": [env_report.dual_lower, env_report.dual_upper],
        }),
    );
    let lo = ((env_report.envelope_lower - env_report.dual_lower) / env_report.envelope_lower).max(0.0);
    let hi = ((env_report.dual_upper - env_report.envelope_upper) / env_report.envelope_upper).max(0.0);
    report.verdict(Verdict {
        name: "dual_bounds_within_envelope".into(),
        passed: env_report.passed(),
        residual: lo.max(hi),
        threshold: LOWER_BOUND_ROUTE_TOLERANCE,
        informational: false,
    });
    report.result(
        "dual_tightness",
        tightness_json(&tightness_check(&parts.dual, &env.adjoint(), tol)?),
    );

    let recip = reciprocal_dual(f, &env, tol)?;
    report.check("reciprocal_dual", recip.check());

    let w = noncommutativity_witness(f, &env, tol)?;
    report.result(
        "witness",
        json!({
            "composition": frame_json(&w.composition),
            "composition_discrepancies": w.composition_discrepancies,
            "double_dual": frame_json(&w.double_dual),
            "double_dual_discrepancies": w.double_dual_discrepancies,
            "recovers": w.recovers,
        }),
    );
    report.verdict(Verdict::new("double_dual_recovers", Check::new(w.max_discrepancy(), w.threshold)).info());
    Ok(())
}

fn dual_family(inputs: &Inputs, seed: u64, tol: &Tolerances, report: &mut Report) -> Result<(), CliError> {
    let f = &inputs.frames[0];
    let env = inputs.env(tol)?;
    let dirs = admissible_directions(f, &env, tol)?;
    let mut g = random::rng(seed);
    let phi = dirs.basis() * &complex_matrix(&mut g, dirs.dim(), f.dim());
    let pert = DualPerturbation::new(phi)?;
    report.result("admissible_dimension", json!(dirs.dim()));
    report.result("phi", matrix_json(&pert.phi));
    report.check("admissible", pert.admissibility(f, &env, tol)?);

    let dual = dual_family_generate(f, &env, &pert, tol)?;
    report.result("dual", frame_json(&dual));
    report.check("k_dual", verify_k_dual(f, &dual, &env, tol)?.check());

    let back = dual_family_recover_phi(f, &dual, &env, tol)?;
    let again = dual_family_generate(f, &env, &back, tol)?;
    let scale = dual.synthesis().norm();
    report.check(
        "round_trip",
        tol.check(again.synthesis().distance(dual.synthesis()), scale),
    );
    report.check(
        "recovered_phi",
        tol.check(back.phi.distance(&pert.phi), pert.phi.norm()),
    );
    Ok(())
}

fn bound_json(b: &Option<GuaranteedBound>) -> Value {
    match b {
        Some(b) => json!({ "guaranteed": b.guaranteed, "optimal": b.optimal }),
        None => Value::Null,
    }
}

fn multiplier(inputs: &Inputs, tol: &Tolerances, report: &mut Report) -> Result<(), CliError> {
    let (phi, psi) = (&inputs.frames[0], &inputs.frames[1]);
    let m = inputs.symbol()?;
    let mult = assemble_multiplier(&m, phi, psi, tol)?;
    report.result("symbol", symbol_json(&m));
    report.result("matrix", matrix_json(mult.matrix()));
    report.result("norm", json!(mult.matrix().norm()));
    report.result("norm_bound", json!(mult.norm_bound()));
    report.check("norm_bound", mult.norm_bound_check(tol));
    if inputs.operator.is_some() {
        let env = inputs.env(tol)?;
        match frames_from_multiplier_identity(&mult, &env, tol) {
            Ok(r) => {
                let hyp = match r.hypothesis {
                    MultiplierHypothesis::EqualsK => "equals_k",
                    MultiplierHypothesis::Invertible => "invertible",
                };
                report.result(
                    "frame_lower_bounds",
                    json!({ "hypothesis": hyp, "phi": bound_json(&r.phi), "psi": bound_json(&r.psi) }),
                );
                for (name, side) in [("phi_lower_bound", r.phi), ("psi_lower_bound", r.psi)] {
                    if let Some(s) = side {
                        report.verdict(Verdict {
                            name: name.into(),
                            passed: s.holds(),
                            residual: s.guaranteed,
                            threshold: s.optimal * (1.0 + LOWER_BOUND_ROUTE_TOLERANCE),
                            informational: false,
                        });
                    }
                }
            }
            Err(e @ kframe_core::KFrameError::HypothesisNotMet(_)) => {
                report.result(
                    "frame_lower_bounds",
                    json!({ "applicable": false, "reason": e.to_string() }),
                );
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}

fn factorization(report: &mut Report, prefix: &str, f: &MultiplierFactorization) {
    report.result(&format!("{prefix}_operator"), matrix_json(&f.operator));
    for c in &f.checks {
        let v = Verdict::new(format!("{prefix}:{}", c.name), c.check);
        report.verdict(if c.informational { v.info() } else { v });
    }
}

/// The unit-symbol construction from range inclusion; reported without
/// affecting the verdict.
fn inclusion_construction(report: &mut Report, prefix: &str, result: kframe_core::Result<MultiplierFactorization>) {
    match result {
        Ok(f) => {
            report.result(&format!("{prefix}_operator"), matrix_json(&f.operator));
            for c in &f.checks {
                report.verdict(Verdict::new(format!("{prefix}:{}", c.name), c.check).info());
            }
        }
        Err(e) => report.result(prefix, json!({ "applicable": false, "reason": e.to_string() })),
    }
}

fn right_inverse(inputs: &Inputs, tol: &Tolerances, report: &mut Report) -> Result<(), CliError> {
    let (phi, psi) = (&inputs.frames[0], &inputs.frames[1]);
    let env = inputs.env(tol)?;
    let m = inputs.symbol_or_ones(phi.len());
    let mult = assemble_multiplier(&m, phi, psi, tol)?;
    report.result("multiplier", matrix_json(mult.matrix()));
    let r = k_right_inverse(&mult, &env, tol)?;
    report.result("right_inverse", matrix_json(&r.operator));
    report.result("majorization_constant", json!(r.lambda));
    report.check("multiplier_times_inverse_equals_K", Check::new(r.residual, r.threshold));
    inclusion_construction(
        report,
        "range_inclusion",
        range_inclusion_right_inverse(phi, psi, &env, tol),
    );
    Ok(())
}

fn left_inverse(inputs: &Inputs, tol: &Tolerances, report: &mut Report) -> Result<(), CliError> {
    let (phi, psi) = (&inputs.frames[0], &inputs.frames[1]);
    let env = inputs.env(tol)?;
    let m = inputs.symbol_or_ones(phi.len());
    let mult = assemble_multiplier(&m, phi, psi, tol)?;
    report.result("multiplier", matrix_json(mult.matrix()));
    let l = k_left_inverse(&mult, &env, tol)?;
    report.result("left_inverse", matrix_json(&l.operator));
    report.result("majorization_constant", json!(l.lambda));
    report.check("inverse_times_multiplier_equals_K", Check::new(l.residual, l.threshold));
    inclusion_construction(
        report,
        "range_inclusion",
        range_inclusion_left_inverse(phi, psi, &env, tol),
    );
    Ok(())
}

fn perturb_check(
    inputs: &Inputs,
    bounds: Option<(f64, f64)>,
    tol: &Tolerances,
    report: &mut Report,
) -> Result<(), CliError> {
    let (phi, psi) = (&inputs.frames[0], &inputs.frames[1]);
    let env = inputs.env(tol)?;
    let m = inputs.symbol_or_ones(phi.len());
    let (a, b) = match bounds {
        Some(ab) => ab,
        None => {
            let opt = k_frame_check(phi, &env, tol)?;
            (opt.lower_a, opt.upper_b)
        }
    };
    report.result("frame_bounds", json!([a, b]));
    let cond = perturbation_condition(phi, psi, &env, &m, a, b, tol)?;
    report.result("rho", json!(cond.rho));
    report.result("tau", json!(cond.tau));
    report.result("symbol_bounds", json!([cond.symbol_bounds.0, cond.symbol_bounds.1]));
    report.check("perturbation_condition", Check::new(cond.rho, cond.tau));
    if !cond.satisfied {
        return Ok(());
    }
    let d = perturbation_k_dual(phi, psi, &env, &m, a, b, tol)?;
    report.result("dual", frame_json(&d.certificate.dual));
    if let Some(margin) = d.setup.margin {
        report.result(
            "invertibility_margin",
            json!({
                "distance": margin.distance,
                "margin": margin.margin,
                "sufficient": margin.sufficient,
            }),
        );
    }
    report.check("k_dual", d.certificate.check());
    let canonical = duality::canonical_k_dual(phi, &env, tol)?;
    let f = perturbation_right_inverse(phi, psi, &env, &m, a, b, &canonical, tol)?;
    factorization(report, "right_inverse", &f);
    Ok(())
}

fn verify(inputs: &Inputs, tol: &Tolerances, report: &mut Report) -> Result<(), CliError> {
    let (f, g) = (&inputs.frames[0], &inputs.frames[1]);
    let env = inputs.env(tol)?;
    let cert = verify_k_dual(f, g, &env, tol)?;
    report.check("k_dual", cert.check());
    if let Some(lb) = &cert.lower_bound_report {
        report.result("lower_bounds", lower_bounds_json(lb));
        report.verdict(lower_bounds_verdict(lb));
    }
    let recon = &(env.proj_range_k() * f.synthesis()) * &g.analysis();
    report.result("reconstruction", matrix_json(&recon));
    Ok(())
}
