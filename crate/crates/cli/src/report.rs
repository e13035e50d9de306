use kframe_core::{Check, KFrameError, RankTolerance, Tolerances};
use serde_json::{json, Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub threshold: f64,
    /// Reported but not part of the overall verdict.
    pub informational: bool,
}

impl Verdict {
    pub fn new(name: impl Into<String>, check: Check) -> Self {
        Verdict {
            name: name.into(),
            passed: check.passed,
            residual: check.residual,
            threshold: check.threshold,
            informational: false,
        }
    }

    /// A lower-bound test: passes when `value > floor`.
    pub fn exceeds(name: impl Into<String>, value: f64, floor: f64) -> Self {
        Verdict {
            name: name.into(),
            passed: value > floor,
            residual: value,
            threshold: floor,
            informational: false,
        }
    }

    pub fn info(mut self) -> Self {
        self.informational = true;
        self
    }

    fn json(&self) -> Value {
        json!({
            "name": self.name,
            "passed": self.passed,
            "residual": self.residual,
            "threshold": self.threshold,
            "informational": self.informational,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorInfo {
    pub code: String,
    pub message: String,
    pub exit_code: u8,
}

/// Everything a command produced. Assembly order does not matter: keys are
/// emitted sorted, so identical runs give byte-identical JSON.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub tolerances: Tolerances,
    pub seed: Option<u64>,
    pub results: Map<String, Value>,
    pub verdicts: Vec<Verdict>,
    pub error: Option<ErrorInfo>,
}

impl Report {
    pub fn new(command: &str, tolerances: Tolerances) -> Self {
        Report {
            command: command.to_string(),
            inputs: Map::new(),
            tolerances,
            seed: None,
            results: Map::new(),
            verdicts: Vec::new(),
            error: None,
        }
    }

    pub fn input(&mut self, key: &str, value: Value) {
        self.inputs.insert(key.to_string(), value);
    }

    pub fn result(&mut self, key: &str, value: Value) {
        self.results.insert(key.to_string(), value);
    }

    pub fn verdict(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn check(&mut self, name: &str, c: Check) {
        self.verdicts.push(Verdict::new(name, c));
    }

    pub fn fail_with(&mut self, e: &CliError) {
        if let CliError::Core(core) = e {
            if let Some((residual, threshold)) = measured(core) {
                self.verdicts.push(Verdict {
                    name: format!("precondition:{}", core.code()),
                    passed: false,
                    residual,
                    threshold,
                    informational: false,
                });
            }
        }
        self.error = Some(ErrorInfo {
            code: e.code().to_string(),
            message: e.to_string(),
            exit_code: e.exit_code(),
        });
    }

    pub fn passed(&self) -> bool {
        self.error.is_none() && self.verdicts.iter().all(|v| v.informational || v.passed)
    }

    pub fn exit_code(&self) -> u8 {
        match &self.error {
            Some(e) => e.exit_code,
            None if self.passed() => 0,
            None => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let residuals: Map<String, Value> = self
            .verdicts
            .iter()
            .map(|v| (v.name.clone(), json!(v.residual)))
            .collect();
        let rank = match self.tolerances.rank {
            RankTolerance::Relative(f) => json!({ "relative": f }),
            RankTolerance::Absolute(a) => json!({ "absolute": a }),
        };
        let mut out = json!({
            "command": self.command,
            "inputs": self.inputs,
            "tolerances": { "identity": self.tolerances.identity, "rank": rank },
            "seed": self.seed,
            "results": self.results,
            "verdicts": self.verdicts.iter().map(Verdict::json).collect::<Vec<_>>(),
            "residuals": residuals,
            "passed": self.passed(),
        });
        if let Some(e) = &self.error {
            out["error"] = json!({ "code": e.code, "message": e.message });
        }
        out
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report values are serializable")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("command: {}\n", self.command);
        for (k, v) in &self.inputs {
            s.push_str(&format!("input {k}: {}\n", compact(v)));
        }
        s.push_str(&format!("tolerance: identity {:e}\n", self.tolerances.identity));
        if let Some(seed) = self.seed {
            s.push_str(&format!("seed: {seed}\n"));
        }
        for (k, v) in &self.results {
            s.push_str(&format!("{k}: {}\n", compact(v)));
        }
        for v in &self.verdicts {
            let tag = match (v.passed, v.informational) {
                (true, false) => "PASS",
                (false, false) => "FAIL",
                (true, true) => "info ok",
                (false, true) => "info no",
            };
            s.push_str(&format!(
                "{tag} {}: residual {:e}, threshold {:e}\n",
                v.name, v.residual, v.threshold
            ));
        }
        if let Some(e) = &self.error {
            s.push_str(&format!("error [{}]: {}\n", e.code, e.message));
        }
        s.push_str(if self.passed() {
            "result: pass\n"
        } else {
            "result: fail\n"
        });
        s
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn measured(e: &KFrameError) -> Option<(f64, f64)> {
    use KFrameError::*;
    match *e {
        RangeNotIncluded { residual, threshold }
        | NotKFrame { residual, threshold }
        | NotADual { residual, threshold }
        | NotARepresentation { residual, threshold }
        | NoRightInverse { residual, threshold }
        | NoLeftInverse { residual, threshold }
        | NotAnInverse { residual, threshold } => Some((residual, threshold)),
        InadmissiblePerturbation { violation, threshold } => Some((violation, threshold)),
        ConditionViolated { rho, tau } => Some((rho, tau)),
        _ => None,
    }
}
