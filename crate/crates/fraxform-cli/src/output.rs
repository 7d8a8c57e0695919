//! Serializable output documents. Field order is part of the schema; golden
//! tests pin the solve document.

use serde::Serialize;

/// One derivation step: which rule fired and what it rewrote.
#[derive(Serialize)]
pub struct Step {
    pub rule: String,
    pub before: String,
    pub after: String,
}

#[derive(Serialize)]
pub struct TransformDoc {
    pub command: &'static str,
    pub input: String,
    pub alpha: String,
    pub kind: String,
    pub direction: &'static str,
    pub steps: Vec<Step>,
    pub result: String,
    pub checks: TransformChecks,
}

#[derive(Serialize)]
pub struct TransformChecks {
    /// Applying the opposite direction reproduces the input exactly.
    pub roundtrip_exact: bool,
}

#[derive(Serialize)]
pub struct SolveDoc {
    pub command: &'static str,
    pub input: String,
    pub alpha: String,
    pub route: String,
    pub steps: Vec<Step>,
    pub result: SolveResult,
    pub checks: SolveChecks,
}

#[derive(Serialize)]
pub struct SolveResult {
    pub solution: String,
    /// (coefficient, rate) pairs as exact rationals, sorted by rate.
    pub atoms: Vec<[String; 2]>,
}

#[derive(Serialize)]
pub struct SolveChecks {
    pub residual_exact_zero: bool,
    pub initial_reproduced: bool,
    pub residual_numeric_alpha1: Option<f64>,
}

#[derive(Serialize)]
pub struct VerifyDoc {
    pub command: &'static str,
    pub suite: String,
    pub alpha: String,
    pub skipped: bool,
    pub skip_reason: Option<String>,
    pub cases: Vec<CaseRecord>,
    pub passed: usize,
    pub failed: usize,
}

/// One verify case; numeric fields are absent for exact (zero-tolerance)
/// checks.
#[derive(Serialize)]
pub struct CaseRecord {
    pub name: String,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub absdiff: Option<f64>,
    pub tolerance: Option<f64>,
    pub verdict: String,
}

impl CaseRecord {
    pub fn exact(name: impl Into<String>, holds: bool) -> Self {
        CaseRecord {
            name: name.into(),
            lhs: None,
            rhs: None,
            absdiff: None,
            tolerance: None,
            verdict: if holds { "pass".into() } else { "fail".into() },
        }
    }

    pub fn numeric(
        name: impl Into<String>,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
    ) -> Self {
        let absdiff = (lhs - rhs).abs();
        CaseRecord {
            name: name.into(),
            lhs: Some(lhs),
            rhs: Some(rhs),
            absdiff: Some(absdiff),
            tolerance: Some(tolerance),
            verdict: if absdiff <= tolerance {
                "pass".into()
            } else {
                "fail".into()
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

#[derive(Serialize)]
pub struct EvalDoc {
    pub command: &'static str,
    pub input: String,
    pub alpha: String,
    pub rows: Vec<EvalRow>,
    pub errors: Vec<EvalError>,
}

#[derive(Serialize)]
pub struct EvalRow {
    pub t: f64,
    pub value: f64,
}

#[derive(Serialize)]
pub struct EvalError {
    pub t: f64,
    pub message: String,
}

#[derive(Serialize)]
pub struct TableDoc {
    pub command: &'static str,
    pub alpha: String,
    pub rows: Vec<TableRow>,
}

#[derive(Serialize)]
pub struct TableRow {
    pub atom: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sine: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cosine: Option<String>,
}

/// Machine-readable diagnostic printed to stderr on failure.
#[derive(Serialize)]
pub struct Diagnostic {
    pub error: DiagnosticBody,
}

#[derive(Serialize)]
pub struct DiagnosticBody {
    pub code: i32,
    pub kind: String,
    pub message: String,
}
