use kahler_lab::LabError;
use serde_json::{json, Value};

/// Why a run stopped. Exit code 2 marks bad input or a broken invariant,
/// 3 a mathematical certification that did not go through.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Lab(LabError),
    Expectation(String),
}

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        Failure::Lab(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Lab(LabError::Certification(_)) => 3,
            Failure::Lab(_) => 2,
            Failure::Expectation(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Input(_) => "input",
            Failure::Expectation(_) => "expectation",
            Failure::Lab(e) => match e {
                LabError::InvalidGrid(_) => "invalid-grid",
                LabError::Invariant { .. } => "invariant",
                LabError::Mismatch(_) => "mismatch",
                LabError::NotIntegrable { .. } => "not-integrable",
                LabError::BarrierTooSmall { .. } => "barrier-too-small",
                LabError::Inadmissible(_) => "inadmissible",
                LabError::NoConvergence { .. } => "no-convergence",
                LabError::FTraceNonConvex { .. } => "f-trace-nonconvex",
                LabError::Certification(_) => "certification",
                LabError::Quadrature { .. } => "quadrature",
                LabError::Parse(_) => "parse",
            },
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Input(m) | Failure::Expectation(m) => m.clone(),
            Failure::Lab(e) => e.to_string(),
        }
    }

    pub fn diagnostic(&self) -> Value {
        let mut d = json!({
            "status": "error",
            "exit_code": self.exit_code(),
            "kind": self.kind(),
            "message": self.message(),
        });
        if let Failure::Lab(LabError::Invariant {
            what,
            index,
            value,
            tol,
        }) = self
        {
            d["invariant"] = json!({ "name": what, "index": index, "value": value, "tol": tol });
        }
        d
    }
}
