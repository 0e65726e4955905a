use serde::Serialize;

/// One named verification outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, details: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            details: details.into(),
        }
    }

    /// A check whose computation itself failed; the error becomes the details.
    pub fn from_result(name: impl Into<String>, r: crate::Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, details)) => Check::new(name, passed, details),
            Err(e) => Check::new(name, false, format!("error: {e}")),
        }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}
