//! Comparison records shared by the verification suite and the CLI:
//! every claim reduces to an expected/actual string pair so reports
//! serialize identically in text and JSON.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl Check {
    pub fn compare(name: impl Into<String>, expected: String, actual: String) -> Check {
        let pass = expected == actual;
        Check {
            name: name.into(),
            expected,
            actual,
            pass,
        }
    }

    pub fn named_bool(name: impl Into<String>, pass: bool) -> Check {
        Check {
            name: name.into(),
            expected: "true".into(),
            actual: pass.to_string(),
            pass,
        }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}
