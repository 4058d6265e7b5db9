use serde::{Deserialize, Serialize};
use std::fmt;

pub const CHECKS: [&str; 11] = [
    "gauss",
    "dh_classical",
    "dh_generalized",
    "xi_interp",
    "coleman_interp",
    "euler_identities",
    "conductor_unit",
    "det_signs",
    "functional_eq",
    "period_b",
    "pairing",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Gauss,
    DhClassical,
    DhGeneralized,
    XiInterp,
    ColemanInterp,
    EulerIdentities,
    ConductorUnit,
    DetSigns,
    FunctionalEq,
    PeriodB,
    Pairing,
}

impl Check {
    pub fn all() -> [Check; 11] {
        use Check::*;
        [Gauss, DhClassical, DhGeneralized, XiInterp, ColemanInterp, EulerIdentities, ConductorUnit, DetSigns, FunctionalEq, PeriodB, Pairing]
    }

    pub fn name(self) -> &'static str {
        CHECKS[Self::all().iter().position(|&c| c == self).unwrap()]
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budget {
    /// largest number of elementary terms a single case may sum
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_terms: Option<u64>,
    /// wall-clock limit for the whole job
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    pub check: Check,
    #[serde(default = "empty_params")]
    pub params: serde_json::Value,
    #[serde(default)]
    pub budget: Budget,
    #[serde(default)]
    pub seed: u64,
}

fn empty_params() -> serde_json::Value {
    serde_json::Value::Object(Default::default())
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationSpec {
    #[serde(default)]
    pub jobs: Vec<Job>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

/// 1-based line and column of a byte offset.
fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// A JSON spec; whitespace alone is the empty spec.
pub fn parse_json(text: &str) -> Result<VerificationSpec, ParseError> {
    if text.trim().is_empty() {
        return Ok(VerificationSpec::default());
    }
    serde_json::from_str(text).map_err(|e| ParseError { line: e.line(), column: e.column(), message: e.to_string() })
}

/// The TOML front end: the same document with `[[jobs]]` tables.
pub fn parse_toml(text: &str) -> Result<VerificationSpec, ParseError> {
    let value: toml::Value = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_column(text, s.start));
        ParseError { line, column, message: e.message().to_string() }
    })?;
    let json = serde_json::to_value(value).map_err(|e| ParseError { line: 1, column: 1, message: e.to_string() })?;
    serde_json::from_value(json).map_err(|e| ParseError { line: 1, column: 1, message: e.to_string() })
}

pub fn parse_spec(text: &str, toml_front_end: bool) -> Result<VerificationSpec, ParseError> {
    if toml_front_end {
        parse_toml(text)
    } else {
        parse_json(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for c in Check::all() {
            let v = serde_json::to_value(c).unwrap();
            assert_eq!(v.as_str().unwrap(), c.name());
        }
    }

    #[test]
    fn empty_and_minimal() {
        assert!(parse_json("").unwrap().jobs.is_empty());
        assert!(parse_json("{}").unwrap().jobs.is_empty());
        let s = parse_json(r#"{"jobs": [{"check": "dh_generalized", "params": {"p": 3, "r": 2, "n": 2}}]}"#).unwrap();
        assert_eq!(s.jobs[0].check, Check::DhGeneralized);
        assert_eq!(s.jobs[0].seed, 0);
    }

    #[test]
    fn malformed_json_positions() {
        let e = parse_json("{\"jobs\": [\n  {\"check\": }\n]}").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.column > 1);
        assert!(parse_json(r#"{"jobs": [{"check": "nope"}]}"#).is_err());
    }

    #[test]
    fn toml_matches_json() {
        let t = "[[jobs]]\ncheck = \"pairing\"\nseed = 4\nparams = { triples = 3 }\nbudget = { max_terms = 100 }\n";
        let j = r#"{"jobs": [{"check": "pairing", "seed": 4, "params": {"triples": 3}, "budget": {"max_terms": 100}}]}"#;
        assert_eq!(parse_toml(t).unwrap(), parse_json(j).unwrap());
        let e = parse_toml("[[jobs]]\ncheck = \n").unwrap_err();
        assert_eq!(e.line, 2);
    }
}
