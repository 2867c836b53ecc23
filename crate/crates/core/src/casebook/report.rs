use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// The expected value is stated in the literature.
    Published,
    /// The expected value is computed independently of the claim.
    Derived,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub id: usize,
    pub description: String,
    pub provenance: Provenance,
    pub expected: String,
    pub computed: String,
    pub verdict: Verdict,
}

impl Claim {
    /// The verdict is pass iff `expected` and `computed` agree exactly.
    pub fn new(id: usize, description: &str, provenance: Provenance, expected: String, computed: String) -> Self {
        let verdict = if expected == computed { Verdict::Pass } else { Verdict::Fail };
        Claim {
            id,
            description: description.to_string(),
            provenance,
            expected,
            computed,
            verdict,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseReport {
    pub case_id: String,
    pub h01: usize,
    pub inject_type_three: bool,
    pub claims: Vec<Claim>,
    pub artifacts: Value,
}

impl CaseReport {
    pub fn passes(&self) -> bool {
        self.claims.iter().all(|c| c.verdict == Verdict::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "case {} (h^(0,-1) = {}{})",
            self.case_id,
            self.h01,
            if self.inject_type_three { ", type III injected" } else { "" }
        );
        for c in &self.claims {
            let v = match c.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
            };
            let p = match c.provenance {
                Provenance::Published => "published",
                Provenance::Derived => "derived",
            };
            let _ = writeln!(out, "[{v}] claim {} ({p}): {}", c.id, c.description);
            let _ = writeln!(out, "    expected: {}", c.expected);
            let _ = writeln!(out, "    computed: {}", c.computed);
        }
        let passed = self.claims.iter().filter(|c| c.verdict == Verdict::Pass).count();
        let _ = writeln!(out, "{passed}/{} claims pass", self.claims.len());
        out
    }
}
