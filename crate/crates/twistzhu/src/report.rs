//! Serializable report types: suite verdicts, dimension tables, structure
//! constants, and the top-level schema-versioned report the CLI emits.
//! Field order and BTreeMap keys fix the serialization, so a report is a
//! deterministic function of (config, seed) at any thread count; timing is
//! the one field stripped for canonical comparison.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "twistzhu-report/1";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Verdict of one verification suite.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub pass: bool,
    pub checks: u64,
    /// Witnesses for failed checks (capped; enough to reproduce).
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteOutcome {
    pub fn new(name: &str) -> Self {
        SuiteOutcome {
            name: name.to_string(),
            pass: true,
            checks: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.pass = false;
            if self.failures.len() < 20 {
                self.failures.push(witness());
            }
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn verdict(&self) -> &'static str {
        if self.pass {
            "pass"
        } else {
            "fail"
        }
    }
}

/// One recorded product in the quotient image basis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureConstant {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub product: serde_json::Value,
}

/// Dimension breakdown of the filtration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DimBreakdown {
    pub a_gn: usize,
    pub a_g0: usize,
    pub subquotients: Vec<usize>,
}

/// Quotient build section; `dim_upper` is an upper bound for the image of
/// the weight window (partial generators are never projected in).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BuildSection {
    pub g: String,
    pub n: String,
    pub cutoff: u32,
    pub dim_upper: usize,
    pub generators: usize,
    pub structure_constants: Vec<StructureConstant>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<DimBreakdown>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub suites: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Identity-suite section: the collapsed telescope constants and the
/// discrepancy note against the alternative quoted closed form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentitiesSection {
    pub lmax: u32,
    pub telescoping_unit: Vec<bool>,
    pub alternating_collapse_constants: Vec<String>,
    pub binom_vanish_ok: bool,
    pub bivariate_cancellation: Vec<bool>,
    pub notes: Vec<String>,
}

/// Top-level report. `timing_ms` is excluded from canonical bytes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub version: String,
    pub config: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identities: Option<IdentitiesSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub builds: Vec<BuildSection>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub suites: BTreeMap<String, SuiteOutcome>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn new(config: serde_json::Value) -> Self {
        Report {
            schema: SCHEMA.to_string(),
            version: VERSION.to_string(),
            config,
            identities: None,
            builds: Vec::new(),
            suites: BTreeMap::new(),
            notes: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.suites.values().all(|s| s.pass)
            && self
                .identities
                .as_ref()
                .map(|i| {
                    i.telescoping_unit.iter().all(|&b| b)
                        && i.binom_vanish_ok
                        && i.bivariate_cancellation.iter().all(|&b| b)
                })
                .unwrap_or(true)
    }

    /// Pretty JSON with timing stripped; the determinism contract compares
    /// these bytes.
    pub fn canonical_json(&self) -> String {
        let mut clone = self.clone();
        clone.timing_ms = None;
        serde_json::to_string_pretty(&clone).expect("report serialization")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// Plain-text table rendering for the `report` subcommand.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("schema   {}\nversion  {}\n", self.schema, self.version));
        if let Some(ids) = &self.identities {
            out.push_str(&format!(
                "identities: lmax={} unit={} vanish={} bivariate={}\n",
                ids.lmax,
                ids.telescoping_unit.iter().all(|&b| b),
                ids.binom_vanish_ok,
                ids.bivariate_cancellation.iter().all(|&b| b),
            ));
            out.push_str(&format!(
                "  collapse constants: {}\n",
                ids.alternating_collapse_constants.join(", ")
            ));
        }
        for b in &self.builds {
            out.push_str(&format!(
                "build g={} n={} cutoff={} dim_upper={} generators={}\n",
                b.g, b.n, b.cutoff, b.dim_upper, b.generators
            ));
            if let Some(d) = &b.dims {
                out.push_str(&format!(
                    "  dims: top={} bottom={} subquotients={:?}\n",
                    d.a_gn, d.a_g0, d.subquotients
                ));
            }
            for (k, v) in &b.suites {
                out.push_str(&format!("  {k}: {v}\n"));
            }
        }
        for (name, s) in &self.suites {
            out.push_str(&format!("suite {name}: {} ({} checks)\n", s.verdict(), s.checks));
            for f in &s.failures {
                out.push_str(&format!("  witness: {f}\n"));
            }
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        if let Some(t) = self.timing_ms {
            out.push_str(&format!("timing_ms: {t}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strips_timing() {
        let mut r = Report::new(serde_json::json!({"suite": "x"}));
        r.timing_ms = Some(123);
        let mut s = SuiteOutcome::new("x");
        s.check(true, || unreachable!());
        r.suites.insert("x".into(), s);
        let canon = r.canonical_json();
        assert!(!canon.contains("timing_ms"));
        r.timing_ms = Some(999);
        assert_eq!(canon, r.canonical_json());
        assert!(r.all_pass());
    }
}
