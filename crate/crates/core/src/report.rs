//! Versioned analysis report with JSON and text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::classify::Classification;
use crate::error::{Error, Result};
use crate::Tolerances;

pub const SCHEMA: &str = "lightlike-report/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub scenario: ScenarioSummary,
    pub points: Vec<PointReport>,
    /// Conjunction of each verdict over the points where it was computed.
    pub verdicts: BTreeMap<String, bool>,
    /// Largest value of each residual over the points.
    pub residuals: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSummary {
    pub name: String,
    pub description: String,
    pub ambient: String,
    pub mu: f64,
    pub dim: usize,
    pub ambient_dim: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    /// Verdicts checked for the exit status with their expected values.
    pub requested: BTreeMap<String, bool>,
    /// Human-readable description of every requested verdict that failed.
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointReport {
    pub params: Vec<f64>,
    pub point: Vec<f64>,
    pub verdicts: BTreeMap<String, bool>,
    pub residuals: BTreeMap<String, f64>,
    pub classification: Classification,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.scenario.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: Report = serde_json::from_str(text).map_err(|e| Error::Report(e.to_string()))?;
        if r.schema != SCHEMA {
            return Err(Error::Report(format!(
                "schema '{}' is not supported, expected '{SCHEMA}'",
                r.schema
            )));
        }
        Ok(r)
    }

    pub fn to_text(&self) -> String {
        let s = &self.scenario;
        let mut out = String::new();
        let _ = writeln!(out, "scenario   {}", s.name);
        if !s.description.is_empty() {
            let _ = writeln!(out, "           {}", s.description);
        }
        let _ = writeln!(
            out,
            "ambient    {} (dim {}, mu = {})",
            s.ambient, s.ambient_dim, s.mu
        );
        let _ = writeln!(
            out,
            "points     {} of a {}-dimensional immersion, seed {}",
            self.points.len(),
            s.dim,
            s.seed
        );
        let _ = writeln!(
            out,
            "tolerance  algebraic {:e}, derived {:e}, rank {:e}",
            s.tolerances.algebraic, s.tolerances.derived, s.tolerances.rank
        );
        if let Some(p) = self.points.first() {
            let c = &p.classification;
            let _ = writeln!(
                out,
                "\nframe      r = {}, screen {}, screen-transversal {}",
                c.r, c.s, c.w
            );
            let q = &c.qgcr;
            let _ = writeln!(
                out,
                "split      invariant radical {:?}, anti-invariant radical {:?}, invariant screen {:?}",
                q.invariant_rad, q.anti_rad, q.invariant_screen
            );
            let _ = writeln!(
                out,
                "           null into screen {:?}, transversal into screen {:?}",
                q.null_to_screen, q.transversal_to_screen
            );
            for f in &q.failures {
                let _ = writeln!(out, "           not QGCR: {f}");
            }
        }
        for (i, p) in self.points.iter().enumerate() {
            let c = &p.classification;
            let params: Vec<String> = p.params.iter().map(|v| format!("{v:.4}")).collect();
            let mut line = format!("point {i:<3} ({})", params.join(", "));
            for sc in &c.ascreen.sigma {
                let _ = write!(line, "  sigma[{}] = {:.12}", sc.index, sc.sigma);
            }
            if c.coscreen.holds {
                if let Some(a) = c.coscreen.xi_index {
                    let _ = write!(line, "  xi = {:.12} W[{a}]", c.coscreen.xi_coefficient);
                }
            }
            let _ = writeln!(out, "{line}");
        }
        let _ = writeln!(out, "\nverdicts");
        for (k, v) in &self.verdicts {
            let mark = match s.requested.get(k) {
                Some(e) if e == v => "ok  ",
                Some(_) => "FAIL",
                None => "    ",
            };
            let _ = writeln!(out, "  {mark} {k:<44} {v}");
        }
        let _ = writeln!(out, "\nresiduals (max over points)");
        for (k, v) in &self.residuals {
            let _ = writeln!(out, "  {k:<46} {v:.3e}");
        }
        if self.passed() {
            let _ = writeln!(out, "\nresult     pass");
        } else {
            let _ = writeln!(out, "\nresult     FAIL");
            for f in &s.failures {
                let _ = writeln!(out, "  {f}");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{analyze, Options};
    use crate::scenario::{bundled, Scenario};

    fn plane() -> Report {
        analyze(
            &Scenario::parse(bundled::PLANE).unwrap(),
            &Options::default(),
        )
        .unwrap()
    }

    #[test]
    fn json_round_trip_is_exact() {
        let r = plane();
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), r.to_json());
    }

    #[test]
    fn schema_and_unknown_fields_are_checked() {
        let r = plane();
        let bad = r.to_json().replacen(SCHEMA, "other/9", 1);
        let e = Report::from_json(&bad).unwrap_err();
        assert!(e.to_string().contains("other/9"));
        assert!(Report::from_json("{}").is_err());
    }

    #[test]
    fn text_marks_failures() {
        let mut r = plane();
        assert!(r.to_text().contains("result     pass"));
        r.scenario.requested.insert("qgcr".into(), true);
        r.scenario
            .failures
            .push("qgcr: expected true, got false".into());
        let t = r.to_text();
        assert!(!r.passed());
        assert!(t.contains("FAIL qgcr"));
        assert!(t.contains("result     FAIL"));
    }
}
