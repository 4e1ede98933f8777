use serde::{Deserialize, Serialize};

/// Thresholds used throughout an analysis.
///
/// `algebraic` applies to quantities computed without differentiation,
/// `derived` to anything built from one derivative of a frame, and `rank` is
/// the relative singular-value cutoff for rank decisions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub algebraic: f64,
    pub derived: f64,
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebraic: 1e-9,
            derived: 1e-7,
            rank: 1e-9,
        }
    }
}

impl Tolerances {
    /// Replace both verdict thresholds by `tol`; rank decisions keep their
    /// own cutoff.
    pub fn with_override(self, tol: Option<f64>) -> Self {
        match tol {
            Some(t) => Self {
                algebraic: t,
                derived: t,
                rank: self.rank,
            },
            None => self,
        }
    }
}
