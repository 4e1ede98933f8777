//! Tests on the second fundamental forms: irrotational, minimal, totally
//! geodesic, plus the mean curvature.

use serde::{Deserialize, Serialize};

use crate::linalg::{max_abs, signed_gram_schmidt};
use crate::submanifold::{FramePoint, SecondFundamental};

/// Offending component of a nonzero form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// `"lightlike"` or `"screen"`.
    pub form: String,
    pub index: usize,
    pub slot: (usize, usize),
    pub value: f64,
}

fn worst(
    sf: &SecondFundamental,
    ks: impl Iterator<Item = (usize, usize)> + Clone,
) -> Option<Witness> {
    let mut best: Option<Witness> = None;
    let forms = [("lightlike", &sf.hl), ("screen", &sf.hs)];
    for (name, h) in forms {
        for (i, m) in h.iter().enumerate() {
            for (k, l) in ks.clone() {
                let v = m[k][l];
                if best.as_ref().map_or(true, |b| v.abs() > b.value.abs()) {
                    best = Some(Witness {
                        form: name.into(),
                        index: i,
                        slot: (k, l),
                        value: v,
                    });
                }
            }
        }
    }
    best
}

/// `h(X, E) = 0` for all tangent `X` and radical `E`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IrrotationalCheck {
    pub holds: bool,
    pub residual: f64,
    pub witness: Option<Witness>,
}

impl IrrotationalCheck {
    pub fn new(sf: &SecondFundamental, tol: f64) -> Self {
        let (t, r) = (sf.t(), sf.r);
        let w = worst(sf, (0..t).flat_map(move |k| (0..r).map(move |j| (k, j))));
        let residual = w.as_ref().map_or(0.0, |w| w.value.abs());
        IrrotationalCheck {
            holds: residual < tol,
            residual,
            witness: w.filter(|w| w.value.abs() >= tol),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimalCheck {
    pub holds: bool,
    /// Largest screen-transversal component of `h` on radical pairs.
    pub radical_part: f64,
    /// `Σ ε_a h(X̂_a, X̂_a)` as lightlike then screen-transversal coefficients.
    pub trace: Vec<f64>,
    /// `Σ ε_a ḡ(A_{Ŵ_α} X̂_a, X̂_a)` per screen-transversal field.
    pub shape_traces: Vec<f64>,
    /// Deviation of the shape traces from the screen part of `trace`.
    pub shape_trace_identity: f64,
    /// Gap to the same trace computed in the reversed screen order, `None`
    /// when the reversed frame could not be orthonormalized.
    pub reordered_trace_gap: Option<f64>,
}

impl MinimalCheck {
    pub fn new(fp: &FramePoint, sf: &SecondFundamental, tol: f64, rank_tol: f64) -> Self {
        let f = &fp.frame;
        let (r, s) = (sf.r, sf.s);
        let radical_part = sf
            .hs
            .iter()
            .flat_map(|m| (0..r).flat_map(move |i| (0..r).map(move |j| m[i][j].abs())))
            .fold(0.0, f64::max);
        let mut trace = vec![0.0; r + sf.w];
        for a in 0..s {
            for (o, h) in trace.iter_mut().zip(sf.h(r + a, r + a)) {
                *o += f.screen_signs[a] * h;
            }
        }
        let shape_traces: Vec<f64> = (0..sf.w)
            .map(|al| {
                (0..s)
                    .map(|a| f.screen_signs[a] * f.g(&sf.shape_trans[al][r + a], &f.screen[a]))
                    .sum()
            })
            .collect();
        let shape_trace_identity = shape_traces
            .iter()
            .enumerate()
            .map(|(al, v)| (v - f.transversal_signs[al] * trace[r + al]).abs())
            .fold(0.0, f64::max);

        let reversed: Vec<Vec<f64>> = f.screen_raw.iter().rev().cloned().collect();
        let reordered_trace_gap = signed_gram_schmidt(&reversed, &f.metric, rank_tol, None)
            .ok()
            .map(|on| {
                let mut alt = vec![0.0; r + sf.w];
                for (y, e) in on.vectors.iter().zip(&on.signs) {
                    let c = fp.tangent_coords(y);
                    for (o, h) in alt.iter_mut().zip(sf.h_coeffs(&c, &c)) {
                        *o += e * h;
                    }
                }
                alt.iter()
                    .zip(&trace)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            });
        MinimalCheck {
            holds: radical_part < tol && max_abs(&trace) < tol,
            radical_part,
            trace,
            shape_traces,
            shape_trace_identity,
            reordered_trace_gap,
        }
    }

    /// Vanishing of the shape traces together with the radical condition.
    pub fn shape_criterion(&self, tol: f64) -> bool {
        self.radical_part < tol && self.shape_traces.iter().all(|v| v.abs() < tol)
    }
}

/// `H = trace h / s`, split into lightlike and screen-transversal parts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanCurvature {
    pub lightlike: Vec<f64>,
    pub screen: Vec<f64>,
}

impl MeanCurvature {
    pub fn new(m: &MinimalCheck, r: usize, s: usize) -> Self {
        let k = if s == 0 { 0.0 } else { 1.0 / s as f64 };
        MeanCurvature {
            lightlike: m.trace[..r].iter().map(|v| v * k).collect(),
            screen: m.trace[r..].iter().map(|v| v * k).collect(),
        }
    }
}

/// Largest component of `h` over all tangent pairs.
pub fn total_h(sf: &SecondFundamental) -> f64 {
    let t = sf.t();
    worst(sf, (0..t).flat_map(move |k| (0..t).map(move |l| (k, l)))).map_or(0.0, |w| w.value.abs())
}

#[cfg(test)]
mod tests {
    use super::super::fixture::at;
    use super::*;
    use crate::scenario::bundled;

    #[test]
    fn cylinder_is_curved_in_one_direction() {
        let (_, sf, c) = at(bundled::CYLINDER, None);
        let m = &c.minimal;
        assert!(!m.holds);
        assert!((m.trace[0].abs() - 0.5).abs() < 1e-12);
        assert!((c.mean_curvature.screen[0].abs() - 0.25).abs() < 1e-12);
        assert!(m.shape_trace_identity < 1e-12);
        assert!(m.reordered_trace_gap.is_some_and(|g| g < 1e-12));
        assert!((total_h(&sf) - 0.5).abs() < 1e-12);
        assert!(c.irrotational.holds && c.irrotational.witness.is_none());
    }

    #[test]
    fn rotating_null_lines_are_not_irrotational() {
        let (_, _, c) = at(bundled::NULL_RULED_SURFACE, None);
        let i = &c.irrotational;
        assert!(!i.holds);
        let w = i.witness.as_ref().unwrap();
        assert_eq!(w.value.abs(), i.residual);
        assert!(w.slot.1 < c.r, "witness must pair with a radical field");
    }

    #[test]
    fn minimal_ascreen_traces_vanish_in_any_order() {
        let (_, _, c) = at(bundled::MINIMAL_ASCREEN, None);
        let m = &c.minimal;
        assert!(m.holds && m.shape_criterion(1e-9));
        assert!(max_abs(&m.trace) < 1e-12);
        assert!(m.reordered_trace_gap.unwrap() < 1e-12);
    }

    #[test]
    fn mean_curvature_without_screen_is_zero() {
        let m = MinimalCheck {
            holds: true,
            radical_part: 0.0,
            trace: vec![1.0, 2.0],
            shape_traces: vec![],
            shape_trace_identity: 0.0,
            reordered_trace_gap: None,
        };
        let h = MeanCurvature::new(&m, 1, 0);
        assert_eq!(h.lightlike, vec![0.0]);
        assert_eq!(h.screen, vec![0.0]);
    }
}
