//! Algebraic certificates at one point: the decomposition of `ξ`, the QGCR
//! split of the frame and the ascreen / co-screen tests.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::member;
use crate::linalg::{max_abs, norm, span_rank, sub};
use crate::submanifold::Frame;

/// Coefficients of `ξ` in the quasi-orthonormal frame.
///
/// `a` multiplies the radical fields, `b` the null transversal fields and
/// `c` the screen-transversal fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiDecomposition {
    pub screen: Vec<f64>,
    pub screen_norm: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub reconstruction: f64,
    pub self_product: f64,
}

impl XiDecomposition {
    pub fn new(f: &Frame<f64>) -> Self {
        let d = f.decompose(&f.xi);
        let screen_vec = f.tangent_vector(
            &d.rad
                .iter()
                .map(|_| 0.0)
                .chain(d.screen.iter().copied())
                .collect::<Vec<_>>(),
        );
        XiDecomposition {
            screen_norm: norm(&screen_vec),
            reconstruction: max_abs(&sub(&f.xi, &f.compose(&d))),
            self_product: f.g(&f.xi, &f.xi),
            screen: d.screen,
            a: d.rad,
            b: d.null,
            c: d.transversal,
        }
    }

    /// `ξ` has no screen and no screen-transversal part.
    pub fn in_radical_and_null(&self, tol: f64) -> bool {
        self.screen_norm < tol && self.c.iter().all(|c| c.abs() < tol)
    }

    /// `ξ` lies in the screen-transversal bundle and is not zero there.
    pub fn in_screen_transversal(&self, tol: f64) -> bool {
        self.screen_norm < tol
            && self.a.iter().chain(&self.b).all(|v| v.abs() < tol)
            && self.c.iter().any(|c| c.abs() >= tol)
    }
}

/// Frame-adapted QGCR split. Index lists refer to the radical, screen,
/// null transversal and screen-transversal positions of the frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QgcrCertificate {
    /// Radical fields whose `φ̄`-image stays in the radical.
    pub invariant_rad: Vec<usize>,
    /// Radical fields whose `φ̄`-image lies in the screen.
    pub anti_rad: Vec<usize>,
    /// Screen fields orthogonal to every transversal image.
    pub invariant_screen: Vec<usize>,
    /// Null transversal fields with `φ̄`-image in the screen.
    pub null_to_screen: Vec<usize>,
    /// Screen-transversal fields with nonzero `φ̄`-image in the screen.
    pub transversal_to_screen: Vec<usize>,
    pub residuals: BTreeMap<String, f64>,
    pub failures: Vec<String>,
    pub holds: bool,
    pub proper: bool,
}

impl QgcrCertificate {
    pub fn new(f: &Frame<f64>, tol: f64) -> Self {
        let phi = |v: &[f64]| f.phi_of(v);
        let mut residuals = BTreeMap::new();
        let mut failures = Vec::new();

        let mut invariant_rad = Vec::new();
        let mut anti_rad = Vec::new();
        for (i, e) in f.rad.iter().enumerate() {
            if member(&phi(e), &f.rad, tol) < tol {
                invariant_rad.push(i);
            } else {
                anti_rad.push(i);
            }
        }
        let pick = |idx: &[usize], vs: &[Vec<f64>]| -> Vec<Vec<f64>> {
            idx.iter().map(|&i| vs[i].clone()).collect()
        };
        let d1 = pick(&invariant_rad, &f.rad);
        let worst = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0f64, f64::max);
        residuals.insert(
            "invariant_rad_closed".into(),
            worst(&mut d1.iter().map(|e| member(&phi(e), &d1, tol))),
        );
        residuals.insert(
            "anti_rad_into_screen".into(),
            worst(
                &mut anti_rad
                    .iter()
                    .map(|&i| member(&phi(&f.rad[i]), &f.screen, tol)),
            ),
        );

        let into_screen = |v: &[f64]| {
            let pv = phi(v);
            norm(&pv) > tol && member(&pv, &f.screen, tol) < tol
        };
        let null_to_screen: Vec<usize> = (0..f.r()).filter(|&i| into_screen(&f.null[i])).collect();
        let transversal_to_screen: Vec<usize> = (0..f.w())
            .filter(|&a| into_screen(&f.transversal[a]))
            .collect();

        let mut images: Vec<Vec<f64>> = anti_rad.iter().map(|&i| phi(&f.rad[i])).collect();
        images.extend(null_to_screen.iter().map(|&i| phi(&f.null[i])));
        images.extend(
            transversal_to_screen
                .iter()
                .map(|&a| phi(&f.transversal[a])),
        );
        let invariant_screen: Vec<usize> = (0..f.s())
            .filter(|&a| {
                images
                    .iter()
                    .all(|v| f.g(&f.screen[a], v).abs() < tol * norm(v).max(1.0))
            })
            .collect();
        let d0 = pick(&invariant_screen, &f.screen);
        let mut spanning = images.clone();
        spanning.extend(d0.iter().cloned());
        residuals.insert(
            "screen_decomposition".into(),
            worst(&mut f.screen.iter().map(|x| member(x, &spanning, tol))),
        );
        residuals.insert(
            "invariant_screen_closed".into(),
            worst(&mut d0.iter().map(|x| member(&phi(x), &d0, tol))),
        );

        let r = f.r();
        if r < 3 {
            failures.push(format!("radical rank {r} is below the minimum 3"));
        }
        let inv_dim = invariant_rad.len() + invariant_screen.len();
        if inv_dim < 4 {
            failures.push(format!(
                "the phi-invariant part has dimension {inv_dim}, at least 4 is needed"
            ));
        }
        if anti_rad.len() != null_to_screen.len() {
            failures.push(format!(
                "{} radical fields map into the screen but {} null transversal fields do",
                anti_rad.len(),
                null_to_screen.len()
            ));
        }
        for (k, v) in &residuals {
            if !(*v < tol) {
                failures.push(format!("{k} residual {v:.3e}"));
            }
        }
        let holds = failures.is_empty();
        let proper = holds
            && !invariant_rad.is_empty()
            && !anti_rad.is_empty()
            && !invariant_screen.is_empty()
            && !transversal_to_screen.is_empty();
        QgcrCertificate {
            invariant_rad,
            anti_rad,
            invariant_screen,
            null_to_screen,
            transversal_to_screen,
            residuals,
            failures,
            holds,
            proper,
        }
    }
}

/// Pair `(Eᵤ, Nᵤ)` whose `φ̄`-images are collinear, `φ̄Nᵤ = σᵤ φ̄Eᵤ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaCertificate {
    pub index: usize,
    pub sigma: f64,
    pub collinearity: f64,
    /// `ḡ(φ̄Eᵤ, φ̄Eᵤ)` next to `−bᵤ²`.
    pub phi_rad_square: f64,
    pub minus_b_square: f64,
    /// `ḡ(φ̄Nᵤ, φ̄Nᵤ)` next to `−aᵤ²`.
    pub phi_null_square: f64,
    pub minus_a_square: f64,
    /// `−aᵤbᵤ`, reported for comparison only.
    pub minus_ab: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AscreenCheck {
    pub holds: bool,
    /// Distance of `ξ` from the span of the anti-invariant radical fields
    /// and the null fields mapped into the screen.
    pub xi_membership: f64,
    /// Dimension of the span of the transversal and radical images.
    pub image_dim: usize,
    /// Mutual membership of the two image spans, for rank three.
    pub image_spans: Option<f64>,
    pub sigma: Vec<SigmaCertificate>,
    /// Worst deviation of the `φ̄`-image squares from `−b²` and `−a²`.
    pub square_identity: f64,
}

impl AscreenCheck {
    pub fn new(f: &Frame<f64>, q: &QgcrCertificate, xi: &XiDecomposition, tol: f64) -> Self {
        let phi = |v: &[f64]| f.phi_of(v);
        let mut span: Vec<Vec<f64>> = q.anti_rad.iter().map(|&i| f.rad[i].clone()).collect();
        span.extend(q.null_to_screen.iter().map(|&i| f.null[i].clone()));
        let xi_membership = member(&f.xi, &span, tol);
        let rad_images: Vec<Vec<f64>> = q.anti_rad.iter().map(|&i| phi(&f.rad[i])).collect();
        let null_images: Vec<Vec<f64>> =
            q.null_to_screen.iter().map(|&i| phi(&f.null[i])).collect();
        let all: Vec<Vec<f64>> = rad_images.iter().chain(&null_images).cloned().collect();
        let image_dim = span_rank(&all, tol);
        let image_spans = (f.r() == 3).then(|| {
            let a = rad_images.iter().map(|v| member(v, &null_images, tol));
            let b = null_images.iter().map(|v| member(v, &rad_images, tol));
            a.chain(b).fold(0.0f64, f64::max)
        });
        let mut sigma = Vec::new();
        let mut square_identity = 0.0f64;
        for &u in &q.anti_rad {
            let pe = phi(&f.rad[u]);
            let pn = phi(&f.null[u]);
            let (a, b) = (xi.a[u], xi.b[u]);
            let pe2 = f.g(&pe, &pe);
            let pn2 = f.g(&pn, &pn);
            square_identity = square_identity
                .max((pe2 + b * b).abs())
                .max((pn2 + a * a).abs());
            let ee: f64 = pe.iter().map(|x| x * x).sum();
            if ee == 0.0 {
                continue;
            }
            let s = pe.iter().zip(&pn).map(|(x, y)| x * y).sum::<f64>() / ee;
            let resid: Vec<f64> = pn.iter().zip(&pe).map(|(n, e)| n - s * e).collect();
            let collinearity = norm(&resid) / norm(&pn).max(f64::MIN_POSITIVE);
            if collinearity < tol && s.abs() >= tol {
                sigma.push(SigmaCertificate {
                    index: u,
                    sigma: s,
                    collinearity,
                    phi_rad_square: pe2,
                    minus_b_square: -b * b,
                    phi_null_square: pn2,
                    minus_a_square: -a * a,
                    minus_ab: -a * b,
                });
            }
        }
        AscreenCheck {
            holds: xi.in_radical_and_null(tol),
            xi_membership,
            image_dim,
            image_spans,
            sigma,
            square_identity,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoscreenCheck {
    pub holds: bool,
    /// Screen-transversal position carrying the largest part of `ξ`.
    pub xi_index: Option<usize>,
    pub xi_coefficient: f64,
    /// Largest `|ḡ|` between images of screen-transversal and null fields.
    pub image_orthogonality: f64,
}

impl CoscreenCheck {
    pub fn new(f: &Frame<f64>, q: &QgcrCertificate, xi: &XiDecomposition, tol: f64) -> Self {
        let xi_index = (0..xi.c.len()).max_by(|&i, &j| xi.c[i].abs().total_cmp(&xi.c[j].abs()));
        let mut image_orthogonality = 0.0f64;
        for &a in &q.transversal_to_screen {
            for &i in &q.null_to_screen {
                let s = f.phi_of(&f.transversal[a]);
                let l = f.phi_of(&f.null[i]);
                image_orthogonality = image_orthogonality.max(f.g(&s, &l).abs());
            }
        }
        CoscreenCheck {
            holds: xi.in_screen_transversal(tol),
            xi_coefficient: xi_index.map(|i| xi.c[i]).unwrap_or(0.0),
            xi_index,
            image_orthogonality,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixture::at;
    use crate::scenario::bundled;

    #[test]
    fn minimal_ascreen_certificate() {
        let (_, _, c) = at(bundled::MINIMAL_ASCREEN, None);
        let q = &c.qgcr;
        assert!(q.holds && q.proper, "{:?}", q.failures);
        assert_eq!(q.invariant_rad, vec![0, 1]);
        assert_eq!(q.anti_rad, vec![2]);
        assert_eq!(q.invariant_screen, vec![3, 4]);
        assert_eq!(q.null_to_screen, vec![2]);
        assert_eq!(q.transversal_to_screen, vec![0, 1]);
        assert!(q.residuals.values().all(|r| *r < 1e-12));
    }

    #[test]
    fn minimal_ascreen_structure_vector() {
        let (_, _, c) = at(bundled::MINIMAL_ASCREEN, None);
        let x = &c.xi;
        assert!(x.in_radical_and_null(1e-9));
        assert!(!x.in_screen_transversal(1e-9));
        assert!((x.a[2] - 0.5 / 2f64.sqrt()).abs() < 1e-12);
        assert!((x.b[2] - 2f64.sqrt()).abs() < 1e-12);
        assert!((x.self_product - 1.0).abs() < 1e-12);
        assert!(x.reconstruction < 1e-12);
        let a = &c.ascreen;
        assert!(a.holds);
        assert_eq!(a.sigma.len(), 1);
        let s = &a.sigma[0];
        assert_eq!(s.index, 2);
        assert!((s.sigma + 0.25).abs() < 1e-12);
        // φ̄E and φ̄N are non-null with the squared lengths of their ξ partners
        assert!((s.phi_rad_square - s.minus_b_square).abs() < 1e-12);
        assert!((s.phi_null_square - s.minus_a_square).abs() < 1e-12);
        assert!(!c.coscreen.holds);
    }

    #[test]
    fn coscreen_structure_vector_is_a_transversal_field() {
        let (_, _, c) = at(bundled::COSCREEN_SASAKIAN, None);
        assert!(c.qgcr.holds);
        assert!(c.xi.in_screen_transversal(1e-9));
        assert!(c.coscreen.holds);
        assert_eq!(c.coscreen.xi_index, Some(1));
        assert!((c.coscreen.xi_coefficient - 1.0).abs() < 1e-9);
        assert!(!c.ascreen.holds);
    }

    #[test]
    fn small_radical_fails_with_reasons() {
        let (_, _, c) = at(bundled::NULL_RULED_SURFACE, None);
        assert!(!c.qgcr.holds && !c.qgcr.proper);
        assert!(c.qgcr.failures.len() >= 2, "{:?}", c.qgcr.failures);
        assert!(c.qgcr.failures[0].contains("radical rank 1"));
    }
}
