use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::frame::{Field, FramePoint};
use crate::linalg::{max_abs, sub};

/// Second fundamental forms, shape operators and connection forms over
/// the tangent frame `T = E ∪ X̂` of a [`FramePoint`].
///
/// Index order: tangent slots use `k, l` (radical fields first), radical
/// and null fields `i, j`, screen fields `a`, screen-transversal `α, β`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecondFundamental {
    pub r: usize,
    pub s: usize,
    pub w: usize,
    /// `∇_{T_k} T_l` as ambient vectors.
    pub nabla: Vec<Vec<Vec<f64>>>,
    /// `hˡᵢ(T_k, T_l)` as `hl[i][k][l]`.
    pub hl: Vec<Vec<Vec<f64>>>,
    /// `hˢ_α(T_k, T_l)` as `hs[α][k][l]`.
    pub hs: Vec<Vec<Vec<f64>>>,
    /// `A_{Nᵢ} T_k`.
    pub shape_null: Vec<Vec<Vec<f64>>>,
    /// `τᵢⱼ(T_k)` as `tau[i][j][k]`.
    pub tau: Vec<Vec<Vec<f64>>>,
    /// `ρ_{iα}(T_k)` as `rho[i][α][k]`.
    pub rho: Vec<Vec<Vec<f64>>>,
    /// `A_{Ŵ_α} T_k`.
    pub shape_trans: Vec<Vec<Vec<f64>>>,
    /// `φ_{αi}(T_k)` as `phi_form[α][i][k]`.
    pub phi_form: Vec<Vec<Vec<f64>>>,
    /// `σ_{αβ}(T_k)` as `sigma[α][β][k]`.
    pub sigma: Vec<Vec<Vec<f64>>>,
    /// `A*_{Eᵢ} T_k`.
    pub shape_star: Vec<Vec<Vec<f64>>>,
    /// `h*ᵢ(T_k, X̂_a)` as `h_star[i][k][a]`.
    pub h_star: Vec<Vec<Vec<f64>>>,
    /// `∇*_{T_k} X̂_a` as `nabla_star[k][a]`.
    pub nabla_star: Vec<Vec<Vec<f64>>>,
}

/// Max residual per Gauss-Weingarten identity at one point.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GaussResiduals {
    pub residuals: BTreeMap<String, f64>,
}

impl GaussResiduals {
    /// Identities that hold for any frame of a genuine submanifold.
    pub const NAMES: &'static [&'static str] = &[
        "gauss_reconstruction",
        "weingarten_null_reconstruction",
        "weingarten_transversal_reconstruction",
        "screen_gauss_reconstruction",
        "h_lightlike_symmetry",
        "h_screen_symmetry",
        "shape_star_pairing",
        "shape_star_radical",
        "shape_transversal_pairing",
        "shape_transversal_null",
        "shape_null_pairing",
        "shape_null_skew",
        "metric_defect_agreement",
        "screen_metric",
        "torsion",
        "bracket_tangency",
    ];

    fn bump(&mut self, name: &str, value: f64) {
        let slot = self.residuals.entry(name.to_string()).or_insert(0.0);
        if value > *slot || value.is_nan() {
            *slot = value;
        }
    }

    pub fn get(&self, name: &str) -> f64 {
        self.residuals.get(name).copied().unwrap_or(0.0)
    }

    /// Fold another point's residuals in by taking maxima.
    pub fn merge(&mut self, other: &GaussResiduals) {
        for (k, v) in &other.residuals {
            self.bump(k, *v);
        }
    }
}

fn cube(a: usize, b: usize, c: usize) -> Vec<Vec<Vec<f64>>> {
    vec![vec![vec![0.0; c]; b]; a]
}

impl SecondFundamental {
    pub fn compute(fp: &FramePoint) -> (Self, GaussResiduals) {
        let f = &fp.frame;
        let (r, s, w, t, n) = (f.r(), f.s(), f.w(), f.tangent_dim(), f.point.len());
        let mut out = GaussResiduals::default();
        let mut sf = SecondFundamental {
            r,
            s,
            w,
            nabla: vec![vec![Vec::new(); t]; t],
            hl: cube(r, t, t),
            hs: cube(w, t, t),
            shape_null: vec![vec![Vec::new(); t]; r],
            tau: cube(r, r, t),
            rho: cube(r, w, t),
            shape_trans: vec![vec![Vec::new(); t]; w],
            phi_form: cube(w, r, t),
            sigma: cube(w, w, t),
            shape_star: vec![vec![Vec::new(); t]; r],
            h_star: cube(r, t, s),
            nabla_star: vec![vec![Vec::new(); s]; t],
        };
        let mut ambient_dd = vec![vec![Vec::new(); t]; t];

        for k in 0..t {
            for l in 0..t {
                let v = fp.covariant(k, |g| Field::Tangent(l).of(g));
                let d = f.decompose(&v);
                out.bump("gauss_reconstruction", max_abs(&sub(&v, &f.compose(&d))));
                sf.nabla[k][l] = f.tangent_vector(&d.tangent());
                for i in 0..r {
                    sf.hl[i][k][l] = d.null[i];
                }
                for a in 0..w {
                    sf.hs[a][k][l] = d.transversal[a];
                }
                ambient_dd[k][l] = v;
            }
            for i in 0..r {
                let v = fp.covariant(k, |g| Field::Null(i).of(g));
                let d = f.decompose(&v);
                out.bump(
                    "weingarten_null_reconstruction",
                    max_abs(&sub(&v, &f.compose(&d))),
                );
                sf.shape_null[i][k] = f.tangent_vector(&d.tangent()).iter().map(|x| -x).collect();
                for j in 0..r {
                    sf.tau[i][j][k] = d.null[j];
                }
                for a in 0..w {
                    sf.rho[i][a][k] = d.transversal[a];
                }
            }
            for a in 0..w {
                let v = fp.covariant(k, |g| Field::Transversal(a).of(g));
                let d = f.decompose(&v);
                out.bump(
                    "weingarten_transversal_reconstruction",
                    max_abs(&sub(&v, &f.compose(&d))),
                );
                sf.shape_trans[a][k] = f.tangent_vector(&d.tangent()).iter().map(|x| -x).collect();
                for i in 0..r {
                    sf.phi_form[a][i][k] = d.null[i];
                }
                for b in 0..w {
                    sf.sigma[a][b][k] = d.transversal[b];
                }
            }
        }

        // Induced-connection splittings: screen Gauss formula and A*.
        for k in 0..t {
            for a in 0..s {
                let v = &sf.nabla[k][r + a];
                let d = f.decompose(v);
                let mut screen_only = d.clone();
                screen_only.rad = vec![0.0; r];
                let star = f.compose(&screen_only);
                let mut rebuilt = star.clone();
                for i in 0..r {
                    sf.h_star[i][k][a] = d.rad[i];
                    rebuilt = crate::linalg::axpy(&d.rad[i], &f.rad[i], &rebuilt);
                }
                out.bump("screen_gauss_reconstruction", max_abs(&sub(v, &rebuilt)));
                sf.nabla_star[k][a] = star;
            }
            for i in 0..r {
                // A*_{Eᵢ}X = −∇_X Eᵢ − Σⱼ τⱼᵢ(X) Eⱼ
                let mut v: Vec<f64> = sf.nabla[k][i].iter().map(|x| -x).collect();
                for j in 0..r {
                    v = crate::linalg::axpy(&-sf.tau[j][i][k], &f.rad[j], &v);
                }
                sf.shape_star[i][k] = v;
            }
        }

        let tangent = f.tangent();
        let lambda = |i: usize, y: &[f64]| f.g(y, &f.null[i]);
        for k in 0..t {
            for l in 0..t {
                for i in 0..r {
                    out.bump(
                        "h_lightlike_symmetry",
                        (sf.hl[i][k][l] - sf.hl[i][l][k]).abs(),
                    );
                }
                for a in 0..w {
                    out.bump("h_screen_symmetry", (sf.hs[a][k][l] - sf.hs[a][l][k]).abs());
                }
                let y = &tangent[l];
                for i in 0..r {
                    let lhs = f.g(&sf.shape_star[i][k], y);
                    let rhs =
                        sf.hl[i][k][l] + (0..r).map(|j| sf.hl[j][k][i] * lambda(j, y)).sum::<f64>();
                    out.bump("shape_star_pairing", (lhs - rhs).abs());
                }
                for a in 0..w {
                    let eps = f.transversal_signs[a];
                    let lhs = f.g(&sf.shape_trans[a][k], y);
                    let rhs = eps * sf.hs[a][k][l]
                        + (0..r)
                            .map(|i| sf.phi_form[a][i][k] * lambda(i, y))
                            .sum::<f64>();
                    out.bump("shape_transversal_pairing", (lhs - rhs).abs());
                }
            }
            for i in 0..r {
                for j in 0..r {
                    out.bump(
                        "shape_star_radical",
                        f.g(&sf.shape_star[i][k], &f.null[j]).abs(),
                    );
                    let skew = lambda(j, &sf.shape_null[i][k]) + lambda(i, &sf.shape_null[j][k]);
                    out.bump("shape_null_skew", skew.abs());
                }
                for a in 0..s {
                    let lhs = f.g(&sf.shape_null[i][k], &f.screen[a]);
                    out.bump("shape_null_pairing", (lhs - sf.h_star[i][k][a]).abs());
                }
            }
            for a in 0..w {
                let eps = f.transversal_signs[a];
                for i in 0..r {
                    let lhs = f.g(&sf.shape_trans[a][k], &f.null[i]);
                    out.bump(
                        "shape_transversal_null",
                        (lhs - eps * sf.rho[i][a][k]).abs(),
                    );
                }
            }
        }

        // (∇_X g)(Y, Z) computed directly against its second-fundamental-form expansion.
        let mut defect = 0.0f64;
        for k in 0..t {
            for l in 0..t {
                for m in 0..t {
                    let x_g = fp.derivative_scalar(k, |g| {
                        g.g(&Field::Tangent(l).of(g), &Field::Tangent(m).of(g))
                    });
                    let lhs =
                        x_g - f.g(&sf.nabla[k][l], &tangent[m]) - f.g(&tangent[l], &sf.nabla[k][m]);
                    let rhs: f64 = (0..r)
                        .map(|i| {
                            sf.hl[i][k][l] * lambda(i, &tangent[m])
                                + sf.hl[i][k][m] * lambda(i, &tangent[l])
                        })
                        .sum();
                    defect = defect.max(lhs.abs());
                    out.bump("metric_defect_agreement", (lhs - rhs).abs());
                }
            }
            for a in 0..s {
                for b in 0..s {
                    let x_g = fp.derivative_scalar(k, |g| {
                        g.g(&Field::Screen(a).of(g), &Field::Screen(b).of(g))
                    });
                    let lhs = x_g
                        - f.g(&sf.nabla_star[k][a], &f.screen[b])
                        - f.g(&f.screen[a], &sf.nabla_star[k][b]);
                    out.bump("screen_metric", lhs.abs());
                }
            }
        }
        out.residuals.insert("metric_defect".into(), defect);

        for k in 0..t {
            for l in k + 1..t {
                let bracket =
                    fp.lie_bracket(|g| Field::Tangent(k).of(g), |g| Field::Tangent(l).of(g));
                let diff = sub(&ambient_dd[k][l], &ambient_dd[l][k]);
                out.bump("torsion", max_abs(&sub(&diff, &bracket)));
                out.bump("bracket_tangency", max_abs(&f.transversal_part(&bracket)));
            }
        }
        for name in GaussResiduals::NAMES {
            out.residuals.entry(name.to_string()).or_insert(0.0);
        }
        debug_assert!(n == f.point.len());
        (sf, out)
    }

    pub fn t(&self) -> usize {
        self.r + self.s
    }

    /// Transversal coefficients `(hˡ₁..hˡ_r, hˢ₁..hˢ_w)` of `h(T_k, T_l)`.
    pub fn h(&self, k: usize, l: usize) -> Vec<f64> {
        self.hl
            .iter()
            .map(|m| m[k][l])
            .chain(self.hs.iter().map(|m| m[k][l]))
            .collect()
    }

    /// `h(X, Y)` for tangent vectors given by frame coefficients.
    pub fn h_coeffs(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.r + self.w];
        for (k, xk) in x.iter().enumerate() {
            for (l, yl) in y.iter().enumerate() {
                let c = xk * yl;
                if c != 0.0 {
                    for (o, h) in out.iter_mut().zip(self.h(k, l)) {
                        *o += c * h;
                    }
                }
            }
        }
        out
    }

    /// `A_V X` for `V = Σ vᵢNᵢ + Σ v_α Ŵ_α` and `X = Σ x_k T_k`.
    pub fn shape_coeffs(&self, v: &[f64], x: &[f64], n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (k, xk) in x.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                let c = xk * vj;
                if c == 0.0 {
                    continue;
                }
                let a = if j < self.r {
                    &self.shape_null[j][k]
                } else {
                    &self.shape_trans[j - self.r][k]
                };
                for (o, ai) in out.iter_mut().zip(a) {
                    *o += c * ai;
                }
            }
        }
        out
    }
}
