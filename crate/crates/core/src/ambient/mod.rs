//! Ambient almost contact metric manifolds given by coordinate expressions.

mod checks;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use checks::{random_vector, sample_box, StructureReport, ALMOST_CONTACT, NEARLY_MU_SASAKIAN};

use crate::error::{DomainContext, Error, Result};
use crate::expr::{self, parse_vector, Jet2, ScalarExpr, VectorExpr};
use crate::linalg::{self, Mat};
use crate::scalar::{Dual, Scalar};

/// Which builtin model a structure came from, if any.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AmbientKind {
    Cosymplectic { m: usize, q: usize },
    Sasakian { m: usize, q: usize },
    Custom,
}

/// Metric `ḡ`, `(1,1)`-tensor `φ̄`, vector field `ξ`, 1-form `η` and
/// constant `μ` on a coordinate chart.
#[derive(Clone, Debug)]
pub struct AmbientStructure {
    kind: AmbientKind,
    coords: Vec<String>,
    metric: Vec<Vec<ScalarExpr>>,
    /// `phi[j]` is the image of the `j`-th coordinate vector.
    phi: Vec<VectorExpr>,
    xi: VectorExpr,
    eta: VectorExpr,
    mu: f64,
    reference: Option<Vec<Vec<ScalarExpr>>>,
    flat: bool,
}

/// Christoffel symbols `Γᵏᵢⱼ` at a point, stored as `[k][i][j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel {
    n: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[(k * self.n + i) * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| *x == 0.0)
    }

    /// `Γ(X, Y)ᵏ = Γᵏᵢⱼ Xⁱ Yʲ`.
    pub fn apply(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.n;
        if self.is_zero() {
            return vec![0.0; n];
        }
        (0..n)
            .map(|k| {
                let mut acc = 0.0;
                for i in 0..n {
                    if x[i] == 0.0 {
                        continue;
                    }
                    let row = &self.data[(k * n + i) * n..(k * n + i + 1) * n];
                    acc += x[i] * linalg::dot(row, y);
                }
                acc
            })
            .collect()
    }
}

/// Ambient point moved along `dir` to first order.
pub fn dual_point(x: &[f64], dir: &[f64]) -> Vec<Dual> {
    x.iter().zip(dir).map(|(&a, &b)| Dual::new(a, b)).collect()
}

fn names(prefix: &str, m: usize) -> impl Iterator<Item = String> + '_ {
    (1..=m).map(move |i| format!("{prefix}{i}"))
}

fn check_mq(m: usize, q: usize) -> Result<()> {
    if m == 0 || q > 2 * m || q % 2 != 0 {
        return Err(Error::scenario(format!(
            "invalid builtin parameters m = {m}, q = {q}: need m >= 1 and even q in 0..=2m"
        )));
    }
    Ok(())
}

fn parse_in(src: &str, coords: &[String], what: &str) -> Result<ScalarExpr> {
    expr::parse(src, coords).map_err(|source| Error::Expr {
        context: format!("{what} '{src}'"),
        source,
    })
}

fn vector_in(src: &str, coords: &[String], what: &str) -> Result<VectorExpr> {
    parse_vector(src, coords).map_err(|source| Error::Expr {
        context: format!("{what} '{src}'"),
        source,
    })
}

impl AmbientStructure {
    /// Build a structure from expression sources. `phi[j]` is a vector
    /// expression for the image of `∂_j`; `xi` is a vector expression and
    /// `eta` a 1-form expression in the `d<coord>` notation.
    #[allow(clippy::too_many_arguments)]
    pub fn custom(
        coords: Vec<String>,
        metric: &[Vec<String>],
        phi: &[String],
        xi: &str,
        eta: &str,
        mu: f64,
        reference: Option<&[Vec<String>]>,
    ) -> Result<Self> {
        let n = coords.len();
        if n % 2 == 0 {
            return Err(Error::Dimension(format!(
                "ambient dimension {n} is not odd"
            )));
        }
        let square = |rows: &[Vec<String>], what: &str| -> Result<Vec<Vec<ScalarExpr>>> {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Dimension(format!("{what} must be {n}x{n}")));
            }
            rows.iter()
                .map(|r| r.iter().map(|s| parse_in(s, &coords, what)).collect())
                .collect()
        };
        let metric = square(metric, "metric entry")?;
        let reference = reference
            .map(|r| square(r, "reference metric entry"))
            .transpose()?;
        if phi.len() != n {
            return Err(Error::Dimension(format!(
                "phi lists {} images for {n} coordinates",
                phi.len()
            )));
        }
        let phi = phi
            .iter()
            .map(|s| vector_in(s, &coords, "phi image"))
            .collect::<Result<Vec<_>>>()?;
        let xi = vector_in(xi, &coords, "xi")?;
        let eta = vector_in(eta, &coords, "eta")?;
        Ok(Self::assemble(
            AmbientKind::Custom,
            coords,
            metric,
            phi,
            xi,
            eta,
            mu,
            reference,
        ))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        kind: AmbientKind,
        coords: Vec<String>,
        metric: Vec<Vec<ScalarExpr>>,
        phi: Vec<VectorExpr>,
        xi: VectorExpr,
        eta: VectorExpr,
        mu: f64,
        reference: Option<Vec<Vec<ScalarExpr>>>,
    ) -> Self {
        let flat = metric.iter().flatten().all(ScalarExpr::is_const);
        Self {
            kind,
            coords,
            metric,
            phi,
            xi,
            eta,
            mu,
            reference,
            flat,
        }
    }

    /// Flat `ℝ^{2m+1}_q` with `η = dz`, `ξ = ∂z`, `φ̄∂xᵢ = −∂yᵢ`,
    /// `φ̄∂yᵢ = ∂xᵢ`; the first `q/2` pairs `(xᵢ, yᵢ)` are timelike.
    pub fn cosymplectic(m: usize, q: usize) -> Result<Self> {
        check_mq(m, q)?;
        let coords: Vec<String> = names("x", m)
            .chain(names("y", m))
            .chain(std::iter::once("z".to_string()))
            .collect();
        let n = 2 * m + 1;
        let sign = |a: usize| -> f64 {
            if a < 2 * m && (a % m) < q / 2 {
                -1.0
            } else {
                1.0
            }
        };
        let metric: Vec<Vec<String>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        if a == b {
                            format!("{}", sign(a))
                        } else {
                            "0".into()
                        }
                    })
                    .collect()
            })
            .collect();
        let phi: Vec<String> = (0..n)
            .map(|j| {
                if j < m {
                    format!("-dy{}", j + 1)
                } else if j < 2 * m {
                    format!("dx{}", j - m + 1)
                } else {
                    "0".into()
                }
            })
            .collect();
        let mut s = Self::custom(coords, &metric, &phi, "dz", "dz", 0.0, None)?;
        s.kind = AmbientKind::Cosymplectic { m, q };
        Ok(s)
    }

    /// `ℝ^{2m+1}_q` with `η = ½(dz − Σ yᵢdxᵢ)`, `ξ = 2∂z`,
    /// `ḡ = η⊗η + ¼Σ±(dxᵢ² + dyᵢ²)` and
    /// `φ̄(Xᵢ∂xᵢ + Yᵢ∂yᵢ + Z∂z) = Yᵢ∂xᵢ − Xᵢ∂yᵢ + Yᵢyᵢ∂z`.
    pub fn sasakian(m: usize, q: usize) -> Result<Self> {
        check_mq(m, q)?;
        let coords: Vec<String> = names("x", m)
            .chain(names("y", m))
            .chain(std::iter::once("z".to_string()))
            .collect();
        let n = 2 * m + 1;
        let sign = |a: usize| -> f64 {
            if a < 2 * m && (a % m) < q / 2 {
                -1.0
            } else {
                1.0
            }
        };
        // η components as source text: η_{xᵢ} = −½yᵢ, η_z = ½, else 0.
        let eta_c = |a: usize| -> Option<String> {
            if a < m {
                Some(format!("(-0.5*y{})", a + 1))
            } else if a == 2 * m {
                Some("0.5".into())
            } else {
                None
            }
        };
        let entry = |a: usize, b: usize, flat: &dyn Fn(usize) -> f64| -> String {
            let mut terms = Vec::new();
            if let (Some(p), Some(q)) = (eta_c(a), eta_c(b)) {
                terms.push(format!("{p}*{q}"));
            }
            if a == b && a < 2 * m {
                terms.push(format!("{}", 0.25 * flat(a)));
            }
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join(" + ")
            }
        };
        let metric: Vec<Vec<String>> = (0..n)
            .map(|a| (0..n).map(|b| entry(a, b, &sign)).collect())
            .collect();
        let reference: Vec<Vec<String>> = (0..n)
            .map(|a| (0..n).map(|b| entry(a, b, &|_| 1.0)).collect())
            .collect();
        let phi: Vec<String> = (0..n)
            .map(|j| {
                if j < m {
                    format!("-dy{}", j + 1)
                } else if j < 2 * m {
                    let i = j - m + 1;
                    format!("dx{i} + y{i}*dz")
                } else {
                    "0".into()
                }
            })
            .collect();
        let eta: String = {
            let mut s = String::from("0.5*(dz");
            for i in 1..=m {
                s.push_str(&format!(" - y{i}*dx{i}"));
            }
            s.push(')');
            s
        };
        let mut s = Self::custom(coords, &metric, &phi, "2*dz", &eta, 1.0, Some(&reference))?;
        s.kind = AmbientKind::Sasakian { m, q };
        Ok(s)
    }

    pub fn kind(&self) -> &AmbientKind {
        &self.kind
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn shared_coords(&self) -> Arc<[String]> {
        self.coords.clone().into()
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn has_constant_metric(&self) -> bool {
        self.flat
    }

    fn ctx(&self, what: &str, x: &[f64]) -> String {
        format!("{what} at ambient point {x:?}")
    }

    pub fn metric_at<S: Scalar>(&self, x: &[S]) -> Result<Mat<S>> {
        let n = self.dim();
        let mut out = Mat::from_fn(n, n, |_, _| x[0].zero_like());
        for a in 0..n {
            for b in a..n {
                let v = self.metric[a][b]
                    .eval(x)
                    .at(|| self.ctx("metric", &linalg::re_vec(x)))?;
                out[(a, b)] = v.clone();
                out[(b, a)] = v;
            }
        }
        Ok(out)
    }

    /// Positive-definite metric used to fix the null-frame gauge.
    pub fn reference_at<S: Scalar>(&self, x: &[S]) -> Result<Mat<S>> {
        let n = self.dim();
        match &self.reference {
            None => Ok(Mat::from_fn(n, n, |i, j| {
                if i == j {
                    x[0].one_like()
                } else {
                    x[0].zero_like()
                }
            })),
            Some(r) => {
                let mut out = Mat::from_fn(n, n, |_, _| x[0].zero_like());
                for a in 0..n {
                    for b in a..n {
                        let v = r[a][b]
                            .eval(x)
                            .at(|| self.ctx("reference metric", &linalg::re_vec(x)))?;
                        out[(a, b)] = v.clone();
                        out[(b, a)] = v;
                    }
                }
                Ok(out)
            }
        }
    }

    /// Matrix of `φ̄` with `[k][j] = φ̄ᵏⱼ`.
    pub fn phi_at<S: Scalar>(&self, x: &[S]) -> Result<Mat<S>> {
        let cols = self
            .phi
            .iter()
            .map(|v| v.eval(x).at(|| self.ctx("phi", &linalg::re_vec(x))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat::from_columns(&cols, self.dim()))
    }

    pub fn xi_at<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        self.xi.eval(x).at(|| self.ctx("xi", &linalg::re_vec(x)))
    }

    pub fn eta_at<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>> {
        self.eta.eval(x).at(|| self.ctx("eta", &linalg::re_vec(x)))
    }

    pub fn phi_apply(&self, x: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        Ok(self.phi_at(x)?.mul_vec(v))
    }

    pub fn eta_apply(&self, x: &[f64], v: &[f64]) -> Result<f64> {
        Ok(linalg::dot(&self.eta_at(x)?, v))
    }

    /// Levi-Civita symbols from first derivatives of the metric entries.
    pub fn christoffel(&self, x: &[f64]) -> Result<Christoffel> {
        let n = self.dim();
        if self.flat {
            return Ok(Christoffel::zero(n));
        }
        let seeds = Jet2::seed(x);
        // dg[a][b][l] = ∂_l g_ab
        let mut g = Mat::from_fn(n, n, |_, _| 0.0);
        let mut dg = vec![0.0; n * n * n];
        for a in 0..n {
            for b in a..n {
                let e = &self.metric[a][b];
                if e.is_const() {
                    let v = e.value(x).at(|| self.ctx("metric", x))?;
                    g[(a, b)] = v;
                    g[(b, a)] = v;
                    continue;
                }
                let j = e.eval(&seeds).at(|| self.ctx("metric", x))?;
                g[(a, b)] = j.value;
                g[(b, a)] = j.value;
                for l in 0..n {
                    dg[(a * n + b) * n + l] = j.grad[l];
                    dg[(b * n + a) * n + l] = j.grad[l];
                }
            }
        }
        let ident = Mat::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 });
        let ginv = linalg::solve(&g, &ident)
            .ok_or_else(|| Error::Degenerate(format!("metric is singular at {x:?}")))?;
        let d = |a: usize, b: usize, l: usize| dg[(a * n + b) * n + l];
        // lowered[l][i][j] = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
        let mut lowered = vec![0.0; n * n * n];
        for l in 0..n {
            for i in 0..n {
                for j in i..n {
                    let v = 0.5 * (d(j, l, i) + d(i, l, j) - d(i, j, l));
                    lowered[(l * n + i) * n + j] = v;
                    lowered[(l * n + j) * n + i] = v;
                }
            }
        }
        let mut data = vec![0.0; n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    let mut acc = 0.0;
                    for l in 0..n {
                        acc += ginv[(k, l)] * lowered[(l * n + i) * n + j];
                    }
                    data[(k * n + i) * n + j] = acc;
                    data[(k * n + j) * n + i] = acc;
                }
            }
        }
        Ok(Christoffel { n, data })
    }

    /// `(∇̄_X Y)ᵏ = Xⁱ∂ᵢYᵏ + Γᵏᵢⱼ XⁱYʲ` for a vector field given by expressions.
    pub fn covariant_derivative(
        &self,
        field: &VectorExpr,
        direction: &[f64],
        x: &[f64],
    ) -> Result<Vec<f64>> {
        let moved = field
            .eval(&dual_point(x, direction))
            .at(|| self.ctx("vector field", x))?;
        let value: Vec<f64> = moved.iter().map(|d| d.re).collect();
        let deriv: Vec<f64> = moved.iter().map(|d| d.eps).collect();
        let gamma = self.christoffel(x)?;
        Ok(linalg::add(&deriv, &gamma.apply(direction, &value)))
    }

    /// Matrix of `∇̄_X φ̄` at `x`, given the Christoffel symbols there.
    pub fn nabla_phi(&self, x: &[f64], dir: &[f64], gamma: &Christoffel) -> Result<Mat<f64>> {
        let n = self.dim();
        let moved = self.phi_at(&dual_point(x, dir))?;
        let phi = moved.map(|d| d.re);
        let mut out = moved.map(|d| d.eps);
        if gamma.is_zero() {
            return Ok(out);
        }
        // Γ_X as a matrix: (Γ_X)ᵏₗ = Γᵏᵢₗ Xⁱ
        let gx = Mat::from_fn(n, n, |k, l| {
            (0..n).map(|i| gamma.get(k, i, l) * dir[i]).sum()
        });
        let left = gx.matmul(&phi);
        let right = phi.matmul(&gx);
        for k in 0..n {
            for j in 0..n {
                out[(k, j)] += left[(k, j)] - right[(k, j)];
            }
        }
        Ok(out)
    }

    /// `H̄X = φ̄((∇̄_ξ φ̄)X)`.
    pub fn h_tensor(&self, x: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        let gamma = self.christoffel(x)?;
        self.h_tensor_with(x, v, &gamma)
    }

    pub fn h_tensor_with(&self, x: &[f64], v: &[f64], gamma: &Christoffel) -> Result<Vec<f64>> {
        let xi = self.xi_at(x)?;
        let np = self.nabla_phi(x, &xi, gamma)?;
        let phi = self.phi_at(x)?;
        Ok(phi.mul_vec(&np.mul_vec(v)))
    }
}
