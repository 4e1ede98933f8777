use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Immersion, Tangency};
use crate::ambient::{dual_point, AmbientStructure, Christoffel};
use crate::error::{DomainContext, Error, Result};
use crate::linalg::{
    self, add, choose_pivots, combine, dot, gram, kernel_with_pivots, null_transversal, re_vec,
    signed_gram_schmidt, span_rank, GsStep, Mat,
};
use crate::scalar::{Dual, Scalar};
use crate::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameMode {
    /// Fields taken from the scenario's frame declarations.
    Declared,
    /// Fields built from Jacobian columns.
    Canonical,
}

/// Discrete choices made while building a frame, so that the construction
/// can be repeated on perturbed inputs without changing branch.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FramePlan {
    pub rad_pivots: Vec<(usize, usize)>,
    pub screen_columns: Vec<usize>,
    pub perp_pivots: Vec<(usize, usize)>,
    pub perp_choice: Vec<usize>,
    pub screen_steps: Vec<GsStep>,
    pub transversal_steps: Vec<GsStep>,
}

/// Quasi-orthonormal frame at one point.
///
/// `rad` are the radical fields `Eᵢ`, `screen` the orthonormalized screen
/// fields `X̂ₐ` (built from `screen_raw`), `transversal` the orthonormalized
/// screen-transversal fields `Ŵ_α` and `null` the lightlike transversal
/// fields `Nᵢ` paired with `rad`.
#[derive(Clone, Debug)]
pub struct Frame<S> {
    pub point: Vec<S>,
    pub metric: Mat<S>,
    pub phi: Mat<S>,
    pub xi: Vec<S>,
    pub eta: Vec<S>,
    pub rad: Vec<Vec<S>>,
    pub screen_raw: Vec<Vec<S>>,
    pub screen: Vec<Vec<S>>,
    pub screen_signs: Vec<f64>,
    pub transversal_raw: Vec<Vec<S>>,
    pub transversal: Vec<Vec<S>>,
    pub transversal_signs: Vec<f64>,
    pub null: Vec<Vec<S>>,
}

/// Coefficients of an ambient vector along `E`, `X̂`, `N` and `Ŵ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition<S> {
    pub rad: Vec<S>,
    pub screen: Vec<S>,
    pub null: Vec<S>,
    pub transversal: Vec<S>,
}

impl<S: Clone> Decomposition<S> {
    /// Coefficients along the tangent frame `E ∪ X̂`.
    pub fn tangent(&self) -> Vec<S> {
        self.rad.iter().chain(&self.screen).cloned().collect()
    }

    /// Coefficients along the transversal frame `N ∪ Ŵ`.
    pub fn transversal_coeffs(&self) -> Vec<S> {
        self.null.iter().chain(&self.transversal).cloned().collect()
    }
}

/// A frame field selected by role.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Rad(usize),
    Screen(usize),
    ScreenRaw(usize),
    Null(usize),
    Transversal(usize),
    TransversalRaw(usize),
    /// Index into `rad ∪ screen`.
    Tangent(usize),
    Xi,
}

impl Field {
    pub fn of<S: Scalar>(&self, f: &Frame<S>) -> Vec<S> {
        match *self {
            Field::Rad(i) => f.rad[i].clone(),
            Field::Screen(a) => f.screen[a].clone(),
            Field::ScreenRaw(a) => f.screen_raw[a].clone(),
            Field::Null(i) => f.null[i].clone(),
            Field::Transversal(a) => f.transversal[a].clone(),
            Field::TransversalRaw(a) => f.transversal_raw[a].clone(),
            Field::Tangent(k) if k < f.rad.len() => f.rad[k].clone(),
            Field::Tangent(k) => f.screen[k - f.rad.len()].clone(),
            Field::Xi => f.xi.clone(),
        }
    }
}

impl<S: Scalar> Frame<S> {
    pub fn r(&self) -> usize {
        self.rad.len()
    }

    pub fn s(&self) -> usize {
        self.screen.len()
    }

    pub fn w(&self) -> usize {
        self.transversal.len()
    }

    pub fn tangent_dim(&self) -> usize {
        self.r() + self.s()
    }

    pub fn tangent(&self) -> Vec<Vec<S>> {
        self.rad.iter().chain(&self.screen).cloned().collect()
    }

    pub fn g(&self, u: &[S], v: &[S]) -> S {
        self.metric.form(u, v)
    }

    pub fn phi_of(&self, v: &[S]) -> Vec<S> {
        self.phi.mul_vec(v)
    }

    pub fn eta_of(&self, v: &[S]) -> S {
        dot(&self.eta, v)
    }

    fn zero_vec(&self) -> Vec<S> {
        vec![self.point[0].zero_like(); self.point.len()]
    }

    /// Coefficients by the dual pairings of the quasi-orthonormal frame.
    pub fn decompose(&self, v: &[S]) -> Decomposition<S> {
        let gv = self.metric.mul_vec(v);
        Decomposition {
            rad: self.null.iter().map(|n| dot(n, &gv)).collect(),
            screen: self
                .screen
                .iter()
                .zip(&self.screen_signs)
                .map(|(x, e)| dot(x, &gv).scale(*e))
                .collect(),
            null: self.rad.iter().map(|e| dot(e, &gv)).collect(),
            transversal: self
                .transversal
                .iter()
                .zip(&self.transversal_signs)
                .map(|(w, e)| dot(w, &gv).scale(*e))
                .collect(),
        }
    }

    /// Tangent vector with the given coefficients along `E ∪ X̂`.
    pub fn tangent_vector(&self, coeffs: &[S]) -> Vec<S> {
        combine(coeffs, &self.tangent(), &self.zero_vec())
    }

    /// Transversal vector with the given coefficients along `N ∪ Ŵ`.
    pub fn transversal_vector(&self, coeffs: &[S]) -> Vec<S> {
        let basis: Vec<Vec<S>> = self.null.iter().chain(&self.transversal).cloned().collect();
        combine(coeffs, &basis, &self.zero_vec())
    }

    pub fn compose(&self, d: &Decomposition<S>) -> Vec<S> {
        add(
            &self.tangent_vector(&d.tangent()),
            &self.transversal_vector(&d.transversal_coeffs()),
        )
    }

    /// Tangent part of `v` as an ambient vector.
    pub fn tangent_part(&self, v: &[S]) -> Vec<S> {
        self.tangent_vector(&self.decompose(v).tangent())
    }

    /// Transversal part of `v` as an ambient vector.
    pub fn transversal_part(&self, v: &[S]) -> Vec<S> {
        self.transversal_vector(&self.decompose(v).transversal_coeffs())
    }
}

/// Largest deviations from the quasi-orthonormality relations.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub residuals: BTreeMap<String, f64>,
}

impl OrthogonalityReport {
    pub fn max(&self) -> f64 {
        self.residuals.values().fold(0.0, |m, v| m.max(*v))
    }
}

impl Frame<f64> {
    pub fn orthogonality(&self) -> OrthogonalityReport {
        let mut res = BTreeMap::new();
        let mut put =
            |name: &str, a: &[Vec<f64>], b: &[Vec<f64>], target: &dyn Fn(usize, usize) -> f64| {
                let mut worst = 0.0f64;
                for (i, u) in a.iter().enumerate() {
                    for (j, v) in b.iter().enumerate() {
                        let scale = (linalg::norm(u) * linalg::norm(v)).max(1.0);
                        worst = worst.max((self.g(u, v) - target(i, j)).abs() / scale);
                    }
                }
                res.insert(name.to_string(), worst);
            };
        let zero = |_: usize, _: usize| 0.0;
        let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
        let ss = self.screen_signs.clone();
        let ts = self.transversal_signs.clone();
        let screen_unit = move |i: usize, j: usize| if i == j { ss[i] } else { 0.0 };
        let trans_unit = move |i: usize, j: usize| if i == j { ts[i] } else { 0.0 };
        put("rad_rad", &self.rad, &self.rad, &zero);
        put("rad_screen", &self.rad, &self.screen, &zero);
        put("rad_transversal", &self.rad, &self.transversal, &zero);
        put("rad_null", &self.rad, &self.null, &delta);
        put("null_null", &self.null, &self.null, &zero);
        put("null_screen", &self.null, &self.screen, &zero);
        put("null_transversal", &self.null, &self.transversal, &zero);
        put("screen_transversal", &self.screen, &self.transversal, &zero);
        put("screen_screen", &self.screen, &self.screen, &screen_unit);
        put(
            "transversal_transversal",
            &self.transversal,
            &self.transversal,
            &trans_unit,
        );
        OrthogonalityReport { residuals: res }
    }
}

enum Raw<S> {
    Declared {
        rad: Vec<Vec<S>>,
        screen: Vec<Vec<S>>,
        transversal: Option<Vec<Vec<S>>>,
    },
    Jacobian(Mat<S>),
}

fn in_context(what: &str, e: Error) -> Error {
    match e {
        Error::Degenerate(m) => Error::Degenerate(format!("{what}: {m}")),
        other => other,
    }
}

fn build_frame<S: Scalar>(
    space: &AmbientStructure,
    x: Vec<S>,
    raw: Raw<S>,
    plan: Option<&FramePlan>,
    tol: f64,
) -> Result<(Frame<S>, FramePlan)> {
    let n = space.dim();
    let metric = space.metric_at(&x)?;
    let reference = space.reference_at(&x)?;
    let phi = space.phi_at(&x)?;
    let xi = space.xi_at(&x)?;
    let eta = space.eta_at(&x)?;
    let zero = vec![x[0].zero_like(); n];
    let mut rec = FramePlan::default();

    let (rad, screen_raw, span, declared_w) = match raw {
        Raw::Declared {
            rad,
            screen,
            transversal,
        } => {
            let span: Vec<Vec<S>> = rad.iter().chain(&screen).cloned().collect();
            (rad, screen, span, transversal)
        }
        Raw::Jacobian(j) => {
            let cols = j.columns();
            let g = gram(&cols, &metric)?;
            let pivots = match plan {
                Some(p) => p.rad_pivots.clone(),
                None => {
                    let gr = g.re();
                    let plain: Vec<Vec<f64>> = cols.iter().map(|c| re_vec(c)).collect();
                    let scale = linalg::gram_scale(&plain, &metric.re());
                    choose_pivots(&gr, linalg::rank_at_scale(&gr, tol, scale))
                }
            };
            let coeffs = kernel_with_pivots(&g, &pivots);
            let rad: Vec<Vec<S>> = coeffs.iter().map(|c| combine(c, &cols, &zero)).collect();
            let mut screen_columns: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
            screen_columns.sort_unstable();
            let screen = screen_columns.iter().map(|&c| cols[c].clone()).collect();
            rec.rad_pivots = pivots;
            rec.screen_columns = screen_columns;
            (rad, screen, cols, None)
        }
    };

    let transversal_raw = match declared_w {
        Some(w) => w,
        None => {
            // TM⊥ is the kernel of the rows ḡ(T, ·); keep a complement of Rad in it.
            let rows: Vec<Vec<S>> = span.iter().map(|t| metric.mul_vec(t)).collect();
            let a = Mat::from_rows(&rows);
            let pivots = match plan {
                Some(p) => p.perp_pivots.clone(),
                None => {
                    let ar = a.re();
                    choose_pivots(&ar, linalg::rank(&ar, tol))
                }
            };
            let kern = kernel_with_pivots(&a, &pivots);
            let choice = match plan {
                Some(p) => p.perp_choice.clone(),
                None => {
                    let mut acc: Vec<Vec<f64>> = rad.iter().map(|v| re_vec(v)).collect();
                    let mut choice = Vec::new();
                    for (i, k) in kern.iter().enumerate() {
                        acc.push(re_vec(k));
                        if span_rank(&acc, tol) == acc.len() {
                            choice.push(i);
                        } else {
                            acc.pop();
                        }
                    }
                    choice
                }
            };
            rec.perp_pivots = pivots;
            rec.perp_choice = choice.clone();
            choice.iter().map(|&i| kern[i].clone()).collect()
        }
    };

    let screen_on = signed_gram_schmidt(
        &screen_raw,
        &metric,
        tol,
        plan.map(|p| p.screen_steps.as_slice()),
    )
    .map_err(|e| in_context("screen", e))?;
    let trans_on = signed_gram_schmidt(
        &transversal_raw,
        &metric,
        tol,
        plan.map(|p| p.transversal_steps.as_slice()),
    )
    .map_err(|e| in_context("screen transversal bundle", e))?;
    let null = null_transversal(
        &rad,
        &screen_on.vectors,
        &trans_on.vectors,
        &metric,
        &reference,
    )?;
    rec.screen_steps = screen_on.steps;
    rec.transversal_steps = trans_on.steps;
    let frame = Frame {
        point: x,
        metric,
        phi,
        xi,
        eta,
        rad,
        screen_raw,
        screen: screen_on.vectors,
        screen_signs: screen_on.signs,
        transversal_raw,
        transversal: trans_on.vectors,
        transversal_signs: trans_on.signs,
        null,
    };
    Ok((frame, plan.cloned().unwrap_or(rec)))
}

/// Frame at a point together with its first derivatives along every
/// tangent frame field.
#[derive(Clone, Debug)]
pub struct FramePoint {
    pub params: Vec<f64>,
    pub mode: FrameMode,
    pub frame: Frame<f64>,
    /// `moved[k]` is the frame evaluated along tangent field `k` to first
    /// order: its dual parts are the directional derivatives.
    pub moved: Vec<Frame<Dual>>,
    pub gamma: Christoffel,
    pub plan: FramePlan,
}

fn eval_fields<S: Scalar>(
    fields: &[crate::expr::VectorExpr],
    x: &[S],
    role: &str,
) -> Result<Vec<Vec<S>>> {
    fields
        .iter()
        .map(|f| {
            f.eval(x)
                .at(|| format!("{role} field '{}' at {:?}", f.source(), re_vec(x)))
        })
        .collect()
}

fn declared_raw<S: Scalar>(imm: &Immersion, x: &[S]) -> Result<Raw<S>> {
    let d = imm.declared().expect("declared frames");
    Ok(Raw::Declared {
        rad: eval_fields(&d.rad, x, "radical")?,
        screen: eval_fields(&d.screen, x, "screen")?,
        transversal: d
            .transversal
            .as_ref()
            .map(|w| eval_fields(w, x, "transversal"))
            .transpose()?,
    })
}

impl FramePoint {
    /// Build the frame of `imm` at parameters `p` and its derivatives.
    pub fn new(
        space: &AmbientStructure,
        imm: &Immersion,
        p: &[f64],
        tol: &Tolerances,
    ) -> Result<Self> {
        let n = space.dim();
        if imm.ambient_dim() != n {
            return Err(Error::Dimension(format!(
                "immersion has {} coordinates, ambient has {n}",
                imm.ambient_dim()
            )));
        }
        let jets = imm.jets(p)?;
        let m = imm.dim();
        let x: Vec<f64> = jets.iter().map(|j| j.value).collect();
        let jac = Mat::from_fn(n, m, |a, j| jets[a].grad[j]);
        let strict = imm.tangency() == Tangency::Strict;
        if strict {
            let rk = linalg::rank(&jac, tol.rank);
            if rk < m {
                return Err(Error::Rank(format!(
                    "Jacobian has rank {rk} < {m} at parameters {p:?}"
                )));
            }
        }
        let mode = if imm.declared().is_some() {
            FrameMode::Declared
        } else {
            FrameMode::Canonical
        };
        let raw = match mode {
            FrameMode::Declared => declared_raw(imm, &x)?,
            FrameMode::Canonical => Raw::Jacobian(jac.clone()),
        };
        let (frame, plan) = build_frame(space, x.clone(), raw, None, tol.rank)?;
        if mode == FrameMode::Declared {
            validate_declared(&frame, imm, &jac, p, tol)?;
        }
        let jac_cols = jac.columns();
        let mut moved = Vec::with_capacity(frame.tangent_dim());
        for t in frame.tangent() {
            let (xd, raw) = match mode {
                FrameMode::Declared => {
                    let xd = dual_point(&x, &t);
                    let raw = declared_raw(imm, &xd)?;
                    (xd, raw)
                }
                FrameMode::Canonical => {
                    let c = linalg::least_squares(&jac_cols, &t, tol.rank);
                    let xd: Vec<Dual> = (0..n)
                        .map(|a| Dual::new(x[a], (0..m).map(|j| jac[(a, j)] * c[j]).sum()))
                        .collect();
                    let jd = Mat::from_fn(n, m, |a, j| {
                        let d = (0..m).map(|l| jets[a].hess_at(j, l) * c[l]).sum();
                        Dual::new(jac[(a, j)], d)
                    });
                    (xd, Raw::Jacobian(jd))
                }
            };
            let (f, _) = build_frame(space, xd, raw, Some(&plan), tol.rank)?;
            moved.push(f);
        }
        let gamma = space.christoffel(&x)?;
        Ok(Self {
            params: p.to_vec(),
            mode,
            frame,
            moved,
            gamma,
            plan,
        })
    }

    pub fn r(&self) -> usize {
        self.frame.r()
    }

    pub fn s(&self) -> usize {
        self.frame.s()
    }

    pub fn w(&self) -> usize {
        self.frame.w()
    }

    pub fn t(&self) -> usize {
        self.frame.tangent_dim()
    }

    pub fn point(&self) -> &[f64] {
        &self.frame.point
    }

    pub fn tangent(&self) -> Vec<Vec<f64>> {
        self.frame.tangent()
    }

    /// Value of a field at the base point.
    pub fn value(&self, field: impl Fn(&Frame<Dual>) -> Vec<Dual>) -> Vec<f64> {
        re_vec(&field(&self.moved[0]))
    }

    /// Directional derivative `T_k(V)` of a field's coordinates.
    pub fn derivative(&self, k: usize, field: impl Fn(&Frame<Dual>) -> Vec<Dual>) -> Vec<f64> {
        field(&self.moved[k]).iter().map(|d| d.eps).collect()
    }

    /// Derivative of a scalar function of the frame along tangent field `k`.
    pub fn derivative_scalar(&self, k: usize, f: impl Fn(&Frame<Dual>) -> Dual) -> f64 {
        f(&self.moved[k]).eps
    }

    /// `∇̄_{T_k} V`.
    pub fn covariant(&self, k: usize, field: impl Fn(&Frame<Dual>) -> Vec<Dual>) -> Vec<f64> {
        let v = field(&self.moved[k]);
        let (re, eps): (Vec<f64>, Vec<f64>) = v.iter().map(|d| (d.re, d.eps)).unzip();
        add(&eps, &self.gamma.apply(&self.tangent_field(k), &re))
    }

    pub fn tangent_field(&self, k: usize) -> Vec<f64> {
        Field::Tangent(k).of(&self.frame)
    }

    /// Coefficients of a tangent vector along `E ∪ X̂`.
    pub fn tangent_coords(&self, y: &[f64]) -> Vec<f64> {
        self.frame.decompose(y).tangent()
    }

    /// `∇̄_Y V` for a tangent vector `Y`.
    pub fn covariant_along(
        &self,
        y: &[f64],
        field: impl Fn(&Frame<Dual>) -> Vec<Dual>,
    ) -> Vec<f64> {
        let c = self.tangent_coords(y);
        let mut acc = vec![0.0; y.len()];
        for (k, ck) in c.iter().enumerate() {
            if *ck != 0.0 {
                acc = linalg::axpy(ck, &self.covariant(k, &field), &acc);
            }
        }
        acc
    }

    /// Plain directional derivative of the coordinates of `V` along `Y`.
    pub fn derivative_along(
        &self,
        y: &[f64],
        field: impl Fn(&Frame<Dual>) -> Vec<Dual>,
    ) -> Vec<f64> {
        let c = self.tangent_coords(y);
        let mut acc = vec![0.0; y.len()];
        for (k, ck) in c.iter().enumerate() {
            if *ck != 0.0 {
                acc = linalg::axpy(ck, &self.derivative(k, &field), &acc);
            }
        }
        acc
    }

    /// `[U, V] = D_U V − D_V U` for tangent fields given by closures.
    pub fn lie_bracket(
        &self,
        u: impl Fn(&Frame<Dual>) -> Vec<Dual>,
        v: impl Fn(&Frame<Dual>) -> Vec<Dual>,
    ) -> Vec<f64> {
        let uu = self.value(&u);
        let vv = self.value(&v);
        linalg::sub(
            &self.derivative_along(&uu, &v),
            &self.derivative_along(&vv, &u),
        )
    }
}

fn validate_declared(
    frame: &Frame<f64>,
    imm: &Immersion,
    jac: &Mat<f64>,
    p: &[f64],
    tol: &Tolerances,
) -> Result<()> {
    let d = imm.declared().expect("declared frames");
    let tangent = frame.tangent();
    let names: Vec<&str> = d.rad.iter().chain(&d.screen).map(|v| v.source()).collect();
    if imm.tangency() == Tangency::Strict {
        if tangent.len() != imm.dim() {
            return Err(Error::scenario(format!(
                "{} tangent fields declared for a {}-dimensional immersion",
                tangent.len(),
                imm.dim()
            )));
        }
        let cols = jac.columns();
        for (v, name) in tangent.iter().zip(&names) {
            let res = linalg::membership_residual(v, &cols, tol.rank);
            if res > tol.algebraic {
                return Err(Error::scenario(format!(
                    "declared field '{name}' is not tangent at parameters {p:?} (residual {res:.3e})"
                )));
            }
        }
    }
    if span_rank(&tangent, tol.rank) < tangent.len() {
        return Err(Error::Degenerate(format!(
            "declared tangent fields are linearly dependent at parameters {p:?}"
        )));
    }
    for (e, name) in frame.rad.iter().zip(&names) {
        for t in &tangent {
            let scale = (linalg::norm(e) * linalg::norm(t)).max(1.0);
            let res = frame.g(e, t).abs() / scale;
            if res > tol.algebraic {
                return Err(Error::Rank(format!(
                    "declared radical field '{name}' is not orthogonal to the tangent space at parameters {p:?} (residual {res:.3e})"
                )));
            }
        }
    }
    let rad = linalg::radical(&tangent, &frame.metric, tol.rank)?;
    if rad.len() != frame.r() {
        return Err(Error::Rank(format!(
            "the declared tangent span has a radical of rank {} but {} radical fields are declared",
            rad.len(),
            frame.r()
        )));
    }
    if let Some(w) = &d.transversal {
        let n = frame.point.len();
        let want = n - tangent.len() - frame.r();
        if w.len() != want {
            return Err(Error::scenario(format!(
                "{} screen-transversal fields declared, the complement of the radical in the normal space has dimension {want}",
                w.len()
            )));
        }
        for (v, f) in frame.transversal_raw.iter().zip(w) {
            for t in &tangent {
                let scale = (linalg::norm(v) * linalg::norm(t)).max(1.0);
                let res = frame.g(v, t).abs() / scale;
                if res > tol.algebraic {
                    return Err(Error::scenario(format!(
                        "declared transversal field '{}' is not normal at parameters {p:?} (residual {res:.3e})",
                        f.source()
                    )));
                }
            }
        }
        let mut all = frame.rad.clone();
        all.extend(frame.transversal_raw.iter().cloned());
        if span_rank(&all, tol.rank) < all.len() {
            return Err(Error::Degenerate(
                "declared transversal fields meet the radical".into(),
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{bundled, Scenario};

    fn at(text: &str, p: &[f64]) -> (Scenario, FramePoint) {
        let scn = Scenario::parse(text).unwrap();
        let fp = FramePoint::new(&scn.space, &scn.immersion, p, &scn.tolerances).unwrap();
        (scn, fp)
    }

    #[test]
    fn canonical_frame_is_quasi_orthonormal() {
        let (_, fp) = at(bundled::NULL_RULED_SURFACE, &[2.0, 0.4]);
        assert_eq!((fp.r(), fp.s(), fp.w()), (1, 1, 2));
        assert!(fp.frame.orthogonality().max() < 1e-12);
        let (_, fp) = at(
            bundled::MINIMAL_ASCREEN,
            &[0.1, -0.2, 0.3, 0.4, -0.5, 0.6, 0.7, -0.8],
        );
        assert_eq!(fp.mode, FrameMode::Declared);
        assert!(fp.frame.orthogonality().max() < 1e-12);
    }

    #[test]
    fn decomposition_reconstructs_vectors() {
        let (_, fp) = at(bundled::NULL_RULED_SURFACE, &[2.0, 0.4]);
        let v = vec![0.3, -1.2, 0.5, 2.0, 0.7];
        let d = fp.frame.decompose(&v);
        let back = fp.frame.compose(&d);
        assert!(linalg::max_abs(&linalg::sub(&v, &back)) < 1e-12);
        let t = fp.frame.tangent_part(&v);
        let n = fp.frame.transversal_part(&v);
        assert!(linalg::max_abs(&linalg::sub(&v, &add(&t, &n))) < 1e-12);
    }

    /// Dual parts of the moved frames against central differences of frames
    /// rebuilt with the same plan.
    #[test]
    fn moved_frames_match_finite_differences() {
        let p = [2.0, 0.4];
        let (scn, fp) = at(bundled::NULL_RULED_SURFACE, &p);
        let imm = &scn.immersion;
        let jac = imm.jacobian(&p).unwrap();
        let h = 1e-6;
        for (k, t) in fp.tangent().iter().enumerate() {
            let c = linalg::least_squares(&jac.columns(), t, 1e-12);
            let rebuilt = |s: f64| {
                let q: Vec<f64> = p.iter().zip(&c).map(|(a, b)| a + s * b).collect();
                let raw = Raw::Jacobian(imm.jacobian(&q).unwrap());
                build_frame(
                    &scn.space,
                    imm.point(&q).unwrap(),
                    raw,
                    Some(&fp.plan),
                    1e-9,
                )
                .unwrap()
                .0
            };
            let (fwd, bwd) = (rebuilt(h), rebuilt(-h));
            let fields = [
                Field::Null(0),
                Field::Screen(0),
                Field::Transversal(1),
                Field::Rad(0),
            ];
            for f in fields {
                let fd: Vec<f64> = f
                    .of(&fwd)
                    .iter()
                    .zip(f.of(&bwd))
                    .map(|(a, b)| (a - b) / (2.0 * h))
                    .collect();
                let exact = fp.derivative(k, |fr| f.of(fr));
                let gap = linalg::max_abs(&linalg::sub(&fd, &exact));
                assert!(gap < 1e-6, "{f:?} along T{k}: {exact:?} vs {fd:?}");
            }
        }
    }

    #[test]
    fn brackets_of_coordinate_fields_vanish() {
        // canonical tangent fields of a graph are combinations of coordinate
        // fields with constant coefficients here, so they commute
        let (_, fp) = at(bundled::PLANE, &[0.2, -0.3]);
        let b = fp.lie_bracket(|f| Field::Tangent(0).of(f), |f| Field::Tangent(1).of(f));
        assert!(linalg::max_abs(&b) < 1e-12);
    }

    #[test]
    fn declared_fields_must_be_tangent() {
        let text = bundled::PLANE.replace(
            "[samples]",
            "[frames]\nscreen = [\"dx1\", \"dz\"]\n\n[samples]",
        );
        let scn = Scenario::parse(&text).unwrap();
        let err =
            FramePoint::new(&scn.space, &scn.immersion, &[0.1, 0.1], &scn.tolerances).unwrap_err();
        assert!(err.to_string().contains("not tangent"), "{err}");
    }
}
