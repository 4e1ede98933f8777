//! Distributions spanned by frame fields and their `φ̄`-images: involutivity
//! by brackets and by the second-fundamental-form criteria, parallelism and
//! the consequences expected from it.

use serde::{Deserialize, Serialize};

use super::member;
use super::structure::QgcrCertificate;
use crate::linalg::{add, axpy, max_abs, scale_f, sub};
use crate::scalar::{Dual, Scalar};
use crate::submanifold::{Field, Frame, FramePoint, SecondFundamental};

/// Spanning field of a distribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Field(Field),
    Phi(Field),
}

impl Generator {
    pub fn eval<S: Scalar>(&self, f: &Frame<S>) -> Vec<S> {
        match self {
            Generator::Field(v) => v.of(f),
            Generator::Phi(v) => f.phi_of(&v.of(f)),
        }
    }

    fn closure(self) -> impl Fn(&Frame<Dual>) -> Vec<Dual> {
        move |g| self.eval(g)
    }
}

/// Which side of the co-screen split a distribution lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Radical fields, the invariant screen part and images of the
    /// anti-invariant radical fields.
    RadicalSide,
    /// Images of the transversal fields mapped into the screen.
    ImageSide,
    /// The `φ̄`-invariant part of the screen.
    InvariantScreen,
}

impl Side {
    pub fn key(self) -> &'static str {
        match self {
            Side::RadicalSide => "radical_side",
            Side::ImageSide => "image_side",
            Side::InvariantScreen => "invariant_screen",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionCheck {
    pub side: Side,
    pub dim: usize,
    /// Worst distance of a bracket of generators from the distribution.
    pub bracket_residual: f64,
    /// Largest value of the form whose vanishing characterizes
    /// involutivity, when one is known for this side.
    pub criterion: Option<f64>,
    /// Deviation of that form from its bracket expression.
    pub criterion_identity: Option<f64>,
    /// `∇_X Y + ∇_Y X` with `X` tangent and `Y` in the distribution.
    pub nearly_parallel: f64,
    /// Same with both arguments in the distribution.
    pub nearly_auto_parallel: f64,
}

/// Consequences of parallelism that are checked only when the hypothesis
/// holds at the point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Consequents {
    pub parallel_hypothesis: bool,
    /// Null and screen-transversal components, on the fields mapped into
    /// the screen, of `h(X,φY) + h(Y,φX) + ∇ᵗ_Y (transversal part of φ̄X)`.
    pub parallel: f64,
    pub auto_parallel_hypothesis: bool,
    /// Same components of `h(X,φY) + h(Y,φX)` for `X, Y` in the distribution.
    pub auto_parallel: f64,
    /// Tangent part of `φ̄` applied to that sum.
    pub auto_parallel_tangent: f64,
}

/// Co-screen specific checks at one point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoscreenGeometry {
    pub radical_side: DistributionCheck,
    pub image_side: DistributionCheck,
    pub consequents: Consequents,
    /// `max |η(∇̄_X Y + ∇̄_Y X)|` over tangent frame pairs.
    pub eta_symmetric: f64,
    /// Distance of the tangent frame from the sum of both sides.
    pub tangent_projection: f64,
    /// Distance of the transversal frame from the images of the image side,
    /// the complementary fields and `ξ`.
    pub transversal_projection: f64,
    /// `φ̄`-invariance of the complementary transversal fields.
    pub complement_invariance: f64,
}

struct Ctx<'a> {
    fp: &'a FramePoint,
    sf: &'a SecondFundamental,
    mu: f64,
    tol: f64,
}

impl Ctx<'_> {
    fn f(&self) -> &Frame<f64> {
        &self.fp.frame
    }

    fn h(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let c = self
            .sf
            .h_coeffs(&self.fp.tangent_coords(x), &self.fp.tangent_coords(y));
        self.f().transversal_vector(&c)
    }

    fn shape(&self, v: &[f64], x: &[f64]) -> Vec<f64> {
        let c = self.f().decompose(v).transversal_coeffs();
        self.sf
            .shape_coeffs(&c, &self.fp.tangent_coords(x), v.len())
    }

    /// Induced connection `∇_X Y` for a field `Y`.
    fn nabla(&self, x: &[f64], y: impl Fn(&Frame<Dual>) -> Vec<Dual>) -> Vec<f64> {
        self.f().tangent_part(&self.fp.covariant_along(x, y))
    }

    fn phi_t(&self, v: &[f64]) -> Vec<f64> {
        self.f().tangent_part(&self.f().phi_of(v))
    }

    fn phi_n(&self, v: &[f64]) -> Vec<f64> {
        self.f().transversal_part(&self.f().phi_of(v))
    }

    fn check(&self, side: Side, gens: &[Generator]) -> DistributionCheck {
        let fp = self.fp;
        let vals: Vec<Vec<f64>> = gens.iter().map(|g| fp.value(g.closure())).collect();
        let dim = crate::linalg::span_rank(&vals, self.tol);
        let mut bracket_residual = 0.0f64;
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i + 1..] {
                let br = fp.lie_bracket(a.closure(), b.closure());
                bracket_residual = bracket_residual.max(member(&br, &vals, self.tol));
            }
        }
        let mut nearly_parallel = 0.0f64;
        for k in 0..fp.t() {
            let x = fp.tangent_field(k);
            for (g, y) in gens.iter().zip(&vals) {
                let s = add(
                    &self.nabla(&x, g.closure()),
                    &self.nabla(y, move |f: &Frame<Dual>| Field::Tangent(k).of(f)),
                );
                nearly_parallel = nearly_parallel.max(member(&s, &vals, self.tol));
            }
        }
        let mut nearly_auto_parallel = 0.0f64;
        for (i, (a, x)) in gens.iter().zip(&vals).enumerate() {
            for (b, y) in gens[i..].iter().zip(&vals[i..]) {
                let s = add(&self.nabla(x, b.closure()), &self.nabla(y, a.closure()));
                nearly_auto_parallel = nearly_auto_parallel.max(member(&s, &vals, self.tol));
            }
        }
        let (criterion, criterion_identity) = match side {
            Side::InvariantScreen => (None, None),
            _ => {
                let (c, i) = self.criterion(side, gens, &vals);
                (Some(c), Some(i))
            }
        };
        DistributionCheck {
            side,
            dim,
            bracket_residual,
            criterion,
            criterion_identity,
            nearly_parallel,
            nearly_auto_parallel,
        }
    }

    fn criterion(&self, side: Side, gens: &[Generator], vals: &[Vec<f64>]) -> (f64, f64) {
        let f = self.f();
        let (mut worst, mut identity) = (0.0f64, 0.0f64);
        for (a, x) in gens.iter().zip(vals) {
            for (b, y) in gens.iter().zip(vals) {
                let nyx = self.nabla(y, a.closure());
                let hxy = self.h(x, y);
                let bracket = self.fp.lie_bracket(a.closure(), b.closure());
                let (form, partner) = match side {
                    Side::RadicalSide => {
                        let mut v = add(&self.h(x, &self.phi_t(y)), &self.h(y, &self.phi_t(x)));
                        v = axpy(&-2.0, &self.phi_n(&nyx), &v);
                        v = axpy(&-2.0, &self.phi_n(&hxy), &v);
                        v = axpy(&(-2.0 * self.mu * f.g(x, y)), &f.xi, &v);
                        (v, self.phi_n(&bracket))
                    }
                    _ => {
                        let mut v = add(
                            &self.shape(&self.phi_n(x), y),
                            &self.shape(&self.phi_n(y), x),
                        );
                        v = axpy(&2.0, &self.phi_t(&nyx), &v);
                        v = axpy(&2.0, &self.phi_t(&hxy), &v);
                        (v, scale_f(-1.0, &self.phi_t(&bracket)))
                    }
                };
                worst = worst.max(max_abs(&form));
                identity = identity.max(max_abs(&sub(&form, &partner)));
            }
        }
        (worst, identity)
    }

    /// Components along the null fields and screen-transversal fields that
    /// `φ̄` maps into the screen.
    fn mapped_components(&self, q: &QgcrCertificate, v: &[f64]) -> f64 {
        let d = self.f().decompose(v);
        q.null_to_screen
            .iter()
            .map(|&i| d.null[i].abs())
            .chain(
                q.transversal_to_screen
                    .iter()
                    .map(|&a| d.transversal[a].abs()),
            )
            .fold(0.0, f64::max)
    }

    fn consequents(
        &self,
        q: &QgcrCertificate,
        d: &DistributionCheck,
        gens: &[Generator],
    ) -> Consequents {
        let fp = self.fp;
        let vals: Vec<Vec<f64>> = gens.iter().map(|g| fp.value(g.closure())).collect();
        let mut parallel = 0.0f64;
        for k in 0..fp.t() {
            let x = fp.tangent_field(k);
            let transversal_image =
                move |g: &Frame<Dual>| g.transversal_part(&g.phi_of(&Field::Tangent(k).of(g)));
            for y in &vals {
                let conn = self
                    .f()
                    .transversal_part(&fp.covariant_along(y, transversal_image));
                let c = add(
                    &add(&self.h(&x, &self.phi_t(y)), &self.h(y, &self.phi_t(&x))),
                    &conn,
                );
                parallel = parallel.max(self.mapped_components(q, &c));
            }
        }
        let (mut auto_parallel, mut auto_parallel_tangent) = (0.0f64, 0.0f64);
        for x in &vals {
            for y in &vals {
                let c = add(&self.h(x, &self.phi_t(y)), &self.h(y, &self.phi_t(x)));
                auto_parallel = auto_parallel.max(self.mapped_components(q, &c));
                auto_parallel_tangent = auto_parallel_tangent.max(max_abs(&self.phi_t(&c)));
            }
        }
        Consequents {
            parallel_hypothesis: d.nearly_parallel < self.tol,
            parallel,
            auto_parallel_hypothesis: d.nearly_auto_parallel < self.tol,
            auto_parallel,
            auto_parallel_tangent,
        }
    }
}

fn radical_side(q: &QgcrCertificate, r: usize) -> Vec<Generator> {
    let mut g: Vec<Generator> = (0..r).map(|i| Generator::Field(Field::Rad(i))).collect();
    g.extend(
        q.invariant_screen
            .iter()
            .map(|&a| Generator::Field(Field::Screen(a))),
    );
    g.extend(q.anti_rad.iter().map(|&i| Generator::Phi(Field::Rad(i))));
    g
}

fn image_side(q: &QgcrCertificate) -> Vec<Generator> {
    let mut g: Vec<Generator> = q
        .transversal_to_screen
        .iter()
        .map(|&a| Generator::Phi(Field::Transversal(a)))
        .collect();
    g.extend(
        q.null_to_screen
            .iter()
            .map(|&i| Generator::Phi(Field::Null(i))),
    );
    g
}

/// Involutivity and parallelism of the invariant screen part.
pub fn invariant_screen(
    fp: &FramePoint,
    sf: &SecondFundamental,
    q: &QgcrCertificate,
    mu: f64,
    tol: f64,
) -> DistributionCheck {
    let ctx = Ctx { fp, sf, mu, tol };
    let gens: Vec<Generator> = q
        .invariant_screen
        .iter()
        .map(|&a| Generator::Field(Field::Screen(a)))
        .collect();
    ctx.check(Side::InvariantScreen, &gens)
}

pub fn coscreen_geometry(
    fp: &FramePoint,
    sf: &SecondFundamental,
    q: &QgcrCertificate,
    mu: f64,
    tol: f64,
) -> CoscreenGeometry {
    let ctx = Ctx { fp, sf, mu, tol };
    let f = &fp.frame;
    let rgens = radical_side(q, f.r());
    let igens = image_side(q);
    let radical = ctx.check(Side::RadicalSide, &rgens);
    let image = ctx.check(Side::ImageSide, &igens);
    let consequents = ctx.consequents(q, &radical, &rgens);

    let mut eta_symmetric = 0.0f64;
    for k in 0..fp.t() {
        for l in k..fp.t() {
            let a = fp.covariant(k, move |g: &Frame<Dual>| Field::Tangent(l).of(g));
            let b = fp.covariant(l, move |g: &Frame<Dual>| Field::Tangent(k).of(g));
            eta_symmetric = eta_symmetric.max(f.eta_of(&add(&a, &b)).abs());
        }
    }

    let span: Vec<Vec<f64>> = rgens.iter().chain(&igens).map(|g| g.eval(f)).collect();
    let tangent_projection = f
        .tangent()
        .iter()
        .map(|t| member(t, &span, tol))
        .fold(0.0, f64::max);

    let xi_line = vec![f.xi.clone()];
    let complement: Vec<Vec<f64>> = (0..f.r())
        .filter(|i| !q.null_to_screen.contains(i))
        .map(|i| f.null[i].clone())
        .chain(
            (0..f.w())
                .filter(|a| !q.transversal_to_screen.contains(a))
                .map(|a| f.transversal[a].clone())
                .filter(|w| member(w, &xi_line, tol) >= tol),
        )
        .collect();
    let mut tspan: Vec<Vec<f64>> = igens.iter().map(|g| f.phi_of(&g.eval(f))).collect();
    tspan.extend(complement.iter().cloned());
    tspan.push(f.xi.clone());
    let transversal_projection = f
        .null
        .iter()
        .chain(&f.transversal)
        .map(|v| member(v, &tspan, tol))
        .fold(0.0, f64::max);
    let complement_invariance = complement
        .iter()
        .map(|v| member(&f.phi_of(v), &complement, tol))
        .fold(0.0, f64::max);
    CoscreenGeometry {
        radical_side: radical,
        image_side: image,
        consequents,
        eta_symmetric,
        tangent_projection,
        transversal_projection,
        complement_invariance,
    }
}
