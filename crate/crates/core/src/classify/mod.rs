//! Pointwise classification of a lightlike submanifold.
//!
//! [`classify`] runs every test at one [`FramePoint`] and returns a
//! [`Classification`]. [`Classification::verdicts`] flattens it into named
//! booleans, [`Classification::residuals`] into named magnitudes.

mod distribution;
mod forms;
mod structure;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use distribution::{
    coscreen_geometry, invariant_screen, Consequents, CoscreenGeometry, DistributionCheck,
    Generator, Side,
};
pub use forms::{total_h, IrrotationalCheck, MeanCurvature, MinimalCheck, Witness};
pub use structure::{
    AscreenCheck, CoscreenCheck, QgcrCertificate, SigmaCertificate, XiDecomposition,
};

use crate::linalg::{membership_residual, norm};
use crate::submanifold::{FramePoint, GaussResiduals, SecondFundamental};
use crate::Tolerances;

/// Distance of `v` from `span(basis)`, relative for long vectors and
/// absolute for short ones so that round-off on a vanishing vector does not
/// count as a miss.
pub(crate) fn member(v: &[f64], basis: &[Vec<f64>], tol: f64) -> f64 {
    let n = norm(v);
    membership_residual(v, basis, tol) * n / n.max(1.0)
}

/// Verdicts that state identities or implications and so are expected to
/// hold on every input. Entries ending in `.` match by prefix.
pub const ASSERTED: &[&str] = &[
    "frame_orthogonality",
    "xi_reconstruction",
    "gauss.",
    "ascreen.",
    "coscreen.",
    "minimal.",
    "integrable.radical_side.agree",
    "integrable.image_side.agree",
    "integrable.radical_side.identity",
    "integrable.image_side.identity",
    "consequent.",
];

pub fn is_asserted(key: &str) -> bool {
    ASSERTED.iter().any(|p| {
        if p.ends_with('.') {
            key.starts_with(p)
        } else {
            key == *p
        }
    })
}

/// Everything computed at one point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub r: usize,
    pub s: usize,
    pub w: usize,
    pub frame_orthogonality: f64,
    pub gauss: BTreeMap<String, f64>,
    pub xi: XiDecomposition,
    /// Length of the transversal part of `ξ`.
    pub xi_transversal: f64,
    pub qgcr: QgcrCertificate,
    pub ascreen: AscreenCheck,
    pub coscreen: CoscreenCheck,
    pub irrotational: IrrotationalCheck,
    pub minimal: MinimalCheck,
    pub mean_curvature: MeanCurvature,
    pub total_h: f64,
    pub metric_defect: f64,
    pub invariant_screen: Option<DistributionCheck>,
    pub geometry: Option<CoscreenGeometry>,
    pub tolerances: Tolerances,
}

pub fn classify(
    fp: &FramePoint,
    sf: &SecondFundamental,
    gauss: &GaussResiduals,
    mu: f64,
    tol: &Tolerances,
) -> Classification {
    let f = &fp.frame;
    let (alg, der) = (tol.algebraic, tol.derived);
    let xi = XiDecomposition::new(f);
    let qgcr = QgcrCertificate::new(f, alg);
    let ascreen = AscreenCheck::new(f, &qgcr, &xi, alg);
    let coscreen = CoscreenCheck::new(f, &qgcr, &xi, alg);
    let minimal = MinimalCheck::new(fp, sf, der, tol.rank);
    let invariant = (qgcr.holds && !qgcr.invariant_screen.is_empty())
        .then(|| invariant_screen(fp, sf, &qgcr, mu, der));
    let geometry =
        (qgcr.holds && coscreen.holds).then(|| coscreen_geometry(fp, sf, &qgcr, mu, der));
    Classification {
        r: f.r(),
        s: f.s(),
        w: f.w(),
        frame_orthogonality: f.orthogonality().max(),
        gauss: gauss.residuals.clone(),
        xi_transversal: norm(&f.transversal_part(&f.xi)),
        irrotational: IrrotationalCheck::new(sf, der),
        mean_curvature: MeanCurvature::new(&minimal, f.r(), f.s()),
        total_h: total_h(sf),
        metric_defect: gauss.get("metric_defect"),
        xi,
        qgcr,
        ascreen,
        coscreen,
        minimal,
        invariant_screen: invariant,
        geometry,
        tolerances: *tol,
    }
}

impl Classification {
    pub fn metric_connection(&self) -> bool {
        self.metric_defect < self.tolerances.derived
    }

    pub fn verdicts(&self) -> BTreeMap<String, bool> {
        let t = self.tolerances;
        let (alg, der) = (t.algebraic, t.derived);
        let mut v = BTreeMap::new();
        let mut put = |k: &str, b: bool| {
            v.insert(k.to_string(), b);
        };
        put("frame_orthogonality", self.frame_orthogonality < alg);
        put("xi_reconstruction", self.xi.reconstruction < alg);
        for name in GaussResiduals::NAMES {
            put(
                &format!("gauss.{name}"),
                self.gauss.get(*name).copied().unwrap_or(0.0) < der,
            );
        }

        let q = &self.qgcr;
        let a = &self.ascreen;
        put("qgcr", q.holds);
        put("proper", q.proper);
        put("ascreen", a.holds);
        let asc = a.holds && q.holds;
        put("ascreen.xi_in_image_span", !asc || a.xi_membership < alg);
        put(
            "ascreen.sigma_exists",
            !(asc && q.proper) || !a.sigma.is_empty(),
        );
        put(
            "ascreen.image_dim",
            !asc || (a.image_dim >= 1 && (self.r != 3 || a.image_dim == 1)),
        );
        put(
            "ascreen.image_spans_agree",
            !asc || a.image_spans.map_or(true, |x| x < alg),
        );
        put("ascreen.phi_squares", a.square_identity < alg);

        put("coscreen", self.coscreen.holds);
        put(
            "coscreen.orthogonal_images",
            !(self.coscreen.holds && q.holds) || self.coscreen.image_orthogonality < alg,
        );
        put("gcr_note", self.xi_transversal < alg);

        let m = &self.minimal;
        put("irrotational", self.irrotational.holds);
        put("minimal", m.holds);
        put("minimal.shape_trace_identity", m.shape_trace_identity < der);
        put(
            "minimal.frame_order",
            m.reordered_trace_gap.is_some_and(|g| g < der),
        );
        put(
            "minimal.shape_criterion",
            !(self.irrotational.holds && self.metric_connection())
                || m.shape_criterion(der) == m.holds,
        );
        put("totally_geodesic", self.total_h < der);
        put("metric_connection", self.metric_connection());

        if let Some(d) = &self.invariant_screen {
            distribution_verdicts(d, der, &mut put);
        }
        if let Some(g) = &self.geometry {
            distribution_verdicts(&g.radical_side, der, &mut put);
            distribution_verdicts(&g.image_side, der, &mut put);
            let c = &g.consequents;
            put(
                "consequent.parallel",
                !c.parallel_hypothesis || c.parallel < der,
            );
            put(
                "consequent.auto_parallel",
                !c.auto_parallel_hypothesis || c.auto_parallel < der,
            );
            put(
                "consequent.auto_parallel_tangent",
                !c.auto_parallel_hypothesis || c.auto_parallel_tangent < der,
            );
            put("coscreen.eta_symmetric", g.eta_symmetric < der);
            put("coscreen.tangent_projection", g.tangent_projection < alg);
            put(
                "coscreen.transversal_projection",
                g.transversal_projection < alg,
            );
            put(
                "coscreen.complement_invariance",
                g.complement_invariance < alg,
            );
        }
        v
    }

    pub fn residuals(&self) -> BTreeMap<String, f64> {
        let mut v = BTreeMap::new();
        let mut put = |k: String, x: f64| {
            v.insert(k, x);
        };
        put("frame_orthogonality".into(), self.frame_orthogonality);
        put("xi_reconstruction".into(), self.xi.reconstruction);
        for (k, x) in &self.gauss {
            put(format!("gauss.{k}"), *x);
        }
        for (k, x) in &self.qgcr.residuals {
            put(format!("qgcr.{k}"), *x);
        }
        put("xi_screen_part".into(), self.xi.screen_norm);
        put("xi_transversal_part".into(), self.xi_transversal);
        put(
            "ascreen.square_identity".into(),
            self.ascreen.square_identity,
        );
        put("irrotational".into(), self.irrotational.residual);
        put("minimal.radical_part".into(), self.minimal.radical_part);
        put(
            "minimal.trace".into(),
            self.minimal.trace.iter().fold(0.0, |m, x| m.max(x.abs())),
        );
        put(
            "minimal.shape_trace_identity".into(),
            self.minimal.shape_trace_identity,
        );
        if let Some(g) = self.minimal.reordered_trace_gap {
            put("minimal.frame_order".into(), g);
        }
        put("totally_geodesic".into(), self.total_h);
        let ds = self.invariant_screen.iter().chain(
            self.geometry
                .iter()
                .flat_map(|g| [&g.radical_side, &g.image_side]),
        );
        for d in ds {
            let k = d.side.key();
            put(format!("integrable.{k}.bracket"), d.bracket_residual);
            if let Some(c) = d.criterion {
                put(format!("integrable.{k}.criterion"), c);
            }
            if let Some(c) = d.criterion_identity {
                put(format!("integrable.{k}.identity"), c);
            }
            put(format!("nearly_parallel.{k}"), d.nearly_parallel);
            put(format!("nearly_auto_parallel.{k}"), d.nearly_auto_parallel);
        }
        if let Some(g) = &self.geometry {
            put("consequent.parallel".into(), g.consequents.parallel);
            put(
                "consequent.auto_parallel".into(),
                g.consequents.auto_parallel,
            );
            put(
                "consequent.auto_parallel_tangent".into(),
                g.consequents.auto_parallel_tangent,
            );
            put("coscreen.eta_symmetric".into(), g.eta_symmetric);
            put("coscreen.tangent_projection".into(), g.tangent_projection);
            put(
                "coscreen.transversal_projection".into(),
                g.transversal_projection,
            );
            put(
                "coscreen.complement_invariance".into(),
                g.complement_invariance,
            );
        }
        v
    }
}

fn distribution_verdicts(d: &DistributionCheck, tol: f64, put: &mut impl FnMut(&str, bool)) {
    let k = d.side.key();
    let bracket = d.bracket_residual < tol;
    put(&format!("integrable.{k}"), bracket);
    if let Some(c) = d.criterion {
        let crit = c < tol;
        put(&format!("integrable.{k}.criterion"), crit);
        put(&format!("integrable.{k}.agree"), crit == bracket);
    }
    if let Some(c) = d.criterion_identity {
        put(&format!("integrable.{k}.identity"), c < tol);
    }
    put(&format!("nearly_parallel.{k}"), d.nearly_parallel < tol);
    put(
        &format!("nearly_auto_parallel.{k}"),
        d.nearly_auto_parallel < tol,
    );
}

#[cfg(test)]
pub(crate) mod fixture {
    use super::*;
    use crate::scenario::Scenario;

    /// Frame, forms and classification at `p`, or at the scenario's first
    /// sample point.
    pub fn at(text: &str, p: Option<&[f64]>) -> (FramePoint, SecondFundamental, Classification) {
        let scn = Scenario::parse(text).unwrap();
        let p = p
            .map(<[f64]>::to_vec)
            .unwrap_or_else(|| scn.samples.resolve(None, None)[0].clone());
        let fp = FramePoint::new(&scn.space, &scn.immersion, &p, &scn.tolerances).unwrap();
        let (sf, g) = SecondFundamental::compute(&fp);
        let c = classify(&fp, &sf, &g, scn.space.mu(), &scn.tolerances);
        (fp, sf, c)
    }
}
