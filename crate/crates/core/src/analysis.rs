//! End-to-end analysis of a scenario: admission, frames, forms and
//! classification at every sample point, then aggregation into a
//! [`Report`].

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::ambient::{AmbientKind, AmbientStructure};
use crate::classify::{classify, is_asserted, Classification};
use crate::error::{Error, Result};
use crate::report::{PointReport, Report, ScenarioSummary, SCHEMA};
use crate::scenario::Scenario;
use crate::submanifold::{FramePoint, SecondFundamental};

/// Command-line style overrides of the scenario's own settings.
#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

pub fn ambient_label(space: &AmbientStructure) -> String {
    match space.kind() {
        AmbientKind::Cosymplectic { m, q } => format!("cosymplectic(m = {m}, q = {q})"),
        AmbientKind::Sasakian { m, q } => format!("sasakian(m = {m}, q = {q})"),
        AmbientKind::Custom => "custom".into(),
    }
}

/// Frame, forms and classification at one parameter point.
pub fn analyze_point(scn: &Scenario, params: &[f64], opts: &Options) -> Result<Classification> {
    let tol = scn.tolerances.with_override(opts.tol);
    let fp = FramePoint::new(&scn.space, &scn.immersion, params, &tol)?;
    let (sf, gauss) = SecondFundamental::compute(&fp);
    Ok(classify(&fp, &sf, &gauss, scn.space.mu(), &tol))
}

pub fn analyze(scn: &Scenario, opts: &Options) -> Result<Report> {
    let tol = scn.tolerances.with_override(opts.tol);
    let seed = opts.seed.unwrap_or(scn.samples.seed);
    let params = scn.samples.resolve(opts.samples, opts.seed);
    if params.is_empty() {
        return Err(Error::scenario("no sample points to analyze"));
    }
    let points: Vec<Vec<f64>> = params
        .iter()
        .map(|p| scn.immersion.point(p))
        .collect::<Result<_>>()?;
    scn.space.admit(&points, seed, tol.algebraic)?;

    let results: Vec<Classification> = params
        .par_iter()
        .map(|p| analyze_point(scn, p, opts))
        .collect::<Result<_>>()?;

    let r0 = results[0].r;
    if let Some((i, c)) = results.iter().enumerate().find(|(_, c)| c.r != r0) {
        return Err(Error::Rank(format!(
            "radical rank {} at parameters {:?} differs from rank {r0} at {:?}",
            c.r, params[i], params[0]
        )));
    }

    let mut verdicts: BTreeMap<String, bool> = BTreeMap::new();
    let mut residuals: BTreeMap<String, f64> = BTreeMap::new();
    let mut reports = Vec::with_capacity(results.len());
    for ((p, x), c) in params.into_iter().zip(points).zip(results) {
        let pv = c.verdicts();
        let pr = c.residuals();
        for (k, v) in &pv {
            *verdicts.entry(k.clone()).or_insert(true) &= *v;
        }
        for (k, v) in &pr {
            let e = residuals.entry(k.clone()).or_insert(0.0);
            *e = e.max(*v);
        }
        reports.push(PointReport {
            params: p,
            point: x,
            verdicts: pv,
            residuals: pr,
            classification: c,
        });
    }

    let mut requested: BTreeMap<String, bool> = verdicts
        .keys()
        .filter(|k| is_asserted(k))
        .map(|k| (k.clone(), true))
        .collect();
    requested.extend(scn.expect.iter().map(|(k, v)| (k.clone(), *v)));
    let failures = requested
        .iter()
        .filter_map(|(k, want)| match verdicts.get(k) {
            Some(got) if got == want => None,
            Some(got) => Some(format!("{k}: expected {want}, got {got}")),
            None => Some(format!(
                "{k}: expected {want}, not computed for this scenario"
            )),
        })
        .collect();

    Ok(Report {
        schema: SCHEMA.into(),
        scenario: ScenarioSummary {
            name: scn.name.clone(),
            description: scn.description.clone(),
            ambient: ambient_label(&scn.space),
            mu: scn.space.mu(),
            dim: scn.immersion.dim(),
            ambient_dim: scn.space.dim(),
            seed,
            tolerances: tol,
            requested,
            failures,
        },
        points: reports,
        verdicts,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::exit;
    use crate::scenario::bundled;

    #[test]
    fn aggregation_is_conjunction_and_maximum() {
        let scn = Scenario::parse(bundled::CYLINDER).unwrap();
        let r = analyze(&scn, &Options::default()).unwrap();
        for (k, v) in &r.verdicts {
            let all = r
                .points
                .iter()
                .filter_map(|p| p.verdicts.get(k))
                .all(|x| *x);
            assert_eq!(*v, all, "{k}");
        }
        for (k, v) in &r.residuals {
            let worst = r
                .points
                .iter()
                .filter_map(|p| p.residuals.get(k))
                .fold(0.0, |a: f64, b| a.max(*b));
            assert_eq!(*v, worst, "{k}");
        }
        assert!(r.passed());
    }

    #[test]
    fn requested_verdicts_include_asserted_identities() {
        let scn = Scenario::parse(bundled::PLANE).unwrap();
        let r = analyze(&scn, &Options::default()).unwrap();
        let req = &r.scenario.requested;
        assert_eq!(req.get("frame_orthogonality"), Some(&true));
        assert_eq!(req.get("gauss.torsion"), Some(&true));
        assert_eq!(req.get("totally_geodesic"), Some(&true));
        assert!(!req.contains_key("qgcr"));
    }

    #[test]
    fn options_override_samples_and_seed() {
        let scn = Scenario::parse(bundled::CYLINDER).unwrap();
        let r = analyze(
            &scn,
            &Options {
                samples: Some(2),
                seed: Some(5),
                tol: Some(1e-4),
            },
        )
        .unwrap();
        assert_eq!(r.points.len(), 2);
        assert_eq!(r.scenario.seed, 5);
        assert_eq!(r.scenario.tolerances.derived, 1e-4);
        assert_eq!(r.scenario.ambient, "cosymplectic(m = 1, q = 0)");
    }

    #[test]
    fn empty_sample_set_is_an_input_error() {
        let text = bundled::PLANE.replace("count = 3", "count = 0");
        let scn = Scenario::parse(&text).unwrap();
        let e = analyze(&scn, &Options::default()).unwrap_err();
        assert_eq!(e.exit_code(), exit::INPUT);
    }

    #[test]
    fn changing_radical_rank_is_reported() {
        let text = bundled::NULL_RULED_SURFACE
            .replace(
                "bounds = [[1.5, 3.0], [-3.0, 3.0]]",
                "points = [[2.0, 0.3], [1.0, 0.3]]",
            )
            .replace("count = 5\n", "")
            .replace("seed = 11\n", "");
        let scn = Scenario::parse(&text).unwrap();
        let e = analyze(&scn, &Options::default()).unwrap_err();
        assert!(matches!(e, Error::Rank(_)), "{e}");
        assert_eq!(e.exit_code(), exit::RANK);
    }
}
