//! Scenario files: TOML tables `[ambient]`, `[immersion]`, `[frames]`,
//! `[samples]`, `[tolerances]` and `[expect]`.
//!
//! ```toml
//! name = "cylinder"
//!
//! [ambient]
//! builtin = "cosymplectic"
//! m = 1
//! q = 0
//!
//! [immersion]
//! params = ["u", "z"]
//! map = { x1 = "cos(u)", y1 = "sin(u)" }   # z defaults to the parameter z
//!
//! [samples]
//! points = [[0.3, 0.1]]
//! ```
//!
//! Map entries are keyed by ambient coordinate. A coordinate without an
//! entry takes the parameter of the same name. Vector fields use the basis
//! symbols `d<coord>`, e.g. `"dx4 + dy1"`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use toml::Spanned;

use crate::ambient::{sample_box, AmbientStructure};
use crate::error::{Error, Result};
use crate::expr::{self, VectorExpr};
use crate::submanifold::{DeclaredFrames, Immersion, Tangency};
use crate::Tolerances;

type Text = Spanned<String>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: Option<String>,
    description: Option<String>,
    ambient: RawAmbient,
    immersion: RawImmersion,
    frames: Option<RawFrames>,
    #[serde(default)]
    samples: RawSamples,
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default)]
    expect: BTreeMap<String, bool>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAmbient {
    builtin: Option<Spanned<String>>,
    m: Option<usize>,
    q: Option<usize>,
    mu: Option<f64>,
    coords: Option<Vec<String>>,
    metric: Option<Vec<Vec<Text>>>,
    reference: Option<Vec<Vec<Text>>>,
    phi: Option<Vec<Text>>,
    xi: Option<Text>,
    eta: Option<Text>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawImmersion {
    params: Spanned<Vec<String>>,
    map: Spanned<BTreeMap<String, Text>>,
    #[serde(default)]
    tangency: Tangency,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFrames {
    #[serde(default)]
    rad: Vec<Text>,
    #[serde(default)]
    screen: Vec<Text>,
    transversal: Option<Vec<Text>>,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSamples {
    #[serde(default)]
    points: Vec<Vec<f64>>,
    count: Option<usize>,
    seed: Option<u64>,
    bounds: Option<Spanned<Vec<(f64, f64)>>>,
}

/// Where to evaluate: explicit parameter points plus an optional seeded
/// draw from a box.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSpec {
    pub points: Vec<Vec<f64>>,
    pub count: usize,
    pub seed: u64,
    pub bounds: Option<Vec<(f64, f64)>>,
}

impl SampleSpec {
    /// Points to analyze. `count` replaces the random draw size when a box
    /// is given, and truncates the explicit list otherwise.
    pub fn resolve(&self, count: Option<usize>, seed: Option<u64>) -> Vec<Vec<f64>> {
        let seed = seed.unwrap_or(self.seed);
        match &self.bounds {
            Some(b) => {
                let mut pts = self.points.clone();
                pts.extend(sample_box(b, count.unwrap_or(self.count), seed));
                pts
            }
            None => {
                let n = count.unwrap_or(self.points.len()).min(self.points.len());
                self.points[..n].to_vec()
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub space: AmbientStructure,
    pub immersion: Immersion,
    pub samples: SampleSpec,
    pub tolerances: Tolerances,
    /// Verdicts the scenario asserts, beyond the default consistency suite.
    pub expect: BTreeMap<String, bool>,
}

struct Lines<'a>(&'a str);

impl Lines<'_> {
    fn line(&self, offset: usize) -> usize {
        self.0[..offset.min(self.0.len())].matches('\n').count() + 1
    }

    fn err<T>(&self, span: std::ops::Range<usize>, message: impl Into<String>) -> Result<T> {
        Err(Error::Scenario {
            line: Some(self.line(span.start)),
            message: message.into(),
        })
    }

    fn scalar(&self, t: &Text, vars: &[String], what: &str) -> Result<()> {
        match expr::parse(t.get_ref(), vars) {
            Ok(_) => Ok(()),
            Err(e) => self.err(t.span(), format!("{what} '{}': {e}", t.get_ref())),
        }
    }

    fn vector(&self, t: &Text, coords: &[String], what: &str) -> Result<VectorExpr> {
        expr::parse_vector(t.get_ref(), coords)
            .or_else(|e| self.err(t.span(), format!("{what} '{}': {e}", t.get_ref())))
    }
}

fn strings(v: &[Text]) -> Vec<String> {
    v.iter().map(|t| t.get_ref().clone()).collect()
}

fn grid(v: &[Vec<Text>]) -> Vec<Vec<String>> {
    v.iter().map(|r| strings(r)).collect()
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let fallback = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut s = Self::parse(&text)?;
        if s.name.is_empty() {
            s.name = fallback;
        }
        Ok(s)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let lines = Lines(text);
        let raw: RawScenario = toml::from_str(text).map_err(|e| Error::Scenario {
            line: e.span().map(|s| lines.line(s.start)),
            message: e.message().trim().to_string(),
        })?;
        let space = ambient(&lines, &raw.ambient)?;
        let coords = space.coords().to_vec();
        let imm = &raw.immersion;
        let params = imm.params.get_ref().clone();
        if params.is_empty() {
            return lines.err(imm.params.span(), "immersion needs at least one parameter");
        }
        for key in imm.map.get_ref().keys() {
            if !coords.contains(key) {
                return lines.err(
                    imm.map.span(),
                    format!("map entry '{key}' is not an ambient coordinate"),
                );
            }
        }
        let mut map = Vec::with_capacity(coords.len());
        for c in &coords {
            match imm.map.get_ref().get(c) {
                Some(t) => {
                    lines.scalar(t, &params, &format!("map entry {c}"))?;
                    map.push(expr::parse(t.get_ref(), &params).expect("checked"));
                }
                None if params.contains(c) => {
                    map.push(expr::parse(c, &params).expect("parameter name"));
                }
                None => {
                    return lines.err(
                        imm.map.span(),
                        format!("coordinate '{c}' has no map entry and is not a parameter"),
                    )
                }
            }
        }
        let frames = match &raw.frames {
            None => None,
            Some(f) => {
                let vecs = |list: &[Text], what: &str| -> Result<Vec<VectorExpr>> {
                    list.iter()
                        .map(|t| lines.vector(t, &coords, what))
                        .collect()
                };
                Some(DeclaredFrames {
                    rad: vecs(&f.rad, "radical field")?,
                    screen: vecs(&f.screen, "screen field")?,
                    transversal: f
                        .transversal
                        .as_deref()
                        .map(|t| vecs(t, "transversal field"))
                        .transpose()?,
                })
            }
        };
        let immersion = Immersion::new(params.clone(), map, frames, imm.tangency)?;

        let smp = &raw.samples;
        for (i, p) in smp.points.iter().enumerate() {
            if p.len() != params.len() {
                return Err(Error::scenario(format!(
                    "sample point {} has {} entries, the immersion has {} parameters",
                    i + 1,
                    p.len(),
                    params.len()
                )));
            }
        }
        if let Some(b) = &smp.bounds {
            if b.get_ref().len() != params.len() {
                return lines.err(
                    b.span(),
                    "sample bounds need one (lo, hi) pair per parameter",
                );
            }
            if b.get_ref().iter().any(|(lo, hi)| !(lo <= hi)) {
                return lines.err(b.span(), "sample bounds need lo <= hi");
            }
        }
        let samples = SampleSpec {
            points: smp.points.clone(),
            count: smp
                .count
                .unwrap_or(if smp.bounds.is_some() { 5 } else { 0 }),
            seed: smp.seed.unwrap_or(0),
            bounds: smp.bounds.as_ref().map(|b| b.get_ref().clone()),
        };
        if samples.points.is_empty() && samples.bounds.is_none() {
            return Err(Error::scenario("[samples] needs explicit points or bounds"));
        }
        Ok(Scenario {
            name: raw.name.clone().unwrap_or_default(),
            description: raw.description.clone().unwrap_or_default(),
            space,
            immersion,
            samples,
            tolerances: raw.tolerances,
            expect: raw.expect,
        })
    }
}

fn ambient(lines: &Lines, a: &RawAmbient) -> Result<AmbientStructure> {
    let builtin = a.builtin.as_ref();
    let space = match builtin.map(|b| b.get_ref().as_str()) {
        Some(kind @ ("cosymplectic" | "sasakian")) => {
            let b = builtin.expect("matched");
            let (Some(m), Some(q)) = (a.m, a.q) else {
                return lines.err(b.span(), format!("builtin '{kind}' needs m and q"));
            };
            if a.coords.is_some() || a.metric.is_some() || a.phi.is_some() {
                return lines.err(b.span(), "builtin ambients take only m, q and mu");
            }
            let s = if kind == "cosymplectic" {
                AmbientStructure::cosymplectic(m, q)
            } else {
                AmbientStructure::sasakian(m, q)
            };
            s.or_else(|e| lines.err(b.span(), e.to_string()))?
        }
        Some(other) => {
            let b = builtin.expect("matched");
            return lines.err(
                b.span(),
                format!("unknown builtin '{other}' (expected cosymplectic or sasakian)"),
            );
        }
        None => {
            let missing = |what: &str| Error::scenario(format!("custom ambient needs '{what}'"));
            let coords = a.coords.clone().ok_or_else(|| missing("coords"))?;
            let metric = a.metric.as_ref().ok_or_else(|| missing("metric"))?;
            let phi = a.phi.as_ref().ok_or_else(|| missing("phi"))?;
            let xi = a.xi.as_ref().ok_or_else(|| missing("xi"))?;
            let eta = a.eta.as_ref().ok_or_else(|| missing("eta"))?;
            for row in metric.iter().chain(a.reference.iter().flatten()) {
                for t in row {
                    lines.scalar(t, &coords, "metric entry")?;
                }
            }
            for t in phi {
                lines.vector(t, &coords, "phi image")?;
            }
            lines.vector(xi, &coords, "xi")?;
            lines.vector(eta, &coords, "eta")?;
            let reference = a.reference.as_ref().map(|r| grid(r));
            AmbientStructure::custom(
                coords,
                &grid(metric),
                &strings(phi),
                xi.get_ref(),
                eta.get_ref(),
                a.mu.unwrap_or(0.0),
                reference.as_deref(),
            )?
        }
    };
    Ok(match (builtin, a.mu) {
        (Some(_), Some(mu)) => space.with_mu(mu),
        _ => space,
    })
}

/// Bundled scenarios, keyed by the identifier used on the command line.
pub mod bundled {
    pub const MINIMAL_ASCREEN: &str = include_str!("../data/minimal_ascreen.scn");
    pub const ASCREEN_RANK_FOUR: &str = include_str!("../data/ascreen_rank_four.scn");
    pub const COSCREEN_SASAKIAN: &str = include_str!("../data/coscreen_sasakian.scn");
    pub const COSCREEN_COSYMPLECTIC: &str = include_str!("../data/coscreen_cosymplectic.scn");
    pub const NULL_RULED_SURFACE: &str = include_str!("../data/null_ruled_surface.scn");
    pub const CYLINDER: &str = include_str!("../data/cylinder.scn");
    pub const PLANE: &str = include_str!("../data/plane.scn");

    pub const ALL: &[(&str, &str)] = &[
        ("minimal_ascreen", MINIMAL_ASCREEN),
        ("ascreen_rank_four", ASCREEN_RANK_FOUR),
        ("coscreen_sasakian", COSCREEN_SASAKIAN),
        ("coscreen_cosymplectic", COSCREEN_COSYMPLECTIC),
        ("null_ruled_surface", NULL_RULED_SURFACE),
        ("cylinder", CYLINDER),
        ("plane", PLANE),
    ];
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
[ambient]
builtin = "cosymplectic"
m = 1
q = 0

[immersion]
params = ["u", "z"]
map = { x1 = "cos(u)", y1 = "sin(u)" }

[samples]
points = [[0.3, 0.1]]
"#;

    #[test]
    fn defaults_map_to_parameters() {
        let s = Scenario::parse(BASE).unwrap();
        assert_eq!(s.immersion.point(&[0.0, 2.0]).unwrap(), vec![1.0, 0.0, 2.0]);
        assert_eq!(s.tolerances, Tolerances::default());
        assert_eq!(s.samples.resolve(None, None), vec![vec![0.3, 0.1]]);
    }

    #[test]
    fn expression_errors_carry_lines() {
        let bad = BASE.replace("cos(u)", "cos(u) +* 1");
        match Scenario::parse(&bad).unwrap_err() {
            Error::Scenario { line, message } => {
                assert_eq!(line, Some(9));
                assert!(message.contains("map entry x1"), "{message}");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn toml_errors_carry_lines() {
        let bad = BASE.replace("q = 0", "q = ");
        match Scenario::parse(&bad).unwrap_err() {
            Error::Scenario { line, .. } => assert_eq!(line, Some(5)),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn missing_coordinates_are_rejected() {
        let bad = BASE.replace("params = [\"u\", \"z\"]", "params = [\"u\", \"v\"]");
        let err = Scenario::parse(&bad).unwrap_err().to_string();
        assert!(err.contains("coordinate 'z'"), "{err}");
    }

    #[test]
    fn box_sampling_is_seeded() {
        let s = Scenario::parse(&BASE.replace(
            "points = [[0.3, 0.1]]",
            "bounds = [[0.0, 1.0], [2.0, 3.0]]\ncount = 3\nseed = 4",
        ))
        .unwrap();
        let a = s.samples.resolve(None, None);
        assert_eq!(a.len(), 3);
        assert_eq!(a, s.samples.resolve(None, Some(4)));
        assert_ne!(a, s.samples.resolve(None, Some(5)));
        assert_eq!(s.samples.resolve(Some(7), None).len(), 7);
    }

    #[test]
    fn every_bundled_scenario_parses() {
        for (name, text) in bundled::ALL {
            Scenario::parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}
