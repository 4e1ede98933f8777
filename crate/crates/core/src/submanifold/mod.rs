//! Immersed submanifolds, their lightlike frames and the Gauss-Weingarten
//! apparatus.

mod frame;
mod gauss;

use serde::{Deserialize, Serialize};

pub use frame::{
    Decomposition, Field, Frame, FrameMode, FramePlan, FramePoint, OrthogonalityReport,
};
pub use gauss::{GaussResiduals, SecondFundamental};

use crate::error::{DomainContext, Error, Result};
use crate::expr::{Jet2, ScalarExpr, VectorExpr};
use crate::linalg::Mat;

/// How the declared frame relates to the parametrization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tangency {
    /// Declared fields must lie in the image of the Jacobian.
    #[default]
    Strict,
    /// Declared fields define the tangent distribution; the map only
    /// supplies base points.
    Distribution,
}

/// Frame fields written in ambient coordinates.
#[derive(Clone, Debug)]
pub struct DeclaredFrames {
    pub rad: Vec<VectorExpr>,
    pub screen: Vec<VectorExpr>,
    pub transversal: Option<Vec<VectorExpr>>,
}

/// A parametrized submanifold `p ↦ f(p)` of an ambient chart.
#[derive(Clone, Debug)]
pub struct Immersion {
    params: Vec<String>,
    map: Vec<ScalarExpr>,
    frames: Option<DeclaredFrames>,
    tangency: Tangency,
}

impl Immersion {
    pub fn new(
        params: Vec<String>,
        map: Vec<ScalarExpr>,
        frames: Option<DeclaredFrames>,
        tangency: Tangency,
    ) -> Result<Self> {
        if params.is_empty() {
            return Err(Error::scenario("immersion has no parameters"));
        }
        if tangency == Tangency::Distribution && frames.is_none() {
            return Err(Error::scenario(
                "distribution tangency needs declared rad and screen frames",
            ));
        }
        if let Some(f) = &frames {
            let n = map.len();
            let all = f
                .rad
                .iter()
                .chain(&f.screen)
                .chain(f.transversal.iter().flatten());
            if let Some(bad) = all.clone().find(|v| v.dim() != n) {
                return Err(Error::Dimension(format!(
                    "frame field '{}' has {} components, ambient has {n}",
                    bad.source(),
                    bad.dim()
                )));
            }
            if f.rad.is_empty() && f.screen.is_empty() {
                return Err(Error::scenario("declared frame has no tangent fields"));
            }
        }
        Ok(Self {
            params,
            map,
            frames,
            tangency,
        })
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.params.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self) -> &[ScalarExpr] {
        &self.map
    }

    pub fn declared(&self) -> Option<&DeclaredFrames> {
        self.frames.as_ref()
    }

    pub fn tangency(&self) -> Tangency {
        self.tangency
    }

    fn check_params(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "parameter point has {} entries, immersion has {} parameters",
                p.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Ambient image of the parameter point.
    pub fn point(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check_params(p)?;
        self.map
            .iter()
            .map(|f| f.value(p).at(|| format!("immersion at parameters {p:?}")))
            .collect()
    }

    /// 2-jets of every ambient coordinate of the map.
    pub fn jets(&self, p: &[f64]) -> Result<Vec<Jet2>> {
        self.check_params(p)?;
        let seeds = Jet2::seed(p);
        self.map
            .iter()
            .map(|f| {
                f.eval(&seeds)
                    .at(|| format!("immersion at parameters {p:?}"))
            })
            .collect()
    }

    pub fn jacobian(&self, p: &[f64]) -> Result<Mat<f64>> {
        let jets = self.jets(p)?;
        Ok(Mat::from_fn(jets.len(), self.dim(), |a, j| jets[a].grad[j]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn graph_jacobian_columns() {
        let params = names(&["u", "v"]);
        let map = ["u", "v", "u^2 + u*v"]
            .iter()
            .map(|s| parse(s, &params).unwrap())
            .collect();
        let imm = Immersion::new(params, map, None, Tangency::Strict).unwrap();
        let j = imm.jacobian(&[1.0, 2.0]).unwrap();
        assert_eq!(j.column(0), vec![1.0, 0.0, 4.0]);
        assert_eq!(j.column(1), vec![0.0, 1.0, 1.0]);
        assert!(imm.point(&[1.0]).is_err());
    }

    #[test]
    fn domain_errors_carry_the_point() {
        let params = names(&["u"]);
        let map = vec![parse("sqrt(u)", &params).unwrap()];
        let imm = Immersion::new(params, map, None, Tangency::Strict).unwrap();
        let err = imm.point(&[-1.0]).unwrap_err();
        assert!(err.to_string().contains("[-1.0]"), "{err}");
    }
}
