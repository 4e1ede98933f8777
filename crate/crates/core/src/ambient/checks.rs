//! Numerical verification of the almost contact identities.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::AmbientStructure;
use crate::error::{Error, Result};
use crate::linalg;

/// Max residual per identity over the sampled points, with pass flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub points: usize,
    pub seed: u64,
    pub mu: f64,
    pub tol: f64,
    pub residuals: BTreeMap<String, f64>,
    pub verdicts: BTreeMap<String, bool>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.verdicts.values().all(|v| *v)
    }

    /// Name of the first failing identity, if any.
    pub fn first_failure(&self) -> Option<&str> {
        self.verdicts
            .iter()
            .find(|(_, ok)| !**ok)
            .map(|(k, _)| k.as_str())
    }
}

/// Identities every admissible structure must satisfy.
pub const ALMOST_CONTACT: &[&str] = &[
    "metric_symmetric",
    "eta_xi",
    "phi_xi",
    "eta_phi",
    "phi_squared",
    "compatible_metric",
];

/// Identities of the symmetrized `∇̄φ̄` condition and of `H̄`.
pub const NEARLY_MU_SASAKIAN: &[&str] = &[
    "nearly_mu_sasakian",
    "h_anticommutes_phi",
    "h_xi",
    "eta_h",
    "h_skew",
];

pub fn random_vector(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

/// `count` points drawn uniformly from an axis-aligned box.
pub fn sample_box(bounds: &[(f64, f64)], count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            bounds
                .iter()
                .map(|&(lo, hi)| if lo == hi { lo } else { rng.gen_range(lo..hi) })
                .collect()
        })
        .collect()
}

struct Worst(BTreeMap<String, (f64, Vec<f64>)>);

impl Worst {
    fn record(&mut self, name: &str, value: f64, x: &[f64]) {
        let slot = self
            .0
            .entry(name.to_string())
            .or_insert_with(|| (0.0, x.to_vec()));
        if value > slot.0 || value.is_nan() {
            *slot = (value, x.to_vec());
        }
    }
}

fn vec_res(v: &[f64]) -> f64 {
    linalg::max_abs(v)
}

impl AmbientStructure {
    fn almost_contact_at(&self, x: &[f64], rng: &mut ChaCha8Rng, out: &mut Worst) -> Result<()> {
        let n = self.dim();
        let g = self.metric_at(x)?;
        let phi = self.phi_at(x)?;
        let xi = self.xi_at(x)?;
        let eta = self.eta_at(x)?;
        let mut asym = 0.0f64;
        for a in 0..n {
            for b in a + 1..n {
                let ab = self.metric[a][b].value(x);
                let ba = self.metric[b][a].value(x);
                if let (Ok(ab), Ok(ba)) = (ab, ba) {
                    asym = asym.max((ab - ba).abs());
                }
            }
        }
        out.record("metric_symmetric", asym, x);
        out.record("eta_xi", (linalg::dot(&eta, &xi) - 1.0).abs(), x);
        out.record("phi_xi", vec_res(&phi.mul_vec(&xi)), x);
        out.record("eta_phi", vec_res(&phi.transpose().mul_vec(&eta)), x);
        let phi2 = phi.matmul(&phi);
        let mut defect = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let id = if i == j { 1.0 } else { 0.0 };
                defect = defect.max((phi2[(i, j)] + id - xi[i] * eta[j]).abs());
            }
        }
        out.record("phi_squared", defect, x);
        let u = random_vector(rng, n);
        let v = random_vector(rng, n);
        let lhs = g.form(&phi.mul_vec(&u), &phi.mul_vec(&v));
        let rhs = g.form(&u, &v) - linalg::dot(&eta, &u) * linalg::dot(&eta, &v);
        out.record("compatible_metric", (lhs - rhs).abs(), x);
        Ok(())
    }

    fn nearly_at(&self, x: &[f64], rng: &mut ChaCha8Rng, out: &mut Worst) -> Result<()> {
        let n = self.dim();
        let g = self.metric_at(x)?;
        let phi = self.phi_at(x)?;
        let xi = self.xi_at(x)?;
        let eta = self.eta_at(x)?;
        let gamma = self.christoffel(x)?;
        let u = random_vector(rng, n);
        let v = random_vector(rng, n);
        let du = self.nabla_phi(x, &u, &gamma)?;
        let dv = self.nabla_phi(x, &v, &gamma)?;
        let lhs = linalg::add(&du.mul_vec(&v), &dv.mul_vec(&u));
        let guv = g.form(&u, &v);
        let (eu, ev) = (linalg::dot(&eta, &u), linalg::dot(&eta, &v));
        let rhs: Vec<f64> = (0..n)
            .map(|k| self.mu * (2.0 * guv * xi[k] - ev * u[k] - eu * v[k]))
            .collect();
        out.record("nearly_mu_sasakian", vec_res(&linalg::sub(&lhs, &rhs)), x);

        let hu = self.h_tensor_with(x, &u, &gamma)?;
        let hv = self.h_tensor_with(x, &v, &gamma)?;
        let h_phi_u = self.h_tensor_with(x, &phi.mul_vec(&u), &gamma)?;
        out.record(
            "h_anticommutes_phi",
            vec_res(&linalg::add(&h_phi_u, &phi.mul_vec(&hu))),
            x,
        );
        out.record("h_xi", vec_res(&self.h_tensor_with(x, &xi, &gamma)?), x);
        out.record("eta_h", linalg::dot(&eta, &hu).abs(), x);
        out.record("h_skew", (g.form(&hu, &v) + g.form(&u, &hv)).abs(), x);
        out.record("h_norm", vec_res(&hu), x);
        Ok(())
    }

    /// Run the identity suites at the given points with seeded random vectors.
    pub fn check_structure(
        &self,
        points: &[Vec<f64>],
        seed: u64,
        tol: f64,
    ) -> Result<StructureReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = Worst(BTreeMap::new());
        for x in points {
            self.check_point(x)?;
            self.almost_contact_at(x, &mut rng, &mut worst)?;
            self.nearly_at(x, &mut rng, &mut worst)?;
        }
        let residuals: BTreeMap<String, f64> =
            worst.0.into_iter().map(|(k, (v, _))| (k, v)).collect();
        let verdicts = ALMOST_CONTACT
            .iter()
            .chain(NEARLY_MU_SASAKIAN)
            .map(|k| (k.to_string(), residuals.get(*k).is_some_and(|r| *r < tol)))
            .collect();
        Ok(StructureReport {
            points: points.len(),
            seed,
            mu: self.mu,
            tol,
            residuals,
            verdicts,
        })
    }

    /// Reject structures failing the almost contact identities at `points`.
    pub fn admit(&self, points: &[Vec<f64>], seed: u64, tol: f64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for x in points {
            self.check_point(x)?;
            let mut worst = Worst(BTreeMap::new());
            self.almost_contact_at(x, &mut rng, &mut worst)?;
            for name in ALMOST_CONTACT {
                let (r, _) = &worst.0[*name];
                if !(*r < tol) {
                    return Err(Error::Structure {
                        identity: name.to_string(),
                        residual: *r,
                        point: x.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "ambient point has {} coordinates, expected {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(())
    }
}
