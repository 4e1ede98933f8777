//! Second-order forward-mode jets.

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Value, gradient and Hessian of a scalar at a point.
///
/// The Hessian is stored row-major as a full `n × n` matrix. Every operation
/// writes the upper triangle and mirrors it, so `hess[i][j] == hess[j][i]`
/// holds bit-for-bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jet2 {
    pub value: f64,
    pub grad: Vec<f64>,
    pub hess: Vec<f64>,
}

impl Jet2 {
    pub fn constant(value: f64, n: usize) -> Self {
        Self {
            value,
            grad: vec![0.0; n],
            hess: vec![0.0; n * n],
        }
    }

    /// Seed variable `index` of `n` at `value`.
    pub fn variable(value: f64, index: usize, n: usize) -> Self {
        let mut j = Self::constant(value, n);
        j.grad[index] = 1.0;
        j
    }

    /// Seed every coordinate of `point`.
    pub fn seed(point: &[f64]) -> Vec<Jet2> {
        let n = point.len();
        point
            .iter()
            .enumerate()
            .map(|(i, &v)| Jet2::variable(v, i, n))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.grad.len()
    }

    pub fn hess_at(&self, i: usize, j: usize) -> f64 {
        self.hess[i * self.dim() + j]
    }

    /// Apply a scalar function with derivatives `f0, f1, f2` at `self.value`.
    fn chain(&self, f0: f64, f1: f64, f2: f64) -> Self {
        let n = self.dim();
        let grad = self.grad.iter().map(|g| f1 * g).collect();
        let mut hess = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f1 * self.hess[i * n + j] + f2 * self.grad[i] * self.grad[j];
                hess[i * n + j] = v;
                hess[j * n + i] = v;
            }
        }
        Self {
            value: f0,
            grad,
            hess,
        }
    }

    fn combine(&self, other: &Self, a: f64, b: f64) -> Self {
        Self {
            value: a * self.value + b * other.value,
            grad: self
                .grad
                .iter()
                .zip(&other.grad)
                .map(|(x, y)| a * x + b * y)
                .collect(),
            hess: self
                .hess
                .iter()
                .zip(&other.hess)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }

    fn product(&self, other: &Self) -> Self {
        let n = self.dim();
        let grad = self
            .grad
            .iter()
            .zip(&other.grad)
            .map(|(ga, gb)| self.value * gb + other.value * ga)
            .collect();
        let mut hess = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = self.value * other.hess[i * n + j]
                    + other.value * self.hess[i * n + j]
                    + self.grad[i] * other.grad[j]
                    + other.grad[i] * self.grad[j];
                hess[i * n + j] = v;
                hess[j * n + i] = v;
            }
        }
        Self {
            value: self.value * other.value,
            grad,
            hess,
        }
    }

    fn recip(&self) -> Self {
        let v = self.value;
        self.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        self.combine(&rhs, 1.0, 1.0)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        self.combine(&rhs, 1.0, -1.0)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        self.product(&rhs)
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, rhs: Jet2) -> Jet2 {
        self.product(&rhs.recip())
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Scalar for Jet2 {
    const HAS_DERIVATIVES: bool = true;

    fn lift(&self, c: f64) -> Self {
        Jet2::constant(c, self.dim())
    }
    fn re(&self) -> f64 {
        self.value
    }
    fn scale(&self, c: f64) -> Self {
        Self {
            value: self.value * c,
            grad: self.grad.iter().map(|g| g * c).collect(),
            hess: self.hess.iter().map(|h| h * c).collect(),
        }
    }
    fn sin(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }
    fn cos(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }
    fn sinh(&self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.chain(s, c, s)
    }
    fn cosh(&self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.chain(c, s, c)
    }
    fn sqrt(&self) -> Self {
        let s = self.value.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.value))
    }
    fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return self.lift(1.0);
        }
        let v = self.value;
        let nf = f64::from(n);
        let f1 = nf * v.powi(n - 1);
        let f2 = if n == 1 {
            0.0
        } else {
            nf * (nf - 1.0) * v.powi(n - 2)
        };
        self.chain(v.powi(n), f1, f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_two_variables() {
        let v = Jet2::seed(&[2.0, 3.0]);
        let p = v[0].clone() * v[1].clone();
        assert_eq!(p.value, 6.0);
        assert_eq!(p.grad, vec![3.0, 2.0]);
        assert_eq!(p.hess, vec![0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn powi_matches_repeated_product() {
        let v = Jet2::seed(&[1.3, -0.4]);
        let x = v[0].clone() + v[1].clone();
        let cube = x.clone() * x.clone() * x.clone();
        let p = x.powi(3);
        assert!((p.value - cube.value).abs() < 1e-14);
        for (a, b) in p.hess.iter().zip(&cube.hess) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
