//! Scalar abstraction shared by plain floats, directional duals and 2-jets.
//!
//! Everything that has to be differentiated (expression evaluation, frame
//! construction) is written once against [`Scalar`] and instantiated with
//! `f64` for values, [`Dual`] for a single directional derivative and
//! [`Jet2`](crate::expr::Jet2) for full gradients and Hessians.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Scalar:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whether the type carries derivative information. Used to reject
    /// points where a value exists but a derivative does not (`sqrt(0)`).
    const HAS_DERIVATIVES: bool;

    /// A constant with the same derivative shape as `self`.
    fn lift(&self, c: f64) -> Self;

    /// The real (value) part.
    fn re(&self) -> f64;

    fn scale(&self, c: f64) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn sinh(&self) -> Self;
    fn cosh(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn powi(&self, n: i32) -> Self;

    fn zero_like(&self) -> Self {
        self.lift(0.0)
    }

    fn one_like(&self) -> Self {
        self.lift(1.0)
    }

    fn abs_re(&self) -> f64 {
        self.re().abs()
    }
}

impl Scalar for f64 {
    const HAS_DERIVATIVES: bool = false;

    fn lift(&self, c: f64) -> Self {
        c
    }
    fn re(&self) -> f64 {
        *self
    }
    fn scale(&self, c: f64) -> Self {
        self * c
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn sinh(&self) -> Self {
        f64::sinh(*self)
    }
    fn cosh(&self) -> Self {
        f64::cosh(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
}

/// First-order forward-mode dual number `re + eps·ε` with `ε² = 0`.
///
/// Carries one directional derivative; frame fields are pushed through the
/// frame construction once per tangent direction.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Dual {
    pub re: f64,
    pub eps: f64,
}

impl Dual {
    pub const fn new(re: f64, eps: f64) -> Self {
        Self { re, eps }
    }

    pub const fn constant(re: f64) -> Self {
        Self { re, eps: 0.0 }
    }

    fn chain(self, f0: f64, f1: f64) -> Self {
        Self::new(f0, f1 * self.eps)
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, rhs: Dual) -> Dual {
        Dual::new(self.re + rhs.re, self.eps + rhs.eps)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, rhs: Dual) -> Dual {
        Dual::new(self.re - rhs.re, self.eps - rhs.eps)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, rhs: Dual) -> Dual {
        Dual::new(self.re * rhs.re, self.re * rhs.eps + self.eps * rhs.re)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, rhs: Dual) -> Dual {
        let inv = 1.0 / rhs.re;
        Dual::new(
            self.re * inv,
            (self.eps * rhs.re - self.re * rhs.eps) * inv * inv,
        )
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.re, -self.eps)
    }
}

impl Scalar for Dual {
    const HAS_DERIVATIVES: bool = true;

    fn lift(&self, c: f64) -> Self {
        Dual::constant(c)
    }
    fn re(&self) -> f64 {
        self.re
    }
    fn scale(&self, c: f64) -> Self {
        Dual::new(self.re * c, self.eps * c)
    }
    fn sin(&self) -> Self {
        self.chain(self.re.sin(), self.re.cos())
    }
    fn cos(&self) -> Self {
        self.chain(self.re.cos(), -self.re.sin())
    }
    fn sinh(&self) -> Self {
        self.chain(self.re.sinh(), self.re.cosh())
    }
    fn cosh(&self) -> Self {
        self.chain(self.re.cosh(), self.re.sinh())
    }
    fn sqrt(&self) -> Self {
        let s = self.re.sqrt();
        self.chain(s, 0.5 / s)
    }
    fn powi(&self, n: i32) -> Self {
        match n {
            0 => Dual::constant(1.0),
            _ => self.chain(self.re.powi(n), f64::from(n) * self.re.powi(n - 1)),
        }
    }
}

/// Split a dual vector into its value and derivative parts.
pub fn split_duals(v: &[Dual]) -> (Vec<f64>, Vec<f64>) {
    (
        v.iter().map(|d| d.re).collect(),
        v.iter().map(|d| d.eps).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_product_and_quotient_rules() {
        let a = Dual::new(2.0, 1.0);
        let b = Dual::new(3.0, -2.0);
        assert_eq!((a * b).eps, 2.0 * -2.0 + 1.0 * 3.0);
        let q = a / b;
        assert!((q.eps - (1.0 * 3.0 - 2.0 * -2.0) / 9.0).abs() < 1e-15);
    }

    #[test]
    fn dual_powi_zero_is_constant() {
        let a = Dual::new(0.0, 1.0);
        assert_eq!(a.powi(0), Dual::constant(1.0));
        assert_eq!(a.powi(2).eps, 0.0);
    }
}
