//! Minimal forward-mode dual scalar.
//!
//! The static beam solver needs Jacobian entries of a collocation residual
//! whose stencil terms scale like 1/dlt^4. Finite differences of such terms
//! lose up to twelve significant digits to subtractive cancellation, which
//! stalls Newton at small loads, so the residual is written generically over
//! [`Num`] and differentiated exactly with [`Dual`] instead.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Scalar abstraction: implemented by `f64` (plain evaluation) and
/// [`Dual`] (evaluation plus one directional derivative).
pub(crate) trait Num:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
{
    fn from_f64(x: f64) -> Self;
    /// Real part (the underlying evaluation point).
    fn re(self) -> f64;
}

impl Num for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn re(self) -> f64 {
        self
    }
}

/// Value plus derivative with respect to one seed variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dual {
    pub re: f64,
    pub du: f64,
}

impl Dual {
    pub const fn new(re: f64, du: f64) -> Self {
        Dual { re, du }
    }

    /// Constant: derivative zero.
    pub const fn con(re: f64) -> Self {
        Dual { re, du: 0.0 }
    }

    /// Seed variable: derivative one.
    pub const fn var(re: f64) -> Self {
        Dual { re, du: 1.0 }
    }
}

impl Num for Dual {
    fn from_f64(x: f64) -> Self {
        Dual::con(x)
    }
    fn re(self) -> f64 {
        self.re
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, rhs: Dual) -> Dual {
        Dual::new(self.re + rhs.re, self.du + rhs.du)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, rhs: Dual) -> Dual {
        Dual::new(self.re - rhs.re, self.du - rhs.du)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, rhs: Dual) -> Dual {
        Dual::new(self.re * rhs.re, self.re * rhs.du + self.du * rhs.re)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, rhs: Dual) -> Dual {
        let inv = 1.0 / rhs.re;
        Dual::new(self.re * inv, (self.du - self.re * inv * rhs.du) * inv)
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.re, -self.du)
    }
}

impl Mul<f64> for Dual {
    type Output = Dual;
    fn mul(self, rhs: f64) -> Dual {
        Dual::new(self.re * rhs, self.du * rhs)
    }
}
