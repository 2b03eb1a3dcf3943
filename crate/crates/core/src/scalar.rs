//! Scalar abstraction shared by real and complex evaluation modes.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Arithmetic needed to evaluate fields and residuals.
///
/// Implemented for `f64` (real mode) and [`Complex64`] (complex mode). Real
/// mode rejects operations that would leave the real line (logarithm of a
/// non-positive value, square root of a negative value, fractional power of a
/// negative base, complex constants) with a domain error instead of
/// producing NaN.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const IS_COMPLEX: bool;

    fn from_f64(v: f64) -> Self;
    /// `None` when the value is not representable (imaginary part in real mode).
    fn from_complex(c: Complex64) -> Option<Self>;
    fn to_complex(self) -> Complex64;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }

    /// Modulus.
    fn norm(self) -> f64;
    fn re(self) -> f64;
    fn im(self) -> f64;
    fn is_finite(self) -> bool;

    fn exp(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
    fn tanh(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;

    fn ln(self) -> Option<Self>;
    fn sqrt(self) -> Option<Self>;
    fn powf(self, p: f64) -> Option<Self>;
    fn powi(self, n: i32) -> Self;

    fn scale(self, k: f64) -> Self {
        self * Self::from_f64(k)
    }
}

impl Scalar for f64 {
    const IS_COMPLEX: bool = false;

    fn from_f64(v: f64) -> Self {
        v
    }
    fn from_complex(c: Complex64) -> Option<Self> {
        (c.im == 0.0).then_some(c.re)
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn norm(self) -> f64 {
        self.abs()
    }
    fn re(self) -> f64 {
        self
    }
    fn im(self) -> f64 {
        0.0
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    fn cosh(self) -> Self {
        f64::cosh(self)
    }
    fn tanh(self) -> Self {
        f64::tanh(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn ln(self) -> Option<Self> {
        (self > 0.0).then(|| f64::ln(self))
    }
    fn sqrt(self) -> Option<Self> {
        (self >= 0.0).then(|| f64::sqrt(self))
    }
    fn powf(self, p: f64) -> Option<Self> {
        if self < 0.0 && p.fract() != 0.0 {
            None
        } else {
            Some(f64::powf(self, p))
        }
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
}

impl Scalar for Complex64 {
    const IS_COMPLEX: bool = true;

    fn from_f64(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }
    fn from_complex(c: Complex64) -> Option<Self> {
        Some(c)
    }
    fn to_complex(self) -> Complex64 {
        self
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn im(self) -> f64 {
        self.im
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn sinh(self) -> Self {
        Complex64::sinh(self)
    }
    fn cosh(self) -> Self {
        Complex64::cosh(self)
    }
    fn tanh(self) -> Self {
        // Written through exp(∓2z) so large |Re z| does not produce inf/inf.
        let one = Complex64::new(1.0, 0.0);
        if self.re >= 0.0 {
            let e = (-2.0 * self).exp();
            (one - e) / (one + e)
        } else {
            let e = (2.0 * self).exp();
            (e - one) / (e + one)
        }
    }
    fn sin(self) -> Self {
        Complex64::sin(self)
    }
    fn cos(self) -> Self {
        Complex64::cos(self)
    }
    fn ln(self) -> Option<Self> {
        (self != Complex64::new(0.0, 0.0)).then(|| Complex64::ln(self))
    }
    fn sqrt(self) -> Option<Self> {
        Some(Complex64::sqrt(self))
    }
    fn powf(self, p: f64) -> Option<Self> {
        if self == Complex64::new(0.0, 0.0) {
            return Some(if p == 0.0 { Self::one() } else { Self::zero() });
        }
        // Integer exponents stay exact on the real axis.
        if p.fract() == 0.0 && p.abs() < i32::MAX as f64 {
            return Some(Complex64::powi(&self, p as i32));
        }
        Some(Complex64::powf(self, p))
    }
    fn powi(self, n: i32) -> Self {
        Complex64::powi(&self, n)
    }
}
