//! Second-order truncated Taylor jets in `(x, t)`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::Scalar;

/// Value of a field together with the partial derivatives a parabolic
/// residual needs: `∂x`, `∂t`, `∂²x` and the mixed `∂x∂t`.
///
/// `∂²t` is not carried; nothing downstream needs it, and dropping it keeps
/// the product rule closed on these five slots.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2<S> {
    pub value: S,
    pub dx: S,
    pub dt: S,
    pub dxx: S,
    pub dxt: S,
}

impl<S: Scalar> Jet2<S> {
    pub fn constant(value: S) -> Self {
        let z = S::zero();
        Self { value, dx: z, dt: z, dxx: z, dxt: z }
    }

    /// The coordinate `x` seeded at `x0`.
    pub fn var_x(x0: f64) -> Self {
        Self { dx: S::one(), ..Self::constant(S::from_f64(x0)) }
    }

    /// The coordinate `t` seeded at `t0`.
    pub fn var_t(t0: f64) -> Self {
        Self { dt: S::one(), ..Self::constant(S::from_f64(t0)) }
    }

    /// Applies a scalar function given its value and first two derivatives
    /// at `self.value`.
    pub fn chain(self, f0: S, f1: S, f2: S) -> Self {
        Self {
            value: f0,
            dx: f1 * self.dx,
            dt: f1 * self.dt,
            dxx: f2 * self.dx * self.dx + f1 * self.dxx,
            dxt: f2 * self.dx * self.dt + f1 * self.dxt,
        }
    }

    pub fn scale(self, k: S) -> Self {
        Self {
            value: self.value * k,
            dx: self.dx * k,
            dt: self.dt * k,
            dxx: self.dxx * k,
            dxt: self.dxt * k,
        }
    }

    /// Multiplicative inverse; caller guarantees `value != 0`.
    pub fn recip(self) -> Self {
        let inv = S::one() / self.value;
        let inv2 = inv * inv;
        self.chain(inv, -inv2, S::from_f64(2.0) * inv2 * inv)
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    pub fn powi(self, n: i32) -> Self {
        match n {
            0 => Self::constant(S::one()),
            1 => self,
            2 => self * self,
            _ => {
                let nf = S::from_f64(n as f64);
                let pm2 = self.value.powi(n - 2);
                let pm1 = pm2 * self.value;
                self.chain(pm1 * self.value, nf * pm1, nf * S::from_f64((n - 1) as f64) * pm2)
            }
        }
    }

    pub fn max_norm(&self) -> f64 {
        [self.value, self.dx, self.dt, self.dxx, self.dxt]
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        [self.value, self.dx, self.dt, self.dxx, self.dxt].iter().all(|v| v.is_finite())
    }

    pub fn map<T: Scalar>(self, f: impl Fn(S) -> T) -> Jet2<T> {
        Jet2 { value: f(self.value), dx: f(self.dx), dt: f(self.dt), dxx: f(self.dxx), dxt: f(self.dxt) }
    }
}

impl<S: Scalar> Add for Jet2<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            value: self.value + o.value,
            dx: self.dx + o.dx,
            dt: self.dt + o.dt,
            dxx: self.dxx + o.dxx,
            dxt: self.dxt + o.dxt,
        }
    }
}

impl<S: Scalar> Sub for Jet2<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            value: self.value - o.value,
            dx: self.dx - o.dx,
            dt: self.dt - o.dt,
            dxx: self.dxx - o.dxx,
            dxt: self.dxt - o.dxt,
        }
    }
}

impl<S: Scalar> Neg for Jet2<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { value: -self.value, dx: -self.dx, dt: -self.dt, dxx: -self.dxx, dxt: -self.dxt }
    }
}

impl<S: Scalar> Mul for Jet2<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let two = S::from_f64(2.0);
        Self {
            value: self.value * o.value,
            dx: self.dx * o.value + self.value * o.dx,
            dt: self.dt * o.value + self.value * o.dt,
            dxx: self.dxx * o.value + two * self.dx * o.dx + self.value * o.dxx,
            dxt: self.dxt * o.value + self.dx * o.dt + self.dt * o.dx + self.value * o.dxt,
        }
    }
}

impl<S: Scalar> Div for Jet2<S> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule_is_exact_on_polynomials() {
        // f = x*t, g = x + t at (2, 3)
        let x = Jet2::<f64>::var_x(2.0);
        let t = Jet2::<f64>::var_t(3.0);
        let f = x * t;
        let g = x + t;
        let h = f * g; // x^2 t + x t^2
        assert_eq!(h.value, 4.0 * 3.0 + 2.0 * 9.0);
        assert_eq!(h.dx, 2.0 * 2.0 * 3.0 + 9.0);
        assert_eq!(h.dt, 4.0 + 2.0 * 2.0 * 3.0);
        assert_eq!(h.dxx, 2.0 * 3.0);
        assert_eq!(h.dxt, 2.0 * 2.0 + 2.0 * 3.0);
    }

    #[test]
    fn reciprocal_matches_quotient_rule() {
        let x = Jet2::<f64>::var_x(0.5);
        let r = (x * x + Jet2::constant(1.0)).recip();
        let d = 1.25_f64;
        assert!((r.value - 1.0 / d).abs() < 1e-15);
        assert!((r.dx - (-2.0 * 0.5 / (d * d))).abs() < 1e-15);
        // d2/dx2 (1+x^2)^-1 = (6x^2 - 2)/(1+x^2)^3
        assert!((r.dxx - (6.0 * 0.25 - 2.0) / (d * d * d)).abs() < 1e-14);
    }

    #[test]
    fn powi_agrees_with_repeated_products() {
        let x = Jet2::<f64>::var_x(1.3) * Jet2::var_t(0.7);
        let p = x.powi(3);
        let q = x * x * x;
        for (a, b) in [(p.value, q.value), (p.dx, q.dx), (p.dt, q.dt), (p.dxx, q.dxx), (p.dxt, q.dxt)] {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
