//! Scalar abstraction used to evaluate level sets and exact solutions either
//! as plain `f64` or as second-order truncated Taylor series.
//!
//! A [`Taylor2`] carries `v + d1 t + d2 t^2`; seeding one coordinate with
//! `d1 = 1` and pushing it through a formula yields the first derivative
//! (`d1`) and half the second derivative (`d2`) along that axis. This is how
//! gradients and Laplacians of manufactured solutions are derived from the
//! solution formula itself.

use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
{
    fn cst(c: f64) -> Self;
    fn value(&self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn exp(self) -> Self;
    fn sqrt(self) -> Self;
    fn atan(self) -> Self;
    fn atan2(self, x: Self) -> Self;

    fn powi(self, n: u32) -> Self {
        let mut acc = Self::cst(1.0);
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }

    /// Pick the operand with the smaller value (derivative of the active branch).
    fn min(self, other: Self) -> Self {
        if other.value() < self.value() {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    fn cst(c: f64) -> Self {
        c
    }
    fn value(&self) -> f64 {
        *self
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn atan(self) -> Self {
        f64::atan(self)
    }
    fn atan2(self, x: Self) -> Self {
        f64::atan2(self, x)
    }
}

/// Truncated Taylor number `v + d1 t + d2 t^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Taylor2 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Taylor2 {
    pub fn variable(v: f64) -> Self {
        Taylor2 {
            v,
            d1: 1.0,
            d2: 0.0,
        }
    }

    /// Second derivative with respect to the seeded variable.
    pub fn second_derivative(&self) -> f64 {
        2.0 * self.d2
    }

    // f(a) given f(a0), f'(a0), f''(a0)
    fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        Taylor2 {
            v: f0,
            d1: f1 * self.d1,
            d2: f1 * self.d2 + 0.5 * f2 * self.d1 * self.d1,
        }
    }
}

impl Add for Taylor2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Taylor2 {
            v: self.v + o.v,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
        }
    }
}

impl Sub for Taylor2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Taylor2 {
            v: self.v - o.v,
            d1: self.d1 - o.d1,
            d2: self.d2 - o.d2,
        }
    }
}

impl Mul for Taylor2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Taylor2 {
            v: self.v * o.v,
            d1: self.v * o.d1 + self.d1 * o.v,
            d2: self.v * o.d2 + self.d1 * o.d1 + self.d2 * o.v,
        }
    }
}

impl Div for Taylor2 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = o.chain(1.0 / o.v, -1.0 / (o.v * o.v), 2.0 / (o.v * o.v * o.v));
        self * inv
    }
}

impl Neg for Taylor2 {
    type Output = Self;
    fn neg(self) -> Self {
        Taylor2 {
            v: -self.v,
            d1: -self.d1,
            d2: -self.d2,
        }
    }
}

impl Add<f64> for Taylor2 {
    type Output = Self;
    fn add(self, c: f64) -> Self {
        Taylor2 {
            v: self.v + c,
            ..self
        }
    }
}

impl Sub<f64> for Taylor2 {
    type Output = Self;
    fn sub(self, c: f64) -> Self {
        Taylor2 {
            v: self.v - c,
            ..self
        }
    }
}

impl Mul<f64> for Taylor2 {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        Taylor2 {
            v: self.v * c,
            d1: self.d1 * c,
            d2: self.d2 * c,
        }
    }
}

impl Real for Taylor2 {
    fn cst(c: f64) -> Self {
        Taylor2 {
            v: c,
            d1: 0.0,
            d2: 0.0,
        }
    }
    fn value(&self) -> f64 {
        self.v
    }
    fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }
    fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }
    fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        self.chain(r, 0.5 / r, -0.25 / (r * self.v))
    }
    fn atan(self) -> Self {
        let q = 1.0 + self.v * self.v;
        self.chain(self.v.atan(), 1.0 / q, -2.0 * self.v / (q * q))
    }
    fn atan2(self, x: Self) -> Self {
        // angle(x, y) = angle(x0, y0) + atan(cross / dot), smooth at t = 0
        let theta0 = self.v.atan2(x.v);
        let cross = self * x.v - x * self.v;
        let dot = x * x.v + self * self.v;
        (cross / dot).atan() + theta0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd2<F: Fn(f64) -> f64>(f: F, x: f64) -> (f64, f64) {
        let h = 1e-4;
        (
            (f(x + h) - f(x - h)) / (2.0 * h),
            (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
        )
    }

    #[test]
    fn derivatives_match_finite_differences() {
        fn g<T: Real>(x: T) -> T {
            (x * 2.0).sin() * x.exp() / (x * x + 1.0).sqrt()
                + x.atan2(T::cst(0.3) - x)
                + x.cos().powi(3)
        }
        for &x in &[-0.7, 0.1, 0.45, 1.3] {
            let t = g(Taylor2::variable(x));
            let (d1, d2) = fd2(g::<f64>, x);
            assert!((t.v - g(x)).abs() < 1e-14);
            assert!(
                (t.d1 - d1).abs() < 1e-6 * (1.0 + d1.abs()),
                "{} vs {}",
                t.d1,
                d1
            );
            assert!((t.second_derivative() - d2).abs() < 1e-4 * (1.0 + d2.abs()));
        }
    }

    #[test]
    fn atan2_across_quadrants() {
        for &(y, x) in &[(0.3, -0.9), (-0.4, -0.2), (0.8, 0.0), (-1.0, 0.5)] {
            let t = Taylor2::variable(y).atan2(Taylor2::cst(x));
            assert!((t.v - f64::atan2(y, x)).abs() < 1e-15);
            let exact = x / (x * x + y * y);
            assert!((t.d1 - exact).abs() < 1e-12);
        }
    }
}
