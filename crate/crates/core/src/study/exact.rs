//! Closed-form reference solutions. Each formula is written once, generic over
//! [`Real`], and its gradient and Laplacian come from Taylor propagation.

use std::f64::consts::PI;

use crate::real::{Real, Taylor2};
use crate::simplex::Point;

#[derive(Clone, Debug, PartialEq)]
pub enum Exact {
    /// `cos(2 pi x) cos(2 pi y) + sin(2 pi x) sin(2 pi y)`
    Trig2d,
    /// `exp(s) cos(s) sin(s)` with `s = x + y + z`
    ExpTrig3d,
    /// `sin(a x) + sin(a y) + sin(a z)`
    SinSum {
        a: f64,
    },
    /// `cos(a x) + cos(a y) + cos(a z)`
    CosSum {
        a: f64,
    },
    /// `sin(a (x - y)) cos(a (x + y))`
    SinCosSkew {
        a: f64,
    },
    /// `sin(a (x + y)) cos(a (x + y))`
    SinCosDiag {
        a: f64,
    },
    /// `sum c x^i y^j z^k`
    Polynomial(Vec<([u32; 3], f64)>),
    Scaled(f64, Box<Exact>),
}

impl Exact {
    pub fn scaled(self, c: f64) -> Self {
        Exact::Scaled(c, Box::new(self))
    }

    /// Total degree for polynomials, `None` otherwise.
    pub fn degree(&self) -> Option<u32> {
        match self {
            Exact::Polynomial(terms) => Some(
                terms
                    .iter()
                    .map(|(e, _)| e[0] + e[1] + e[2])
                    .max()
                    .unwrap_or(0),
            ),
            Exact::Scaled(_, u) => u.degree(),
            _ => None,
        }
    }

    pub fn eval_generic<T: Real>(&self, x: [T; 3]) -> T {
        let [x, y, z] = x;
        match self {
            Exact::Trig2d => {
                let (a, b) = (x * (2.0 * PI), y * (2.0 * PI));
                a.cos() * b.cos() + a.sin() * b.sin()
            }
            Exact::ExpTrig3d => {
                let s = x + y + z;
                s.exp() * s.cos() * s.sin()
            }
            Exact::SinSum { a } => (x * *a).sin() + (y * *a).sin() + (z * *a).sin(),
            Exact::CosSum { a } => (x * *a).cos() + (y * *a).cos() + (z * *a).cos(),
            Exact::SinCosSkew { a } => ((x - y) * *a).sin() * ((x + y) * *a).cos(),
            Exact::SinCosDiag { a } => {
                let s = (x + y) * *a;
                s.sin() * s.cos()
            }
            Exact::Polynomial(terms) => {
                let mut acc = T::cst(0.0);
                for (e, c) in terms {
                    acc = acc + x.powi(e[0]) * y.powi(e[1]) * z.powi(e[2]) * *c;
                }
                acc
            }
            Exact::Scaled(c, u) => u.eval_generic([x, y, z]) * *c,
        }
    }

    pub fn value(&self, p: &Point) -> f64 {
        self.eval_generic([p.x, p.y, p.z])
    }

    fn along(&self, p: &Point, axis: usize) -> Taylor2 {
        let mut arg = [Taylor2::cst(p.x), Taylor2::cst(p.y), Taylor2::cst(p.z)];
        arg[axis] = Taylor2::variable(p[axis]);
        self.eval_generic(arg)
    }

    /// Gradient in the first `dim` coordinates (remaining components zero).
    pub fn gradient(&self, p: &Point, dim: usize) -> Point {
        let mut g = Point::zeros();
        for a in 0..dim {
            g[a] = self.along(p, a).d1;
        }
        g
    }

    /// Laplacian in the first `dim` coordinates.
    pub fn laplacian(&self, p: &Point, dim: usize) -> f64 {
        (0..dim).map(|a| self.along(p, a).second_derivative()).sum()
    }
}
