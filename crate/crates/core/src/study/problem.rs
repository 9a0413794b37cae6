//! Catalogue of manufactured test problems. Sources, boundary values and jump
//! data are all derived from the exact solutions.

use std::f64::consts::PI;

use crate::geometry::{builtin_levelset, AnalyticLevelSet};
use crate::mesh::BoundingBox;
use crate::simplex::Point;

use super::exact::Exact;
use super::StudyError;

#[derive(Clone, Debug, PartialEq)]
pub struct ManufacturedProblem {
    pub name: String,
    pub dim: usize,
    pub bbox: BoundingBox,
    pub level_set: AnalyticLevelSet,
    /// One solution for a boundary-value problem, two (inside, outside) for
    /// an interface problem.
    pub u: Vec<Exact>,
    pub kappa: Vec<f64>,
    /// Default mesh sequence (cells per axis).
    pub n_list: Vec<usize>,
}

/// Names accepted by [`builtin_problem`].
pub const BUILTIN_PROBLEMS: [&str; 11] = [
    "flower2d",
    "flower2d_box",
    "flower3d",
    "halfplane",
    "circle",
    "sphere",
    "interface2d_a",
    "interface2d_b",
    "interface2d_b_alt",
    "eight_balls",
    "corner_balls_cylinder",
];

/// Global polynomial of total degree `p` with fixed, generic coefficients.
pub fn patch_polynomial(p: usize, dim: usize) -> Exact {
    let mut terms = Vec::new();
    let p = p as u32;
    for i in 0..=p {
        for j in 0..=p - i {
            let kmax = if dim == 3 { p - i - j } else { 0 };
            for k in 0..=kmax {
                let s = (i + 2 * j + 3 * k) as f64;
                let c = if (i + j + k) % 2 == 0 { 1.0 } else { -1.0 } / (1.0 + 0.5 * s);
                terms.push(([i, j, k], c));
            }
        }
    }
    Exact::Polynomial(terms)
}

/// Look up a problem. `order` selects the polynomial degree of the patch test.
pub fn builtin_problem(name: &str, order: usize) -> Result<ManufacturedProblem, StudyError> {
    let ls = |n: &str| builtin_levelset(n, &[]).map_err(|e| StudyError::Config(e.to_string()));
    let geometric = |k: usize, base: usize| (0..k).map(|i| base << i).collect::<Vec<_>>();
    let sin3 = Exact::SinSum { a: 3.0 * PI };
    let cos3 = Exact::CosSum { a: 3.0 * PI };
    let p = match name {
        "flower2d" => bvp(
            name,
            2,
            BoundingBox::cube(-1.1, 1.1),
            ls("flower2d")?,
            Exact::Trig2d,
            geometric(5, 8),
        ),
        // the flower touches the box faces, as in the translation study
        "flower2d_box" => bvp(
            name,
            2,
            BoundingBox::cube(-0.8, 0.8),
            ls("flower2d")?,
            Exact::Trig2d,
            vec![8],
        ),
        "flower3d" => bvp(
            name,
            3,
            BoundingBox::cube(-0.8, 0.8),
            ls("flower3d")?,
            Exact::ExpTrig3d,
            geometric(3, 6),
        ),
        "halfplane" => bvp(
            name,
            2,
            BoundingBox::cube(-1.0, 1.0),
            ls("halfplane")?,
            patch_polynomial(order, 2),
            vec![8],
        ),
        "circle" => bvp(
            name,
            2,
            BoundingBox::cube(-0.51, 0.51),
            ls("circle")?,
            Exact::Trig2d,
            vec![16],
        ),
        "sphere" => bvp(
            name,
            3,
            BoundingBox::cube(-0.51, 0.51),
            ls("sphere")?,
            Exact::ExpTrig3d,
            vec![8],
        ),
        "interface2d_a" => interface(
            name,
            2,
            ls("flower2d")?,
            [Exact::Trig2d, Exact::Trig2d],
            [1.0, 1.0],
            geometric(4, 8),
        ),
        "interface2d_b" | "interface2d_b_alt" => {
            let (k1, k2) = (1.0, 1e6);
            let c = if name == "interface2d_b" {
                1.0 / k1
            } else {
                1.0 / k2
            };
            let u2 = Exact::SinCosDiag { a: 0.5 * PI }.scaled(c);
            interface(
                name,
                2,
                ls("flower2d")?,
                [Exact::SinCosSkew { a: PI }, u2],
                [k1, k2],
                geometric(4, 8),
            )
        }
        "eight_balls" => interface(
            name,
            3,
            ls("eight_balls")?,
            [sin3.clone(), sin3],
            [1.0, 1.0],
            vec![6, 9, 12],
        ),
        "corner_balls_cylinder" => {
            let (k1, k2) = (1.0, 10.0);
            interface(
                name,
                3,
                ls("corner_balls_cylinder")?,
                [sin3.scaled(1.0 / k1), cos3.scaled(1.0 / k2)],
                [k1, k2],
                vec![6, 9, 12],
            )
        }
        _ => return Err(StudyError::Config(format!("unknown problem '{name}'"))),
    };
    Ok(p)
}

fn bvp(
    name: &str,
    dim: usize,
    bbox: BoundingBox,
    level_set: AnalyticLevelSet,
    u: Exact,
    n_list: Vec<usize>,
) -> ManufacturedProblem {
    ManufacturedProblem {
        name: name.to_string(),
        dim,
        bbox,
        level_set,
        u: vec![u],
        kappa: vec![1.0],
        n_list,
    }
}

fn interface(
    name: &str,
    dim: usize,
    level_set: AnalyticLevelSet,
    u: [Exact; 2],
    kappa: [f64; 2],
    n_list: Vec<usize>,
) -> ManufacturedProblem {
    ManufacturedProblem {
        name: name.to_string(),
        dim,
        bbox: BoundingBox::cube(-1.1, 1.1),
        level_set,
        u: u.to_vec(),
        kappa: kappa.to_vec(),
        n_list,
    }
}

impl ManufacturedProblem {
    pub fn is_interface(&self) -> bool {
        self.u.len() == 2
    }

    pub fn solution(&self, side: usize) -> &Exact {
        &self.u[side.min(self.u.len() - 1)]
    }

    pub fn kappa(&self, side: usize) -> f64 {
        self.kappa[side.min(self.kappa.len() - 1)]
    }

    /// `f_i = -kappa_i Lap u_i`
    pub fn source(&self, side: usize, x: &Point) -> f64 {
        -self.kappa(side) * self.solution(side).laplacian(x, self.dim)
    }

    /// Dirichlet datum `u_i` on the box boundary and, for one-domain problems, on the level set.
    pub fn dirichlet(&self, side: usize, x: &Point) -> f64 {
        self.solution(side).value(x)
    }

    /// `g_D = u_1 - u_2`
    pub fn jump(&self, x: &Point) -> f64 {
        self.solution(0).value(x) - self.solution(1).value(x)
    }

    /// `g_N = k1 grad u_1 . n - k2 grad u_2 . n`
    pub fn flux_jump(&self, x: &Point, n: &Point) -> f64 {
        let g1 = self.solution(0).gradient(x, self.dim);
        let g2 = self.solution(1).gradient(x, self.dim);
        self.kappa(0) * g1.dot(n) - self.kappa(1) * g2.dot(n)
    }

    /// Copy with the level set moved by `offset`; the exact solution stays put.
    pub fn translated(&self, offset: Point) -> Self {
        ManufacturedProblem {
            level_set: self.level_set.translate(offset),
            ..self.clone()
        }
    }

    /// Copy with new diffusion coefficients, keeping the solution formulas.
    pub fn with_kappa(&self, kappa: &[f64]) -> Self {
        ManufacturedProblem {
            kappa: kappa.to_vec(),
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves() {
        for name in BUILTIN_PROBLEMS {
            let p = builtin_problem(name, 2).unwrap();
            assert_eq!(p.name, name);
            assert!(p.dim == 2 || p.dim == 3);
            assert_eq!(p.u.len(), p.kappa.len());
        }
        assert!(builtin_problem("nope", 1).is_err());
    }

    #[test]
    fn patch_polynomial_has_full_degree() {
        for p in 1..=3 {
            let u = patch_polynomial(p, 2);
            assert_eq!(u.degree(), Some(p as u32));
            if let Exact::Polynomial(t) = &u {
                assert_eq!(t.len(), (p + 1) * (p + 2) / 2);
            }
        }
    }

    #[test]
    fn jump_data_vanish_for_identical_sides() {
        let p = builtin_problem("eight_balls", 1).unwrap();
        let x = Point::new(0.3, -0.2, 0.75);
        let n = Point::new(0.6, 0.0, 0.8);
        assert_eq!(p.jump(&x), 0.0);
        assert!(p.flux_jump(&x, &n).abs() < 1e-12);
    }

    #[test]
    fn high_contrast_flux_jump() {
        let p = builtin_problem("interface2d_b", 1).unwrap();
        let x = Point::new(0.1, 0.4, 0.0);
        let n = Point::new(0.0, 1.0, 0.0);
        // u_1 = sin(pi(x-y))cos(pi(x+y)), d_y u_1 = -pi cos(pi(x-y))cos(pi(x+y)) - pi sin(pi(x-y))sin(pi(x+y))
        let (a, b) = (PI * (x.x - x.y), PI * (x.x + x.y));
        let du1 = -PI * a.cos() * b.cos() - PI * a.sin() * b.sin();
        // u_2 = sin(s)cos(s) = sin(2s)/2 with s = pi(x+y)/2, d_y u_2 = pi/2 cos(2s)
        let du2 = 0.5 * PI * (PI * (x.x + x.y)).cos();
        assert!((p.flux_jump(&x, &n) - (du1 - 1e6 * du2)).abs() < 1e-6);
    }

    #[test]
    fn source_is_minus_kappa_laplacian() {
        let p = builtin_problem("corner_balls_cylinder", 1).unwrap();
        let x = Point::new(0.05, 0.1, -0.2);
        let lap2 = -9.0
            * PI
            * PI
            * ((3.0 * PI * x.x).cos() + (3.0 * PI * x.y).cos() + (3.0 * PI * x.z).cos())
            / 10.0;
        assert!((p.source(1, &x) + 10.0 * lap2).abs() < 1e-9);
    }
}
