//! Broken polynomial spaces with an orthonormal modal basis on every element.
//!
//! Each basis function is a combination of scaled monomials
//! `((x - c) / s)^alpha`, `|alpha| <= k`, orthonormalized against the volume
//! inner product of the full element. Basis functions are polynomials, so they
//! can be evaluated anywhere, including outside the physical domain.

use std::ops::Range;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::mesh::BackgroundMesh;
use crate::quadrature::QuadratureRule;
use crate::simplex::{Point, Simplex};

#[derive(Debug, Error, PartialEq)]
pub enum SpaceError {
    #[error("polynomial order {0} not supported (1..=3)")]
    UnsupportedOrder(usize),
    #[error("element {0} appears twice in the active list")]
    DuplicateElement(usize),
    #[error("element {0} has a singular mass matrix")]
    Degenerate(usize),
}

/// Exponents of all monomials of total degree `<= k` in `dim` variables,
/// ordered by degree.
pub fn monomial_exponents(dim: usize, k: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for deg in 0..=k {
        for a in (0..=deg).rev() {
            match dim {
                1 => {
                    if a == deg {
                        out.push([a, 0, 0]);
                    }
                }
                2 => out.push([a, deg - a, 0]),
                _ => {
                    for b in (0..=deg - a).rev() {
                        out.push([a, b, deg - a - b]);
                    }
                }
            }
        }
    }
    out
}

fn binomial(n: usize, r: usize) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Orthonormal basis of `P_k` on one element.
#[derive(Clone, Debug)]
pub struct ElementBasis {
    center: Point,
    scale: f64,
    /// Row `i` holds the monomial coefficients of basis function `i`.
    coef: DMatrix<f64>,
}

impl ElementBasis {
    pub fn center(&self) -> Point {
        self.center
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Monomial coefficients of the basis, one row per basis function.
    pub fn coefficients(&self) -> &DMatrix<f64> {
        &self.coef
    }
}

/// `P_k(T_h)` on a list of active elements.
#[derive(Clone, Debug)]
pub struct BrokenSpace {
    dim: usize,
    order: usize,
    exps: Vec<[usize; 3]>,
    elements: Vec<usize>,
    position: Vec<Option<usize>>,
    bases: Vec<ElementBasis>,
}

impl BrokenSpace {
    pub fn new(
        mesh: &BackgroundMesh,
        elements: &[usize],
        order: usize,
    ) -> Result<Self, SpaceError> {
        if !(1..=3).contains(&order) {
            return Err(SpaceError::UnsupportedOrder(order));
        }
        let dim = mesh.dim();
        let exps = monomial_exponents(dim, order);
        let mut position = vec![None; mesh.n_elements()];
        for (i, &e) in elements.iter().enumerate() {
            if position[e].replace(i).is_some() {
                return Err(SpaceError::DuplicateElement(e));
            }
        }
        let bases = elements
            .iter()
            .map(|&e| {
                orthonormal_basis(&mesh.element(e), &exps, order).ok_or(SpaceError::Degenerate(e))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BrokenSpace {
            dim,
            order,
            exps,
            elements: elements.to_vec(),
            position,
            bases,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dofs_per_element(&self) -> usize {
        self.exps.len()
    }

    pub fn n_dofs(&self) -> usize {
        self.elements.len() * self.exps.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    /// Local index of mesh element `e`, if active.
    pub fn local_index(&self, e: usize) -> Option<usize> {
        self.position.get(e).copied().flatten()
    }

    /// Global DOF range of mesh element `e`. Panics if `e` is not active.
    pub fn dofs(&self, e: usize) -> Range<usize> {
        let l = self.local_index(e).expect("element not in space");
        let n = self.exps.len();
        l * n..(l + 1) * n
    }

    pub fn basis(&self, e: usize) -> &ElementBasis {
        &self.bases[self.local_index(e).expect("element not in space")]
    }

    pub fn exponents(&self) -> &[[usize; 3]] {
        &self.exps
    }

    fn monomials(&self, b: &ElementBasis, x: &Point) -> (Vec<f64>, [Vec<f64>; 3]) {
        let y = (x - b.center) / b.scale;
        let k = self.order;
        let pw: Vec<Vec<f64>> = (0..3)
            .map(|i| {
                let mut p = vec![1.0; k + 1];
                for j in 1..=k {
                    p[j] = p[j - 1] * y[i];
                }
                p
            })
            .collect();
        let n = self.exps.len();
        let mut m = vec![0.0; n];
        let mut dm = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        for (q, a) in self.exps.iter().enumerate() {
            m[q] = pw[0][a[0]] * pw[1][a[1]] * pw[2][a[2]];
            for i in 0..self.dim {
                if a[i] > 0 {
                    let mut v = a[i] as f64 / b.scale;
                    for j in 0..3 {
                        v *= if j == i { pw[j][a[j] - 1] } else { pw[j][a[j]] };
                    }
                    dm[i][q] = v;
                }
            }
        }
        (m, dm)
    }

    /// Values of all basis functions of element `e` at `x`.
    pub fn eval(&self, e: usize, x: &Point) -> Vec<f64> {
        let b = self.basis(e);
        let (m, _) = self.monomials(b, x);
        (&b.coef * DVector::from_vec(m)).data.into()
    }

    /// Gradients of all basis functions of element `e` at `x`.
    pub fn eval_grad(&self, e: usize, x: &Point) -> Vec<Point> {
        let b = self.basis(e);
        let (_, dm) = self.monomials(b, x);
        let n = self.exps.len();
        let mut g = vec![Point::zeros(); n];
        for i in 0..self.dim {
            let d = &b.coef * DVector::from_column_slice(&dm[i]);
            for q in 0..n {
                g[q][i] = d[q];
            }
        }
        g
    }

    /// Values and gradients together.
    pub fn eval_both(&self, e: usize, x: &Point) -> (Vec<f64>, Vec<Point>) {
        let b = self.basis(e);
        let (m, dm) = self.monomials(b, x);
        let n = self.exps.len();
        let v: Vec<f64> = (&b.coef * DVector::from_vec(m)).data.into();
        let mut g = vec![Point::zeros(); n];
        for i in 0..self.dim {
            let d = &b.coef * DVector::from_column_slice(&dm[i]);
            for q in 0..n {
                g[q][i] = d[q];
            }
        }
        (v, g)
    }

    /// `sum_{|alpha| = j} D^alpha v n^alpha / alpha!` for every basis function,
    /// i.e. the `t^j` coefficient of `v(x + t n)`.
    pub fn normal_derivative(&self, e: usize, x: &Point, n: &Point, j: usize) -> Vec<f64> {
        let nb = self.exps.len();
        if j > self.order {
            return vec![0.0; nb];
        }
        let b = self.basis(e);
        let y = (x - b.center) / b.scale;
        let d = n / b.scale;
        let mut m = vec![0.0; nb];
        for (q, a) in self.exps.iter().enumerate() {
            // coefficient of t^j in prod_i (y_i + t d_i)^{a_i}
            let mut poly = vec![1.0];
            for i in 0..3 {
                let factor: Vec<f64> = (0..=a[i])
                    .map(|r| binomial(a[i], r) * y[i].powi((a[i] - r) as i32) * d[i].powi(r as i32))
                    .collect();
                let mut next = vec![0.0; poly.len() + factor.len() - 1];
                for (p, pv) in poly.iter().enumerate() {
                    for (r, fv) in factor.iter().enumerate() {
                        next[p + r] += pv * fv;
                    }
                }
                poly = next;
            }
            m[q] = poly.get(j).copied().unwrap_or(0.0);
        }
        (&b.coef * DVector::from_vec(m)).data.into()
    }

    /// Evaluate a coefficient vector on element `e`.
    pub fn eval_field(&self, coeffs: &[f64], e: usize, x: &Point) -> f64 {
        let r = self.dofs(e);
        self.eval(e, x)
            .iter()
            .zip(&coeffs[r])
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn eval_field_grad(&self, coeffs: &[f64], e: usize, x: &Point) -> Point {
        let r = self.dofs(e);
        self.eval_grad(e, x)
            .iter()
            .zip(&coeffs[r])
            .map(|(g, c)| g * *c)
            .sum()
    }

    /// Full-element rule exact for degree `order`.
    pub fn element_rule(&self, mesh: &BackgroundMesh, e: usize, order: usize) -> QuadratureRule {
        let mut q = QuadratureRule::default();
        q.push_simplex(&mesh.element(e), order);
        q
    }

    /// L2 projection of `f` element by element over the full elements. The
    /// rule integrates degree `k + extra` exactly.
    pub fn l2_project<F: Fn(&Point) -> f64>(
        &self,
        mesh: &BackgroundMesh,
        f: F,
        extra: usize,
    ) -> FieldVector<'_> {
        let mut coeffs = vec![0.0; self.n_dofs()];
        for &e in &self.elements {
            let q = self.element_rule(mesh, e, 2 * self.order + extra);
            let r = self.dofs(e);
            for (x, w) in q.points.iter().zip(&q.weights) {
                let fx = f(x);
                for (c, v) in coeffs[r.clone()].iter_mut().zip(self.eval(e, x)) {
                    *c += w * fx * v;
                }
            }
        }
        FieldVector {
            space: self,
            coeffs,
        }
    }
}

fn orthonormal_basis(t: &Simplex, exps: &[[usize; 3]], k: usize) -> Option<ElementBasis> {
    let center = t.centroid();
    let scale = t.diameter();
    let mut q = QuadratureRule::default();
    q.push_simplex(t, 2 * k);
    let n = exps.len();
    let mut mass = DMatrix::<f64>::zeros(n, n);
    for (x, w) in q.points.iter().zip(&q.weights) {
        let y = (x - center) / scale;
        let m: Vec<f64> = exps
            .iter()
            .map(|a| y.x.powi(a[0] as i32) * y.y.powi(a[1] as i32) * y.z.powi(a[2] as i32))
            .collect();
        for i in 0..n {
            for j in 0..n {
                mass[(i, j)] += w * m[i] * m[j];
            }
        }
    }
    let l = mass.cholesky()?.unpack();
    let coef = l.try_inverse()?;
    Some(ElementBasis {
        center,
        scale,
        coef,
    })
}

/// Coefficients of a discrete function in a [`BrokenSpace`].
#[derive(Clone, Debug)]
pub struct FieldVector<'a> {
    pub space: &'a BrokenSpace,
    pub coeffs: Vec<f64>,
}

impl<'a> FieldVector<'a> {
    pub fn new(space: &'a BrokenSpace, coeffs: Vec<f64>) -> Self {
        assert_eq!(
            coeffs.len(),
            space.n_dofs(),
            "coefficient length does not match space"
        );
        FieldVector { space, coeffs }
    }

    pub fn zeros(space: &'a BrokenSpace) -> Self {
        FieldVector {
            space,
            coeffs: vec![0.0; space.n_dofs()],
        }
    }

    pub fn value(&self, e: usize, x: &Point) -> f64 {
        self.space.eval_field(&self.coeffs, e, x)
    }

    pub fn gradient(&self, e: usize, x: &Point) -> Point {
        self.space.eval_field_grad(&self.coeffs, e, x)
    }

    pub fn normal_derivative(&self, e: usize, x: &Point, n: &Point, j: usize) -> f64 {
        let r = self.space.dofs(e);
        self.space
            .normal_derivative(e, x, n, j)
            .iter()
            .zip(&self.coeffs[r])
            .map(|(a, b)| a * b)
            .sum()
    }
}
