//! Quadrature on reference simplices, on cut element volumes, cut faces and
//! reconstructed interface pieces.

mod cut;
mod reference;

pub use cut::{
    cut_face_rule, cut_volume_rule, interface_rule, CutPieces, CutQuadrature, NormalMode,
};
pub use reference::{gauss_jacobi, reference, ReferenceRule, MAX_ORDER};

use thiserror::Error;

use crate::simplex::{Point, Simplex};

#[derive(Debug, Error, PartialEq)]
pub enum QuadratureError {
    #[error("unsupported quadrature order {0} (maximum {MAX_ORDER})")]
    UnsupportedOrder(usize),
    #[error("unsupported reference dimension {0}")]
    UnsupportedDimension(usize),
}

/// Points and weights in physical coordinates; surface rules carry unit normals.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct QuadratureRule {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    pub normals: Option<Vec<Point>>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sum of weights, i.e. the measure of the integration region.
    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate<F: FnMut(&Point) -> f64>(&self, mut f: F) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(x))
            .sum()
    }

    /// Append the reference rule of `order` mapped onto `simplex`.
    pub fn push_simplex(&mut self, simplex: &Simplex, order: usize) {
        let k = simplex.order();
        let scale = simplex.measure() * (1..=k).product::<usize>() as f64;
        let r = reference(k, order);
        for (xi, w) in r.points.iter().zip(&r.weights) {
            self.points.push(simplex.map(&xi[..k]));
            self.weights.push(w * scale);
        }
    }

    /// Like [`push_simplex`](Self::push_simplex) with a constant normal per point.
    pub fn push_surface(&mut self, simplex: &Simplex, normal: Point, order: usize) {
        let before = self.points.len();
        self.push_simplex(simplex, order);
        let normals = self.normals.get_or_insert_with(Vec::new);
        normals.extend(std::iter::repeat_n(normal, self.points.len() - before));
    }
}

/// Reference rule of `dim` exact for polynomials of degree `order`.
pub fn reference_rule(dim: usize, order: usize) -> Result<QuadratureRule, QuadratureError> {
    if !(1..=3).contains(&dim) {
        return Err(QuadratureError::UnsupportedDimension(dim));
    }
    if order > MAX_ORDER {
        return Err(QuadratureError::UnsupportedOrder(order));
    }
    let r = reference(dim, order);
    Ok(QuadratureRule {
        points: r
            .points
            .iter()
            .map(|p| Point::new(p[0], p[1], p[2]))
            .collect(),
        weights: r.weights.clone(),
        normals: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_limits() {
        assert_eq!(
            reference_rule(2, 25),
            Err(QuadratureError::UnsupportedOrder(25))
        );
        assert_eq!(
            reference_rule(4, 2),
            Err(QuadratureError::UnsupportedDimension(4))
        );
        let r = reference_rule(2, 1).unwrap();
        assert!((r.measure() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn mapped_rule_integrates_over_physical_simplex() {
        let t = Simplex::new(&[
            Point::new(1.0, 1.0, 0.0),
            Point::new(3.0, 1.0, 0.0),
            Point::new(1.0, 2.0, 0.0),
        ]);
        let mut q = QuadratureRule::default();
        q.push_simplex(&t, 2);
        assert!((q.measure() - 1.0).abs() < 1e-14);
        // int x over triangle = area * centroid.x
        assert!((q.integrate(|p| p.x) - 5.0 / 3.0).abs() < 1e-14);
    }
}
