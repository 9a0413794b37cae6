//! Error norms of discrete solutions against manufactured solutions, integrated
//! over physical regions with oversampled cut rules.

use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{DomainClassification, ElementTag, Side, TwoDomainClassification};
use crate::quadrature::CutQuadrature;
use crate::space::{BrokenSpace, FieldVector};

use super::exact::Exact;
use super::problem::ManufacturedProblem;

/// Extra cut depth and quadrature order used when measuring errors.
pub const OVERSAMPLE_DEPTH: usize = 2;
pub const OVERSAMPLE_ORDER: usize = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ErrorReport {
    pub l2: f64,
    /// `|| kappa^1/2 grad e ||` over the physical pieces.
    pub h1_semi: f64,
    /// `sqrt(l2^2 + h1_semi^2)`.
    pub h1_full: f64,
    /// Broken energy norm with face, boundary and interface jump terms.
    pub energy: f64,
    pub dofs: usize,
    pub h: f64,
}

impl ErrorReport {
    fn from_squares(sq: Squares, dofs: usize, h: f64) -> Self {
        let (l2, semi) = (sq.l2.max(0.0), sq.semi.max(0.0));
        ErrorReport {
            l2: l2.sqrt(),
            h1_semi: semi.sqrt(),
            h1_full: (l2 + semi).sqrt(),
            energy: (semi + sq.jump.max(0.0)).sqrt(),
            dofs,
            h,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Squares {
    l2: f64,
    semi: f64,
    /// Penalty-weighted jumps, already scaled by `1/h`.
    jump: f64,
}

impl std::ops::Add for Squares {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Squares {
            l2: self.l2 + o.l2,
            semi: self.semi + o.semi,
            jump: self.jump + o.jump,
        }
    }
}

struct SideError<'a> {
    cq: &'a CutQuadrature<'a>,
    class: &'a DomainClassification,
    space: &'a BrokenSpace,
    coeffs: &'a [f64],
    u: &'a Exact,
    kappa: f64,
    h: f64,
    /// Include `h^-1 || e ||^2` on the level-set boundary (one-domain problems).
    boundary_gamma: bool,
}

impl SideError<'_> {
    fn element(&self, e: usize) -> Squares {
        let dim = self.space.dim();
        let mut sq = Squares::default();
        let (vol, gamma) = match self.class.element_tag[e] {
            ElementTag::Cut => {
                let pieces = self.cq.element_pieces(e);
                let gamma = self
                    .boundary_gamma
                    .then(|| self.cq.interface_from_pieces(&pieces));
                (self.cq.volume_from_pieces(&pieces, self.class.side), gamma)
            }
            _ => (self.cq.element_rule(e), None),
        };
        for (x, w) in vol.points.iter().zip(&vol.weights) {
            let d = self.u.value(x) - self.space.eval_field(self.coeffs, e, x);
            let g = self.u.gradient(x, dim) - self.space.eval_field_grad(self.coeffs, e, x);
            sq.l2 += w * d * d;
            sq.semi += w * self.kappa * g.norm_squared();
        }
        if let Some(q) = gamma {
            for (x, w) in q.points.iter().zip(&q.weights) {
                let d = self.u.value(x) - self.space.eval_field(self.coeffs, e, x);
                sq.jump += w * self.kappa * d * d / self.h;
            }
        }
        sq
    }

    fn interior_face(&self, f: usize) -> f64 {
        let face = self.cq.mesh().face(f);
        let (l, r) = (face.left, face.right.expect("interior face"));
        let q = if !self.class.is_cut(l) && !self.class.is_cut(r) {
            self.cq.full_face(f)
        } else {
            self.cq.face(f, self.class.side)
        };
        q.points
            .iter()
            .zip(&q.weights)
            .map(|(x, w)| {
                let j = self.space.eval_field(self.coeffs, l, x)
                    - self.space.eval_field(self.coeffs, r, x);
                w * self.kappa * j * j / self.h
            })
            .sum()
    }

    fn boundary_face(&self, f: usize) -> f64 {
        let e = self.cq.mesh().face(f).left;
        let q = self.cq.face(f, self.class.side);
        q.points
            .iter()
            .zip(&q.weights)
            .map(|(x, w)| {
                let d = self.u.value(x) - self.space.eval_field(self.coeffs, e, x);
                w * self.kappa * d * d / self.h
            })
            .sum()
    }

    fn total(&self) -> Squares {
        // contributions are summed in a fixed order so results do not depend on thread scheduling
        let vol: Vec<Squares> = self
            .class
            .active_elements
            .par_iter()
            .map(|&e| self.element(e))
            .collect();
        let vol = vol.into_iter().fold(Squares::default(), |a, b| a + b);
        let faces: Vec<f64> = self
            .class
            .interior_faces
            .par_iter()
            .map(|&f| self.interior_face(f))
            .collect();
        let bnd: Vec<f64> = self
            .class
            .boundary_faces_fitted
            .par_iter()
            .map(|&f| self.boundary_face(f))
            .collect();
        let (faces, bnd): (f64, f64) = (faces.iter().sum(), bnd.iter().sum());
        Squares {
            jump: vol.jump + faces + bnd,
            ..vol
        }
    }
}

/// Errors of a one-domain solution. `cq` is the rule used for the solve; it is
/// oversampled here. `h` is the penalty length.
pub fn compute_errors(
    cq: &CutQuadrature,
    class: &DomainClassification,
    field: &FieldVector,
    problem: &ManufacturedProblem,
    h: f64,
) -> ErrorReport {
    let cq = cq.oversampled(OVERSAMPLE_DEPTH, OVERSAMPLE_ORDER);
    let side = SideError {
        cq: &cq,
        class,
        space: field.space,
        coeffs: &field.coeffs,
        u: problem.solution(0),
        kappa: problem.kappa(0),
        h,
        boundary_gamma: true,
    };
    ErrorReport::from_squares(side.total(), field.space.n_dofs(), h)
}

/// Errors of a two-domain solution; `beta_gamma` weights the interface jump
/// term of the energy norm.
pub fn compute_interface_errors(
    cq: &CutQuadrature,
    class: &TwoDomainClassification,
    fields: [&FieldVector; 2],
    problem: &ManufacturedProblem,
    beta_gamma: f64,
    h: f64,
) -> ErrorReport {
    let cq = cq.oversampled(OVERSAMPLE_DEPTH, OVERSAMPLE_ORDER);
    let mut sq = Squares::default();
    for (i, side) in [Side::Inside, Side::Outside].into_iter().enumerate() {
        let s = SideError {
            cq: &cq,
            class: class.side(side),
            space: fields[i].space,
            coeffs: &fields[i].coeffs,
            u: problem.solution(i),
            kappa: problem.kappa(i),
            h,
            boundary_gamma: false,
        };
        sq = sq + s.total();
    }
    let gamma: Vec<f64> = class
        .cut_elements
        .par_iter()
        .map(|&e| {
            let q = cq.interface(e);
            q.points
                .iter()
                .zip(&q.weights)
                .map(|(x, w)| {
                    let exact = problem.solution(0).value(x) - problem.solution(1).value(x);
                    let disc = fields[0].value(e, x) - fields[1].value(e, x);
                    let d = exact - disc;
                    w * beta_gamma * d * d / h
                })
                .sum::<f64>()
        })
        .collect();
    sq.jump += gamma.iter().sum::<f64>();
    let dofs = fields[0].space.n_dofs() + fields[1].space.n_dofs();
    ErrorReport::from_squares(sq, dofs, h)
}
