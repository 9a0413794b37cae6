//! Cut-cell quadrature by recursive red refinement and linear reconstruction.
//!
//! A simplex whose (perturbed) vertex values have mixed signs is refined
//! `depth` times; every mixed leaf is then split by the zero set of the linear
//! interpolant of the level set into sub-simplices on either side plus the
//! planar interface facet separating them.

use crate::geometry::{LevelSet, Side, SignRule, DEFAULT_EPS};
use crate::mesh::BackgroundMesh;
use crate::simplex::{Point, Simplex};

use super::QuadratureRule;

/// Relative measure below which reconstructed pieces are dropped.
const SLIVER: f64 = 1e-14;

/// Source of interface normals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NormalMode {
    /// Normal of the reconstructed linear facet, oriented towards `phi > 0`.
    /// Consistent with the integration region, so Nitsche terms stay exact.
    #[default]
    Facet,
    /// `grad phi / |grad phi|` evaluated at each quadrature point.
    Gradient,
}

/// Decomposition of one simplex into both sides and the interface between them.
#[derive(Clone, Debug, Default)]
pub struct CutPieces {
    /// Pieces with `phi < 0`.
    pub inside: Vec<Simplex>,
    /// Pieces with `phi > 0`.
    pub outside: Vec<Simplex>,
    /// Interface facets with unit normals pointing towards `phi > 0`.
    pub interface: Vec<(Simplex, Point)>,
}

impl CutPieces {
    pub fn side(&self, side: Side) -> &[Simplex] {
        match side {
            Side::Inside => &self.inside,
            Side::Outside => &self.outside,
        }
    }

    pub fn measure(&self, side: Side) -> f64 {
        self.side(side).iter().map(Simplex::measure).sum()
    }

    pub fn interface_measure(&self) -> f64 {
        self.interface.iter().map(|(s, _)| s.measure()).sum()
    }
}

/// Cut-rule factory bound to one mesh, level set and accuracy setting.
#[derive(Clone, Copy)]
pub struct CutQuadrature<'a> {
    mesh: &'a BackgroundMesh,
    phi: &'a dyn LevelSet,
    sign: SignRule,
    /// Refinement levels applied to mixed-sign simplices.
    pub depth: usize,
    /// Polynomial degree integrated exactly on each piece.
    pub order: usize,
    pub normal_mode: NormalMode,
}

impl<'a> CutQuadrature<'a> {
    pub fn new(
        mesh: &'a BackgroundMesh,
        phi: &'a dyn LevelSet,
        sign: SignRule,
        depth: usize,
        order: usize,
    ) -> Self {
        CutQuadrature {
            mesh,
            phi,
            sign,
            depth,
            order,
            normal_mode: NormalMode::Facet,
        }
    }

    pub fn mesh(&self) -> &'a BackgroundMesh {
        self.mesh
    }

    pub fn level_set(&self) -> &'a dyn LevelSet {
        self.phi
    }

    /// Same geometry with extra refinement depth and quadrature order.
    pub fn oversampled(&self, extra_depth: usize, extra_order: usize) -> Self {
        CutQuadrature {
            depth: self.depth + extra_depth,
            order: self.order + extra_order,
            ..*self
        }
    }

    pub fn with_order(&self, order: usize) -> Self {
        CutQuadrature { order, ..*self }
    }

    fn value(&self, x: &Point) -> f64 {
        self.sign.apply(self.phi.value(x))
    }

    /// Decompose an arbitrary simplex (element, face or sub-simplex).
    pub fn decompose(&self, simplex: &Simplex) -> CutPieces {
        let mut out = CutPieces::default();
        let values: Vec<f64> = simplex.vertices().iter().map(|x| self.value(x)).collect();
        self.recurse(simplex, &values, self.depth, &mut out);
        let threshold = SLIVER * simplex.measure();
        out.inside.retain(|s| s.measure() > threshold);
        out.outside.retain(|s| s.measure() > threshold);
        let k = simplex.order();
        if k > 1 {
            let surf = SLIVER * simplex.diameter().powi(k as i32 - 1);
            out.interface.retain(|(s, _)| s.measure() > surf);
        }
        out
    }

    fn recurse(&self, s: &Simplex, values: &[f64], depth: usize, out: &mut CutPieces) {
        let neg = values.iter().filter(|&&v| v < 0.0).count();
        if neg == values.len() {
            out.inside.push(*s);
            return;
        }
        if neg == 0 {
            out.outside.push(*s);
            return;
        }
        if depth > 0 {
            for child in s.red_refine() {
                let v: Vec<f64> = child.vertices().iter().map(|x| self.value(x)).collect();
                self.recurse(&child, &v, depth - 1, out);
            }
            return;
        }
        split_linear(s, values, out);
    }

    pub fn element_pieces(&self, e: usize) -> CutPieces {
        self.decompose(&self.mesh.element(e))
    }

    /// Full-element rule.
    pub fn element_rule(&self, e: usize) -> QuadratureRule {
        let mut q = QuadratureRule::default();
        q.push_simplex(&self.mesh.element(e), self.order);
        q
    }

    /// Rule on `T ∩ Omega_side`; works for cut and uncut elements alike.
    pub fn volume(&self, e: usize, side: Side) -> QuadratureRule {
        self.volume_from_pieces(&self.element_pieces(e), side)
    }

    pub fn volume_from_pieces(&self, pieces: &CutPieces, side: Side) -> QuadratureRule {
        let mut q = QuadratureRule::default();
        for s in pieces.side(side) {
            q.push_simplex(s, self.order);
        }
        q
    }

    /// Rule on `F ∩ Omega_side`.
    pub fn face(&self, f: usize, side: Side) -> QuadratureRule {
        let pieces = self.decompose(&self.mesh.face_simplex(f));
        let mut q = QuadratureRule::default();
        for s in pieces.side(side) {
            q.push_simplex(s, self.order);
        }
        q
    }

    /// Rule on the full face, ignoring the level set.
    pub fn full_face(&self, f: usize) -> QuadratureRule {
        let mut q = QuadratureRule::default();
        q.push_simplex(&self.mesh.face_simplex(f), self.order);
        q
    }

    /// Rule on the reconstructed interface inside element `e`, with normals
    /// pointing towards `phi > 0`.
    pub fn interface(&self, e: usize) -> QuadratureRule {
        self.interface_from_pieces(&self.element_pieces(e))
    }

    pub fn interface_from_pieces(&self, pieces: &CutPieces) -> QuadratureRule {
        let mut q = QuadratureRule {
            normals: Some(Vec::new()),
            ..Default::default()
        };
        for (s, n) in &pieces.interface {
            q.push_surface(s, *n, self.order);
        }
        if self.normal_mode == NormalMode::Gradient {
            let normals = q.normals.as_mut().expect("surface rule");
            for (x, n) in q.points.iter().zip(normals.iter_mut()) {
                let g = self.phi.gradient(x);
                let norm = g.norm();
                if norm > 0.0 && norm.is_finite() {
                    *n = g / norm;
                }
            }
        }
        q
    }
}

fn crossing(a: &Point, b: &Point, va: f64, vb: f64) -> Point {
    let t = va / (va - vb);
    a + (b - a) * t
}

fn oriented(facet: Simplex, towards_positive: Point) -> (Simplex, Point) {
    let mut n = facet.hyperplane_normal();
    if n.dot(&towards_positive) < 0.0 {
        n = -n;
    }
    (facet, n)
}

/// Tetrahedra of the prism `(a0 a1 a2; b0 b1 b2)` with lateral edges `a_i b_i`.
fn prism(a: [Point; 3], b: [Point; 3]) -> [Simplex; 3] {
    [
        Simplex::new(&[a[0], a[1], a[2], b[0]]),
        Simplex::new(&[a[1], a[2], b[0], b[1]]),
        Simplex::new(&[a[2], b[0], b[1], b[2]]),
    ]
}

/// Split a mixed-sign simplex by the zero set of the linear interpolant.
fn split_linear(s: &Simplex, values: &[f64], out: &mut CutPieces) {
    let p = s.vertices();
    let neg: Vec<usize> = (0..p.len()).filter(|&i| values[i] < 0.0).collect();
    let pos: Vec<usize> = (0..p.len()).filter(|&i| values[i] >= 0.0).collect();
    let cut = |i: usize, j: usize| crossing(&p[i], &p[j], values[i], values[j]);
    let push = |out: &mut CutPieces, negative: bool, piece: Simplex| {
        if negative {
            out.inside.push(piece)
        } else {
            out.outside.push(piece)
        }
    };
    // direction from the negative towards the positive region
    let up = pos.iter().map(|&i| p[i]).sum::<Point>() / pos.len() as f64
        - neg.iter().map(|&i| p[i]).sum::<Point>() / neg.len() as f64;

    match p.len() {
        2 => {
            let m = cut(0, 1);
            push(out, values[0] < 0.0, Simplex::new(&[p[0], m]));
            push(out, values[1] < 0.0, Simplex::new(&[m, p[1]]));
        }
        3 => {
            let (lone, others, lone_negative) = if neg.len() == 1 {
                (neg[0], [pos[0], pos[1]], true)
            } else {
                (pos[0], [neg[0], neg[1]], false)
            };
            let (b, c) = (others[0], others[1]);
            let pp = cut(lone, b);
            let qq = cut(lone, c);
            push(out, lone_negative, Simplex::new(&[p[lone], pp, qq]));
            push(out, !lone_negative, Simplex::new(&[pp, p[b], p[c]]));
            push(out, !lone_negative, Simplex::new(&[pp, p[c], qq]));
            out.interface.push(oriented(Simplex::new(&[pp, qq]), up));
        }
        4 => {
            if neg.len() == 2 {
                let (a, b) = (neg[0], neg[1]);
                let (c, d) = (pos[0], pos[1]);
                let (pac, pad, pbc, pbd) = (cut(a, c), cut(a, d), cut(b, c), cut(b, d));
                for t in prism([p[a], pac, pad], [p[b], pbc, pbd]) {
                    out.inside.push(t);
                }
                for t in prism([p[c], pac, pbc], [p[d], pad, pbd]) {
                    out.outside.push(t);
                }
                out.interface
                    .push(oriented(Simplex::new(&[pac, pbc, pbd]), up));
                out.interface
                    .push(oriented(Simplex::new(&[pac, pbd, pad]), up));
            } else {
                let (lone, others, lone_negative) = if neg.len() == 1 {
                    (neg[0], [pos[0], pos[1], pos[2]], true)
                } else {
                    (pos[0], [neg[0], neg[1], neg[2]], false)
                };
                let q: Vec<Point> = others.iter().map(|&o| cut(lone, o)).collect();
                push(
                    out,
                    lone_negative,
                    Simplex::new(&[p[lone], q[0], q[1], q[2]]),
                );
                for t in prism(
                    [q[0], q[1], q[2]],
                    [p[others[0]], p[others[1]], p[others[2]]],
                ) {
                    push(out, !lone_negative, t);
                }
                out.interface
                    .push(oriented(Simplex::new(&[q[0], q[1], q[2]]), up));
            }
        }
        _ => unreachable!("point simplices are never mixed"),
    }
}

/// Rule on `T ∩ Omega_side` for element `e` with the default sign tolerance.
pub fn cut_volume_rule(
    mesh: &BackgroundMesh,
    e: usize,
    phi: &dyn LevelSet,
    side: Side,
    depth: usize,
    order: usize,
) -> QuadratureRule {
    CutQuadrature::new(
        mesh,
        phi,
        SignRule::new(DEFAULT_EPS, mesh.h()),
        depth,
        order,
    )
    .volume(e, side)
}

/// Rule on `F ∩ Omega_side` for face `f` with the default sign tolerance.
pub fn cut_face_rule(
    mesh: &BackgroundMesh,
    f: usize,
    phi: &dyn LevelSet,
    side: Side,
    depth: usize,
    order: usize,
) -> QuadratureRule {
    CutQuadrature::new(
        mesh,
        phi,
        SignRule::new(DEFAULT_EPS, mesh.h()),
        depth,
        order,
    )
    .face(f, side)
}

/// Interface rule with unit normals for element `e`.
pub fn interface_rule(
    mesh: &BackgroundMesh,
    e: usize,
    phi: &dyn LevelSet,
    depth: usize,
    order: usize,
) -> QuadratureRule {
    CutQuadrature::new(
        mesh,
        phi,
        SignRule::new(DEFAULT_EPS, mesh.h()),
        depth,
        order,
    )
    .interface(e)
}
