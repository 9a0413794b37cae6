use rayon::prelude::*;

use crate::geometry::{DomainClassification, ElementTag, Side};
use crate::linalg::TripletBuilder;
use crate::quadrature::{CutQuadrature, QuadratureRule};
use crate::space::BrokenSpace;

use super::ghost::ghost_blocks;
use super::{penalty_length, AssemblyError, Block, BvpParams, ScalarFn, SystemOperator};

/// Terms of one subdomain: diffusion on `T_h ∩ Omega`, symmetric interior
/// penalty on `F_h ∩ Omega`, Nitsche terms on the fitted background boundary
/// and, when `gamma_data` is given, on the interface facets.
pub(crate) struct SideTerms<'a> {
    pub cq: &'a CutQuadrature<'a>,
    pub class: &'a DomainClassification,
    pub space: &'a BrokenSpace,
    pub kappa: f64,
    pub beta: f64,
    pub h: f64,
    pub offset: usize,
    pub f: ScalarFn<'a>,
    pub g: ScalarFn<'a>,
    pub gamma_data: Option<ScalarFn<'a>>,
}

impl SideTerms<'_> {
    fn dofs(&self, e: usize) -> Vec<usize> {
        self.space.dofs(e).map(|i| i + self.offset).collect()
    }

    fn element(&self, e: usize) -> (Block, Vec<f64>, bool) {
        let cq = self.cq;
        let side = self.class.side;
        let mut block = Block::new(self.dofs(e));
        let nb = self.space.dofs_per_element();
        let mut rhs = vec![0.0; nb];
        let (vol, gamma): (QuadratureRule, Option<QuadratureRule>) = match self.class.element_tag[e]
        {
            ElementTag::Cut => {
                let pieces = cq.element_pieces(e);
                let gamma = self.gamma_data.map(|_| cq.interface_from_pieces(&pieces));
                (cq.volume_from_pieces(&pieces, side), gamma)
            }
            _ => (cq.element_rule(e), None),
        };
        let empty = vol.is_empty();
        for (x, w) in vol.points.iter().zip(&vol.weights) {
            let (v, g) = self.space.eval_both(e, x);
            for i in 0..nb {
                for j in 0..nb {
                    block.mat[(i, j)] += w * self.kappa * g[i].dot(&g[j]);
                }
            }
            let fx = (self.f)(x);
            for i in 0..nb {
                rhs[i] += w * fx * v[i];
            }
        }
        if let (Some(q), Some(gd)) = (gamma, self.gamma_data) {
            let normals = q.normals.as_ref().expect("surface rule");
            let pen = self.beta * self.kappa / self.h;
            for ((x, w), n) in q.points.iter().zip(&q.weights).zip(normals) {
                // normals point towards phi > 0, i.e. out of the inside domain
                let n = side.sign() * n;
                let (v, g) = self.space.eval_both(e, x);
                let dn: Vec<f64> = g.iter().map(|gi| self.kappa * gi.dot(&n)).collect();
                block.add_sym_outer(-w, &dn, &v);
                block.add_outer(w * pen, &v);
                let gx = gd(x);
                for i in 0..nb {
                    rhs[i] += w * gx * (pen * v[i] - dn[i]);
                }
            }
        }
        (block, rhs, empty)
    }

    fn interior_face(&self, f: usize) -> Block {
        let mesh = self.cq.mesh();
        let face = mesh.face(f);
        let (l, r) = (face.left, face.right.expect("interior face"));
        let mut dofs = self.dofs(l);
        dofs.extend(self.dofs(r));
        let mut block = Block::new(dofs);
        let both_uncut = !self.class.is_cut(l) && !self.class.is_cut(r);
        let q = if both_uncut {
            self.cq.full_face(f)
        } else {
            self.cq.face(f, self.class.side)
        };
        let n = mesh.face_geometry(f).normal;
        let nb = self.space.dofs_per_element();
        let pen = self.beta * self.kappa / self.h;
        let mut jump = vec![0.0; 2 * nb];
        let mut avg = vec![0.0; 2 * nb];
        for (x, w) in q.points.iter().zip(&q.weights) {
            let (vl, gl) = self.space.eval_both(l, x);
            let (vr, gr) = self.space.eval_both(r, x);
            for i in 0..nb {
                jump[i] = vl[i];
                jump[nb + i] = -vr[i];
                avg[i] = 0.5 * self.kappa * gl[i].dot(&n);
                avg[nb + i] = 0.5 * self.kappa * gr[i].dot(&n);
            }
            block.add_sym_outer(-w, &avg, &jump);
            block.add_outer(w * pen, &jump);
        }
        block
    }

    fn boundary_face(&self, f: usize) -> (Block, Vec<f64>) {
        let mesh = self.cq.mesh();
        let e = mesh.face(f).left;
        let mut block = Block::new(self.dofs(e));
        let nb = self.space.dofs_per_element();
        let mut rhs = vec![0.0; nb];
        let q = self.cq.face(f, self.class.side);
        let n = mesh.face_geometry(f).normal;
        let pen = self.beta * self.kappa / self.h;
        for (x, w) in q.points.iter().zip(&q.weights) {
            let (v, g) = self.space.eval_both(e, x);
            let dn: Vec<f64> = g.iter().map(|gi| self.kappa * gi.dot(&n)).collect();
            block.add_sym_outer(-w, &dn, &v);
            block.add_outer(w * pen, &v);
            let gx = (self.g)(x);
            for i in 0..nb {
                rhs[i] += w * gx * (pen * v[i] - dn[i]);
            }
        }
        (block, rhs)
    }

    /// Add all terms into `builder` and `rhs`. Returns the cut elements whose
    /// physical part is empty.
    pub fn assemble(&self, builder: &mut TripletBuilder, rhs: &mut [f64]) -> Vec<usize> {
        let elems: Vec<(Block, Vec<f64>, bool)> = self
            .class
            .active_elements
            .par_iter()
            .map(|&e| self.element(e))
            .collect();
        let mut empty = Vec::new();
        for (&e, (block, r, is_empty)) in self.class.active_elements.iter().zip(elems) {
            block.push_into(builder);
            for (d, v) in block.dofs.iter().zip(r) {
                rhs[*d] += v;
            }
            if is_empty && self.class.is_cut(e) {
                empty.push(e);
            }
        }
        let faces: Vec<Block> = self
            .class
            .interior_faces
            .par_iter()
            .map(|&f| self.interior_face(f))
            .collect();
        for b in faces {
            b.push_into(builder);
        }
        let bnd: Vec<(Block, Vec<f64>)> = self
            .class
            .boundary_faces_fitted
            .par_iter()
            .map(|&f| self.boundary_face(f))
            .collect();
        for (b, r) in bnd {
            b.push_into(builder);
            for (d, v) in b.dofs.iter().zip(r) {
                rhs[*d] += v;
            }
        }
        empty
    }
}

/// Assemble `a_h + g_h` and `l_h` of the one-domain problem on `Omega = {phi < 0}`
/// intersected with the background box. `g` is the Dirichlet datum on both
/// the interface and the box boundary.
pub fn assemble_bvp(
    cq: &CutQuadrature,
    class: &DomainClassification,
    space: &BrokenSpace,
    params: &BvpParams,
    f: ScalarFn,
    g: ScalarFn,
) -> Result<SystemOperator, AssemblyError> {
    params.validate()?;
    let h = penalty_length(cq.mesh(), params.h);
    let n = space.n_dofs();
    let mut builder = TripletBuilder::new(n);
    let mut rhs = vec![0.0; n];
    let terms = SideTerms {
        cq,
        class,
        space,
        kappa: 1.0,
        beta: params.beta,
        h,
        offset: 0,
        f,
        g,
        gamma_data: Some(g),
    };
    debug_assert_eq!(class.side, Side::Inside);
    let empty = terms.assemble(&mut builder, &mut rhs);
    if let Some(&e) = empty.first() {
        if params.gp_variant == super::GhostVariant::None {
            return Err(AssemblyError::EmptyCutElement(e));
        }
    }
    for b in ghost_blocks(cq, class, space, params, h, 1.0, 0)? {
        b.push_into(&mut builder);
    }
    Ok(SystemOperator {
        matrix: builder.finish(),
        rhs,
        offsets: vec![0],
    })
}
