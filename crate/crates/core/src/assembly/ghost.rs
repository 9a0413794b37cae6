use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::geometry::{DomainClassification, ElementTag};
use crate::linalg::{SparseSym, TripletBuilder};
use crate::quadrature::{CutQuadrature, QuadratureRule};
use crate::space::BrokenSpace;

use super::{penalty_length, AssemblyError, Block, BvpParams, GhostVariant};

/// Element group on which a projection penalty acts. The first element is the
/// anchor whose polynomial basis spans `P_k(patch)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Patch {
    pub elements: Vec<usize>,
}

/// Physical measure `|T ∩ Omega|` of every active element.
fn physical_measures(cq: &CutQuadrature, class: &DomainClassification) -> Vec<f64> {
    let mesh = cq.mesh();
    class
        .active_elements
        .par_iter()
        .map(|&e| match class.element_tag[e] {
            ElementTag::Cut => cq.element_pieces(e).measure(class.side),
            _ => mesh.element(e).measure(),
        })
        .collect()
}

/// Patches of a projection variant; empty for face-based variants.
pub fn patches(
    variant: GhostVariant,
    cq: &CutQuadrature,
    class: &DomainClassification,
    c_s: f64,
    h: f64,
) -> Result<Vec<Patch>, AssemblyError> {
    let mesh = cq.mesh();
    match variant {
        GhostVariant::ProjectionP1 => Ok(class
            .ghost_faces
            .iter()
            .map(|&f| {
                let face = mesh.face(f);
                Patch {
                    elements: vec![face.left, face.right.expect("interior face")],
                }
            })
            .collect()),
        GhostVariant::ProjectionP2 => {
            let v2e = mesh.vertex_to_elements();
            Ok(class
                .cut_elements
                .iter()
                .map(|&e| {
                    let mut elements = vec![e];
                    elements.extend(
                        mesh.vertex_patch(e, &v2e)
                            .into_iter()
                            .filter(|&t| t != e && class.is_active(t)),
                    );
                    Patch { elements }
                })
                .collect())
        }
        GhostVariant::ProjectionP3 => {
            let v2e = mesh.vertex_to_elements();
            let measures = physical_measures(cq, class);
            let measure = |e: usize| measures[class.active_index(e).expect("active")];
            let small = c_s * h.powi(mesh.dim() as i32);
            let mut out = Vec::new();
            for &e in &class.cut_elements {
                if measure(e) > small {
                    continue;
                }
                let fat = mesh
                    .vertex_patch(e, &v2e)
                    .into_iter()
                    .filter(|&t| t != e && class.is_active(t) && measure(t) > small)
                    .max_by(|&a, &b| measure(a).total_cmp(&measure(b)).then(b.cmp(&a)));
                match fat {
                    Some(t) => out.push(Patch {
                        elements: vec![t, e],
                    }),
                    None => return Err(AssemblyError::NoFatNeighbour(e)),
                }
            }
            Ok(out)
        }
        _ => Ok(Vec::new()),
    }
}

fn full_element_rule(cq: &CutQuadrature, e: usize, order: usize) -> QuadratureRule {
    let mut q = QuadratureRule::default();
    q.push_simplex(&cq.mesh().element(e), order);
    q
}

/// `gamma h^-2 (I - B^T G^-1 B)` on the concatenated patch DOFs, where `G`
/// is the Gram matrix of the anchor basis over the patch and `B` its inner
/// products with every element basis.
fn projection_block(
    cq: &CutQuadrature,
    space: &BrokenSpace,
    patch: &Patch,
    scale: f64,
    offset: usize,
) -> Block {
    let nb = space.dofs_per_element();
    let m = patch.elements.len();
    let anchor = patch.elements[0];
    let order = 2 * space.order();
    let mut gram = DMatrix::<f64>::zeros(nb, nb);
    let mut b = DMatrix::<f64>::zeros(nb, m * nb);
    for (k, &e) in patch.elements.iter().enumerate() {
        let q = full_element_rule(cq, e, order);
        for (x, w) in q.points.iter().zip(&q.weights) {
            let pa = space.eval(anchor, x);
            let pe = space.eval(e, x);
            for i in 0..nb {
                for j in 0..nb {
                    gram[(i, j)] += w * pa[i] * pa[j];
                    b[(i, k * nb + j)] += w * pa[i] * pe[j];
                }
            }
        }
    }
    let proj = b.transpose()
        * gram
            .cholesky()
            .expect("patch Gram matrix is positive definite")
            .solve(&b);
    let mat = (DMatrix::<f64>::identity(m * nb, m * nb) - proj) * scale;
    let dofs = patch
        .elements
        .iter()
        .flat_map(|&e| space.dofs(e).map(|i| i + offset))
        .collect();
    Block { dofs, mat }
}

fn face_block(
    cq: &CutQuadrature,
    space: &BrokenSpace,
    f: usize,
    params: &BvpParams,
    h: f64,
    kappa: f64,
    offset: usize,
) -> Block {
    let mesh = cq.mesh();
    let face = mesh.face(f);
    let (l, r) = (face.left, face.right.expect("interior face"));
    let nb = space.dofs_per_element();
    let dofs = space
        .dofs(l)
        .chain(space.dofs(r))
        .map(|i| i + offset)
        .collect();
    let mut block = Block::new(dofs);
    let mut q = QuadratureRule::default();
    q.push_simplex(&mesh.face_simplex(f), (2 * space.order()).max(cq.order));
    let n = mesh.face_geometry(f).normal;
    let k = space.order();
    let mut jump = vec![0.0; 2 * nb];
    for (x, w) in q.points.iter().zip(&q.weights) {
        match params.gp_variant {
            GhostVariant::FaceJumps => {
                for j in 0..=k {
                    let gj = params.gamma_j(j);
                    if gj == 0.0 {
                        continue;
                    }
                    let dl = space.normal_derivative(l, x, &n, j);
                    let dr = space.normal_derivative(r, x, &n, j);
                    for i in 0..nb {
                        jump[i] = dl[i];
                        jump[nb + i] = -dr[i];
                    }
                    block.add_outer(w * kappa * gj * h.powi(2 * j as i32 - 1), &jump);
                }
            }
            GhostVariant::FullGradient => {
                let g1 = params.gamma_j(1);
                let gl = space.eval_grad(l, x);
                let gr = space.eval_grad(r, x);
                for c in 0..mesh.dim() {
                    for i in 0..nb {
                        jump[i] = gl[i][c];
                        jump[nb + i] = -gr[i][c];
                    }
                    block.add_outer(w * kappa * g1 * h, &jump);
                }
            }
            _ => unreachable!(),
        }
    }
    block
}

pub(crate) fn ghost_blocks(
    cq: &CutQuadrature,
    class: &DomainClassification,
    space: &BrokenSpace,
    params: &BvpParams,
    h: f64,
    kappa: f64,
    offset: usize,
) -> Result<Vec<Block>, AssemblyError> {
    match params.gp_variant {
        GhostVariant::None => Ok(Vec::new()),
        GhostVariant::FaceJumps | GhostVariant::FullGradient => Ok(class
            .ghost_faces
            .par_iter()
            .map(|&f| face_block(cq, space, f, params, h, kappa, offset))
            .collect()),
        v => {
            let scale = kappa * params.gamma_projection / (h * h);
            let ps = patches(v, cq, class, params.c_s, h)?;
            Ok(ps
                .par_iter()
                .map(|p| projection_block(cq, space, p, scale, offset))
                .collect())
        }
    }
}

/// The ghost-penalty matrix `g_h` alone.
pub fn assemble_ghost_penalty(
    cq: &CutQuadrature,
    class: &DomainClassification,
    space: &BrokenSpace,
    params: &BvpParams,
) -> Result<SparseSym, AssemblyError> {
    let h = penalty_length(cq.mesh(), params.h);
    let mut b = TripletBuilder::new(space.n_dofs());
    for block in ghost_blocks(cq, class, space, params, h, 1.0, 0)? {
        block.push_into(&mut b);
    }
    Ok(b.finish())
}
