use rayon::prelude::*;

use crate::geometry::{Side, TwoDomainClassification};
use crate::linalg::TripletBuilder;
use crate::quadrature::CutQuadrature;
use crate::space::BrokenSpace;

use super::bvp::SideTerms;
use super::ghost::ghost_blocks;
use super::{
    penalty_length, AssemblyError, Block, FluxFn, GhostVariant, InterfaceParams, ScalarFn,
    SystemOperator, Weighting,
};

/// Data of the two-domain problem: sources and outer Dirichlet data per side,
/// the solution jump `g_D = u_1 - u_2` and the flux jump
/// `g_N = k1 d_n u_1 - k2 d_n u_2` on the interface, evaluated with the
/// normal of the reconstructed interface.
pub struct InterfaceData<'a> {
    pub f: [ScalarFn<'a>; 2],
    pub g: [ScalarFn<'a>; 2],
    pub g_d: ScalarFn<'a>,
    pub g_n: FluxFn<'a>,
}

/// Assemble the coupled system on `V_h1 x V_h2`; unknowns of side 2 follow
/// those of side 1. The interface normal points out of `Omega_1 = {phi < 0}`.
pub fn assemble_interface(
    cq: &CutQuadrature,
    class: &TwoDomainClassification,
    spaces: [&BrokenSpace; 2],
    params: &InterfaceParams,
    data: &InterfaceData,
) -> Result<SystemOperator, AssemblyError> {
    params.validate()?;
    let h = penalty_length(cq.mesh(), params.h);
    let n1 = spaces[0].n_dofs();
    let n = n1 + spaces[1].n_dofs();
    let offsets = [0, n1];
    let mut builder = TripletBuilder::new(n);
    let mut rhs = vec![0.0; n];
    let side_params = params.side_params();
    for (i, side) in [Side::Inside, Side::Outside].into_iter().enumerate() {
        let c = class.side(side);
        let terms = SideTerms {
            cq,
            class: c,
            space: spaces[i],
            kappa: params.kappa(i),
            beta: params.beta_face,
            h,
            offset: offsets[i],
            f: data.f[i],
            g: data.g[i],
            gamma_data: None,
        };
        let empty = terms.assemble(&mut builder, &mut rhs);
        if let Some(&e) = empty.first() {
            if params.gp_variant == GhostVariant::None {
                return Err(AssemblyError::EmptyCutElement(e));
            }
        }
        for b in ghost_blocks(
            cq,
            c,
            spaces[i],
            &side_params,
            h,
            params.kappa(i),
            offsets[i],
        )? {
            b.push_into(&mut builder);
        }
    }

    let (k1, k2) = (params.kappa1, params.kappa2);
    let nb = spaces[0].dofs_per_element();
    let coupling: Vec<(Block, Vec<f64>)> = class
        .cut_elements
        .par_iter()
        .map(|&e| {
            let pieces = cq.element_pieces(e);
            let q = cq.interface_from_pieces(&pieces);
            let (w1, w2, pen) = match params.weighting {
                Weighting::Harmonic => {
                    let (w1, w2) = params.harmonic_weights();
                    (w1, w2, params.beta_gamma() / h)
                }
                Weighting::CutArea => {
                    let (a1, a2) = (pieces.measure(Side::Inside), pieces.measure(Side::Outside));
                    let den = k2 * a1 + k1 * a2;
                    (
                        k2 * a1 / den,
                        k1 * a2 / den,
                        params.beta_gamma_tilde * k1 * k2 * pieces.interface_measure() / den,
                    )
                }
            };
            let dofs = spaces[0]
                .dofs(e)
                .chain(spaces[1].dofs(e).map(|i| i + n1))
                .collect();
            let mut block = Block::new(dofs);
            let mut r = vec![0.0; 2 * nb];
            let mut jump = vec![0.0; 2 * nb];
            let mut flux = vec![0.0; 2 * nb];
            let mut dual = vec![0.0; 2 * nb];
            let normals = q.normals.as_ref().expect("surface rule");
            for ((x, w), nrm) in q.points.iter().zip(&q.weights).zip(normals) {
                let (v1, g1) = spaces[0].eval_both(e, x);
                let (v2, g2) = spaces[1].eval_both(e, x);
                for i in 0..nb {
                    jump[i] = v1[i];
                    jump[nb + i] = -v2[i];
                    flux[i] = w1 * k1 * g1[i].dot(nrm);
                    flux[nb + i] = w2 * k2 * g2[i].dot(nrm);
                    dual[i] = w2 * v1[i];
                    dual[nb + i] = w1 * v2[i];
                }
                block.add_sym_outer(-w, &flux, &jump);
                block.add_outer(w * pen, &jump);
                let (gd, gn) = ((data.g_d)(x), (data.g_n)(x, nrm));
                for i in 0..2 * nb {
                    r[i] += w * (gd * (pen * jump[i] - flux[i]) + gn * dual[i]);
                }
            }
            (block, r)
        })
        .collect();
    for (b, r) in coupling {
        b.push_into(&mut builder);
        for (d, v) in b.dofs.iter().zip(r) {
            rhs[*d] += v;
        }
    }
    Ok(SystemOperator {
        matrix: builder.finish(),
        rhs,
        offsets: offsets.to_vec(),
    })
}
