use rayon::prelude::*;

use crate::geometry::{DomainClassification, ElementTag};
use crate::linalg::{SparseSym, TripletBuilder};
use crate::quadrature::CutQuadrature;
use crate::space::BrokenSpace;

use super::Block;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GramKind {
    /// `(grad v, grad w)`
    Stiffness,
    /// `(v, w)`
    Mass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GramRegion {
    /// `T_h ∩ Omega`
    Physical,
    /// Full active elements.
    Full,
}

/// Block-diagonal Gram matrix of the broken space.
pub fn assemble_gram(
    cq: &CutQuadrature,
    class: &DomainClassification,
    space: &BrokenSpace,
    kind: GramKind,
    region: GramRegion,
) -> SparseSym {
    let nb = space.dofs_per_element();
    let blocks: Vec<Block> = class
        .active_elements
        .par_iter()
        .map(|&e| {
            let q = match (region, class.element_tag[e]) {
                (GramRegion::Physical, ElementTag::Cut) => cq.volume(e, class.side),
                _ => cq.element_rule(e),
            };
            let mut b = Block::new(space.dofs(e).collect());
            for (x, w) in q.points.iter().zip(&q.weights) {
                let (v, g) = space.eval_both(e, x);
                for i in 0..nb {
                    for j in 0..nb {
                        b.mat[(i, j)] += w * match kind {
                            GramKind::Stiffness => g[i].dot(&g[j]),
                            GramKind::Mass => v[i] * v[j],
                        };
                    }
                }
            }
            b
        })
        .collect();
    let mut builder = TripletBuilder::new(space.n_dofs());
    for b in blocks {
        b.push_into(&mut builder);
    }
    builder.finish()
}
