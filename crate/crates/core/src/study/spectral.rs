//! Dense generalized-eigenvalue checks of the ghost-penalty extension and
//! inverse properties on small meshes.
//!
//! With `G` the ghost-penalty matrix and `S`, `M` the broken stiffness and
//! mass Gram matrices on the physical pieces (`_O`) or the full active
//! elements (`_T`):
//!
//! * `ep1 = max v'S_T v / v'(S_O + G)v`
//! * `ep3 = max v'M_T v / v'(M_O + h^2 G)v`
//! * `ep4 = max v'G v / v'(h^-2 M_T)v`

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assembly::{assemble_ghost_penalty, assemble_gram, GramKind, GramRegion};
use crate::geometry::{classify, DEFAULT_EPS};
use crate::linalg::{symmetric_eigen, symmetric_eigenvalues};
use crate::mesh::BackgroundMesh;
use crate::quadrature::CutQuadrature;
use crate::space::BrokenSpace;

use super::config::StudyConfig;
use super::problem::ManufacturedProblem;
use super::StudyError;

/// Relative size below which an eigenvalue of the denominator counts as zero.
const NULL_TOL: f64 = 1e-11;

/// `max v'Av / v'Bv` for symmetric positive semi-definite `A`, `B`. Directions
/// where both forms vanish are ignored; if `B` vanishes where `A` does not,
/// the ratio is infinite.
pub fn max_generalized_eigenvalue(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let n = b.nrows();
    if n == 0 {
        return 0.0;
    }
    let eig = symmetric_eigen(b);
    let bmax = eig.values.iter().cloned().fold(0.0, f64::max);
    let amax = a.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let (range, null): (Vec<usize>, Vec<usize>) =
        (0..n).partition(|&i| eig.values[i] > NULL_TOL * bmax);
    for &i in &null {
        let q = eig.vectors.column(i);
        if (q.transpose() * a * q)[(0, 0)] > NULL_TOL * amax * n as f64 {
            return f64::INFINITY;
        }
    }
    let mut r = DMatrix::zeros(n, range.len());
    for (c, &i) in range.iter().enumerate() {
        let s = 1.0 / eig.values[i].sqrt();
        r.set_column(c, &(eig.vectors.column(i) * s));
    }
    let c = r.transpose() * a * &r;
    let c = (&c + c.transpose()) * 0.5;
    symmetric_eigenvalues(&c)
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpRow {
    pub delta: f64,
    pub variant: String,
    pub ep1: f64,
    pub ep3: f64,
    pub ep4: f64,
}

/// Extension and inverse ratios of one configuration.
pub fn ep_ratios(
    problem: &ManufacturedProblem,
    n: usize,
    config: &StudyConfig,
) -> Result<[f64; 3], StudyError> {
    let mesh = BackgroundMesh::structured(problem.bbox, n, problem.dim)?;
    let class = classify(&mesh, &problem.level_set, DEFAULT_EPS);
    let space = BrokenSpace::new(&mesh, &class.active_elements, config.order)?;
    let cq = CutQuadrature::new(
        &mesh,
        &problem.level_set,
        class.sign_rule,
        config.depth(),
        config.quad_order(),
    );
    let params = config.bvp_params();
    let h = params.h.unwrap_or_else(|| mesh.spacing());
    let g = assemble_ghost_penalty(&cq, &class, &space, &params)?.to_dense();
    let gram = |k, r| assemble_gram(&cq, &class, &space, k, r).to_dense();
    let s_o = gram(GramKind::Stiffness, GramRegion::Physical);
    let s_t = gram(GramKind::Stiffness, GramRegion::Full);
    let m_o = gram(GramKind::Mass, GramRegion::Physical);
    let m_t = gram(GramKind::Mass, GramRegion::Full);
    let ep1 = max_generalized_eigenvalue(&s_t, &(&s_o + &g));
    let ep3 = max_generalized_eigenvalue(&m_t, &(&m_o + &g * (h * h)));
    let ep4 = max_generalized_eigenvalue(&g, &(&m_t / (h * h)));
    Ok([ep1, ep3, ep4])
}

/// EP ratios along the translation sweep of `config`, per variant.
pub fn run_ep_sweep(config: &StudyConfig) -> Result<Vec<EpRow>, StudyError> {
    let problem = config.problem()?;
    let n = *config
        .n_list(&problem)
        .first()
        .ok_or_else(|| StudyError::Config("empty n_list".into()))?;
    let h = problem.bbox.extent(0).max(problem.bbox.extent(1)) / n as f64;
    let mut rows = Vec::new();
    for variant in config.variants() {
        let c = StudyConfig {
            gp_variant: variant,
            ..config.clone()
        };
        let part: Result<Vec<EpRow>, StudyError> = (0..=config.sweep_steps)
            .into_par_iter()
            .map(|k| {
                let delta = k as f64 * config.sweep_step;
                let moved = problem.translated(c.sweep_direction.offset(delta, h));
                let [ep1, ep3, ep4] = ep_ratios(&moved, n, &c)?;
                Ok(EpRow {
                    delta,
                    variant: variant.name().to_string(),
                    ep1,
                    ep3,
                    ep4,
                })
            })
            .collect();
        rows.extend(part?);
    }
    Ok(rows)
}
