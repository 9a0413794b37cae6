//! Experiment drivers. Every run rebuilds mesh, classification, spaces and
//! system from a [`StudyConfig`], so individual rows are independent jobs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assembly::{
    assemble_bvp, assemble_interface, GhostVariant, InterfaceData, SystemOperator,
};
use crate::geometry::{
    classify, classify_two_domain, DomainClassification, TwoDomainClassification, DEFAULT_EPS,
};
use crate::linalg::{condition_number, solve, CondReport, SolveMethod};
use crate::mesh::BackgroundMesh;
use crate::quadrature::CutQuadrature;
use crate::simplex::Point;
use crate::space::{BrokenSpace, FieldVector};

use super::config::StudyConfig;
use super::eoc::{EocTable, H1Column};
use super::errors::{compute_errors, compute_interface_errors, ErrorReport};
use super::problem::ManufacturedProblem;
use super::StudyError;

/// Classification of a discretized problem.
#[derive(Clone, Debug)]
pub enum Classes {
    One(DomainClassification),
    Two(TwoDomainClassification),
}

/// Assembled system together with what is needed to interpret its solution.
pub struct Discrete {
    pub mesh: BackgroundMesh,
    pub classes: Classes,
    pub spaces: Vec<BrokenSpace>,
    pub system: SystemOperator,
    /// Penalty length.
    pub h: f64,
}

impl Discrete {
    pub fn cut_quadrature<'a>(
        &'a self,
        problem: &'a ManufacturedProblem,
        config: &StudyConfig,
    ) -> CutQuadrature<'a> {
        let rule = match &self.classes {
            Classes::One(c) => c.sign_rule,
            Classes::Two(c) => c.inner.sign_rule,
        };
        let mut cq = CutQuadrature::new(
            &self.mesh,
            &problem.level_set,
            rule,
            config.depth(),
            config.quad_order(),
        );
        cq.normal_mode = config.normal_mode;
        cq
    }

    /// Errors of the coefficient vector `x`.
    pub fn errors(
        &self,
        problem: &ManufacturedProblem,
        config: &StudyConfig,
        x: &[f64],
    ) -> ErrorReport {
        let cq = self.cut_quadrature(problem, config);
        match &self.classes {
            Classes::One(class) => {
                let u = FieldVector::new(&self.spaces[0], x.to_vec());
                compute_errors(&cq, class, &u, problem, self.h)
            }
            Classes::Two(class) => {
                let n1 = self.spaces[0].n_dofs();
                let u1 = FieldVector::new(&self.spaces[0], x[..n1].to_vec());
                let u2 = FieldVector::new(&self.spaces[1], x[n1..].to_vec());
                let beta_gamma = config.interface_params(problem).beta_gamma();
                compute_interface_errors(&cq, class, [&u1, &u2], problem, beta_gamma, self.h)
            }
        }
    }
}

/// Build and assemble `problem` on an `n`-per-axis background mesh.
pub fn discretize(
    problem: &ManufacturedProblem,
    n: usize,
    config: &StudyConfig,
) -> Result<Discrete, StudyError> {
    let mesh = BackgroundMesh::structured(problem.bbox, n, problem.dim)?;
    let h = config.penalty_h.unwrap_or_else(|| mesh.spacing());
    let order = config.order;
    if problem.is_interface() {
        let class = classify_two_domain(&mesh, &problem.level_set, DEFAULT_EPS);
        let spaces = vec![
            BrokenSpace::new(&mesh, &class.inner.active_elements, order)?,
            BrokenSpace::new(&mesh, &class.outer.active_elements, order)?,
        ];
        let params = config.interface_params(problem);
        let f = [&|x: &Point| problem.source(0, x), &|x: &Point| {
            problem.source(1, x)
        }] as [&(dyn Fn(&Point) -> f64 + Sync); 2];
        let g = [&|x: &Point| problem.dirichlet(0, x), &|x: &Point| {
            problem.dirichlet(1, x)
        }] as [&(dyn Fn(&Point) -> f64 + Sync); 2];
        let g_d = |x: &Point| problem.jump(x);
        let g_n = |x: &Point, n: &Point| problem.flux_jump(x, n);
        let data = InterfaceData {
            f,
            g,
            g_d: &g_d,
            g_n: &g_n,
        };
        let system = {
            let mut cq = CutQuadrature::new(
                &mesh,
                &problem.level_set,
                class.inner.sign_rule,
                config.depth(),
                config.quad_order(),
            );
            cq.normal_mode = config.normal_mode;
            assemble_interface(&cq, &class, [&spaces[0], &spaces[1]], &params, &data)?
        };
        Ok(Discrete {
            mesh,
            classes: Classes::Two(class),
            spaces,
            system,
            h,
        })
    } else {
        let class = classify(&mesh, &problem.level_set, DEFAULT_EPS);
        let spaces = vec![BrokenSpace::new(&mesh, &class.active_elements, order)?];
        let f = |x: &Point| problem.source(0, x);
        let g = |x: &Point| problem.dirichlet(0, x);
        let system = {
            let mut cq = CutQuadrature::new(
                &mesh,
                &problem.level_set,
                class.sign_rule,
                config.depth(),
                config.quad_order(),
            );
            cq.normal_mode = config.normal_mode;
            assemble_bvp(&cq, &class, &spaces[0], &config.bvp_params(), &f, &g)?
        };
        Ok(Discrete {
            mesh,
            classes: Classes::One(class),
            spaces,
            system,
            h,
        })
    }
}

/// Outcome of one solve.
#[derive(Clone, Debug)]
pub struct CaseResult {
    pub n: usize,
    pub errors: ErrorReport,
    pub residual: f64,
    pub method: SolveMethod,
    pub condition: Option<CondReport>,
    pub coefficients: Vec<f64>,
}

/// Discretize, solve and measure errors; the condition number is estimated
/// when `condition` is set.
pub fn solve_case(
    problem: &ManufacturedProblem,
    n: usize,
    config: &StudyConfig,
    condition: bool,
) -> Result<CaseResult, StudyError> {
    let d = discretize(problem, n, config)?;
    solve_discrete(&d, problem, n, config, condition)
}

pub fn solve_discrete(
    d: &Discrete,
    problem: &ManufacturedProblem,
    n: usize,
    config: &StudyConfig,
    condition: bool,
) -> Result<CaseResult, StudyError> {
    let sol = solve(&d.system.matrix, &d.system.rhs)?;
    let errors = d.errors(problem, config, &sol.x);
    let condition = if condition {
        Some(condition_number(&d.system.matrix, config.cond_tol)?)
    } else {
        None
    };
    Ok(CaseResult {
        n,
        errors,
        residual: sol.residual,
        method: sol.method,
        condition,
        coefficients: sol.x,
    })
}

/// Mesh sequence study; failed meshes become NaN rows.
pub fn run_convergence(config: &StudyConfig) -> Result<EocTable, StudyError> {
    let problem = config.problem()?;
    let column = if problem.is_interface() {
        H1Column::Semi
    } else {
        H1Column::Full
    };
    let results = config
        .n_list(&problem)
        .into_iter()
        .map(|n| {
            (
                n,
                solve_case(&problem, n, config, false)
                    .map(|r| r.errors)
                    .map_err(|e| e.to_string()),
            )
        })
        .collect();
    Ok(EocTable::from_results(results, column))
}

/// Convergence study of a two-domain problem (`h1` is the `kappa`-weighted semi-norm).
pub fn run_interface_convergence(config: &StudyConfig) -> Result<EocTable, StudyError> {
    let problem = config.problem()?;
    if !problem.is_interface() {
        return Err(StudyError::Config(format!(
            "'{}' is not an interface problem",
            problem.name
        )));
    }
    run_convergence(config)
}

/// Condition numbers along a mesh sequence: `(h, kappa)` per mesh.
pub fn run_condition_scaling(config: &StudyConfig) -> Result<Vec<(f64, CondReport)>, StudyError> {
    let problem = config.problem()?;
    config
        .n_list(&problem)
        .into_iter()
        .map(|n| {
            let d = discretize(&problem, n, config)?;
            let c = condition_number(&d.system.matrix, config.cond_tol)?;
            Ok((d.h, c))
        })
        .collect()
}

/// One translated configuration of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub delta: f64,
    pub variant: String,
    pub l2: f64,
    pub h1: f64,
    pub kappa: f64,
    pub converged: bool,
}

fn sweep_row(
    problem: &ManufacturedProblem,
    n: usize,
    delta: f64,
    config: &StudyConfig,
) -> SweepRow {
    let variant = config.gp_variant.name().to_string();
    let failed = SweepRow {
        delta,
        variant: variant.clone(),
        l2: f64::NAN,
        h1: f64::NAN,
        kappa: f64::NAN,
        converged: false,
    };
    let h = problem.bbox.extent(0).max(problem.bbox.extent(1)) / n as f64;
    let moved = problem.translated(config.sweep_direction.offset(delta, h));
    let Ok(d) = discretize(&moved, n, config) else {
        return failed;
    };
    let Ok(sol) = solve(&d.system.matrix, &d.system.rhs) else {
        return failed;
    };
    let (l2, h1) = if config.sweep_errors {
        let e = d.errors(&moved, config, &sol.x);
        (
            e.l2,
            if moved.is_interface() {
                e.h1_semi
            } else {
                e.h1_full
            },
        )
    } else {
        (f64::NAN, f64::NAN)
    };
    let kappa = if config.sweep_condition {
        match condition_number(&d.system.matrix, config.cond_tol) {
            Ok(c) => c.kappa,
            Err(_) => return failed,
        }
    } else {
        f64::NAN
    };
    let finite = |v: f64| v.is_finite() || v.is_nan();
    SweepRow {
        delta,
        variant,
        l2,
        h1,
        kappa,
        converged: finite(l2) && finite(h1) && kappa != f64::INFINITY,
    }
}

/// Translate the level set through the mesh, one row per step and variant,
/// ordered by variant then step. The mesh is the first entry of the mesh list.
pub fn run_translation_sweep(config: &StudyConfig) -> Result<Vec<SweepRow>, StudyError> {
    let problem = config.problem()?;
    let n = *config
        .n_list(&problem)
        .first()
        .ok_or_else(|| StudyError::Config("empty n_list".into()))?;
    let mut rows = Vec::new();
    for variant in config.variants() {
        let c = StudyConfig {
            gp_variant: variant,
            ..config.clone()
        };
        let part: Vec<SweepRow> = (0..=config.sweep_steps)
            .into_par_iter()
            .map(|k| sweep_row(&problem, n, k as f64 * config.sweep_step, &c))
            .collect();
        rows.extend(part);
    }
    Ok(rows)
}

/// `max / min` of a column over converged rows; `None` without two finite values.
pub fn fluctuation<F: Fn(&SweepRow) -> f64>(rows: &[SweepRow], column: F) -> Option<f64> {
    let vals: Vec<f64> = rows
        .iter()
        .filter(|r| r.converged)
        .map(column)
        .filter(|v| v.is_finite() && *v > 0.0)
        .collect();
    if vals.len() < 2 {
        return None;
    }
    let max = vals.iter().cloned().fold(f64::MIN, f64::max);
    let min = vals.iter().cloned().fold(f64::MAX, f64::min);
    Some(max / min)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub scale: f64,
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub fluctuation: f64,
    pub failed: usize,
}

/// Repeat the condition sweep with all ghost-penalty parameters multiplied by each scale.
pub fn run_parameter_scaling(config: &StudyConfig) -> Result<Vec<ScalingRow>, StudyError> {
    config
        .scales
        .iter()
        .map(|&scale| {
            let c = StudyConfig {
                gamma: config.gamma.iter().map(|g| g * scale).collect(),
                gamma_projection: config.gamma_projection * scale,
                sweep_variants: vec![config.gp_variant],
                sweep_condition: true,
                sweep_errors: false,
                ..config.clone()
            };
            let rows = run_translation_sweep(&c)?;
            let ok: Vec<f64> = rows
                .iter()
                .filter(|r| r.converged && r.kappa.is_finite())
                .map(|r| r.kappa)
                .collect();
            let kappa_min = ok.iter().cloned().fold(f64::INFINITY, f64::min);
            let kappa_max = ok.iter().cloned().fold(0.0, f64::max);
            Ok(ScalingRow {
                scale,
                kappa_min,
                kappa_max,
                fluctuation: kappa_max / kappa_min,
                failed: rows.len() - ok.len(),
            })
        })
        .collect()
}

/// Serialize rows to CSV with a header.
pub fn write_rows<W: std::io::Write, T: Serialize>(w: W, rows: &[T]) -> csv::Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

/// Rows of a given variant.
pub fn rows_of(rows: &[SweepRow], variant: GhostVariant) -> Vec<SweepRow> {
    rows.iter()
        .filter(|r| r.variant == variant.name())
        .cloned()
        .collect()
}
