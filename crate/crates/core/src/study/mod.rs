//! Manufactured problems, error norms, convergence tables and the experiment
//! drivers behind the command-line tool.

mod config;
mod eoc;
mod errors;
mod exact;
mod problem;
mod runs;
mod spectral;

pub use config::{StudyConfig, SweepDirection};
pub use eoc::{eoc, ConvergenceRow, EocTable, H1Column};
pub use errors::{
    compute_errors, compute_interface_errors, ErrorReport, OVERSAMPLE_DEPTH, OVERSAMPLE_ORDER,
};
pub use exact::Exact;
pub use problem::{builtin_problem, patch_polynomial, ManufacturedProblem, BUILTIN_PROBLEMS};
pub use runs::{
    discretize, fluctuation, rows_of, run_condition_scaling, run_convergence,
    run_interface_convergence, run_parameter_scaling, run_translation_sweep, solve_case,
    solve_discrete, write_rows, CaseResult, Classes, Discrete, ScalingRow, SweepRow,
};
pub use spectral::{ep_ratios, max_generalized_eigenvalue, run_ep_sweep, EpRow};

use thiserror::Error;

use crate::assembly::AssemblyError;
use crate::linalg::SolveError;
use crate::mesh::MeshError;
use crate::space::SpaceError;

#[derive(Debug, Error)]
pub enum StudyError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}
