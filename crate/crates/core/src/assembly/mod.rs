//! Stiffness matrices and load vectors of the cut discontinuous Galerkin
//! discretizations: one-domain boundary-value problem with Nitsche boundary
//! terms, ghost penalties, and the two-domain interface problem.

mod bvp;
mod ghost;
mod gram;
mod interface;

pub use bvp::assemble_bvp;
pub use ghost::{assemble_ghost_penalty, patches, Patch};
pub use gram::{assemble_gram, GramKind, GramRegion};
pub use interface::{assemble_interface, InterfaceData};

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::linalg::{SparseSym, TripletBuilder};
use crate::simplex::Point;

/// Scalar field callback used for sources and boundary data.
pub type ScalarFn<'a> = &'a (dyn Fn(&Point) -> f64 + Sync);

/// Callback of position and unit normal, used for flux data.
pub type FluxFn<'a> = &'a (dyn Fn(&Point, &Point) -> f64 + Sync);

#[derive(Debug, Error, PartialEq)]
pub enum AssemblyError {
    #[error("cut element {0} has an empty physical part and no ghost penalty is active (singular system)")]
    EmptyCutElement(usize),
    #[error(
        "small cut element {0} has no fat neighbour in its vertex patch (geometry under-resolved)"
    )]
    NoFatNeighbour(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Ghost-penalty family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GhostVariant {
    /// Jumps of all normal derivatives `0..=k` over full ghost faces.
    FaceJumps,
    /// `gamma_1 h` times the jump of the full gradient; no value jumps.
    FullGradient,
    /// Local projection on face-neighbour pairs.
    ProjectionP1,
    /// Local projection on vertex patches of cut elements.
    ProjectionP2,
    /// Local projection on small-cut elements agglomerated with a fat neighbour.
    ProjectionP3,
    None,
}

impl GhostVariant {
    pub const ALL: [GhostVariant; 6] = [
        GhostVariant::FaceJumps,
        GhostVariant::FullGradient,
        GhostVariant::ProjectionP1,
        GhostVariant::ProjectionP2,
        GhostVariant::ProjectionP3,
        GhostVariant::None,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GhostVariant::FaceJumps => "face_jumps",
            GhostVariant::FullGradient => "full_gradient",
            GhostVariant::ProjectionP1 => "projection_p1",
            GhostVariant::ProjectionP2 => "projection_p2",
            GhostVariant::ProjectionP3 => "projection_p3",
            GhostVariant::None => "none",
        }
    }

    pub fn is_projection(self) -> bool {
        matches!(
            self,
            GhostVariant::ProjectionP1 | GhostVariant::ProjectionP2 | GhostVariant::ProjectionP3
        )
    }
}

impl fmt::Display for GhostVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GhostVariant {
    type Err = AssemblyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        GhostVariant::ALL
            .into_iter()
            .find(|v| v.name() == key || v.name().replace('_', "") == key)
            .ok_or_else(|| {
                AssemblyError::InvalidParameter(format!("unknown ghost penalty variant '{s}'"))
            })
    }
}

/// Parameters of the one-domain formulation.
#[derive(Clone, Debug, PartialEq)]
pub struct BvpParams {
    /// Nitsche and interior-penalty parameter.
    pub beta: f64,
    /// `gamma_j` for the face-jump penalty, `j = 0..=3`.
    pub gamma: Vec<f64>,
    pub gp_variant: GhostVariant,
    /// Scale of the projection penalties `gamma h^-2 (v - pi v, w - pi w)_P`.
    pub gamma_projection: f64,
    /// Small-cut threshold: `|T ∩ Omega| <= c_s h^d`.
    pub c_s: f64,
    /// Length used in all penalty scalings; `None` means the axis spacing.
    pub h: Option<f64>,
}

impl Default for BvpParams {
    fn default() -> Self {
        BvpParams {
            beta: 50.0,
            gamma: vec![50.0, 0.1, 0.1, 0.1],
            gp_variant: GhostVariant::FaceJumps,
            gamma_projection: 10.0,
            c_s: 0.1,
            h: None,
        }
    }
}

impl BvpParams {
    pub fn gamma_j(&self, j: usize) -> f64 {
        self.gamma.get(j).copied().unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<(), AssemblyError> {
        if !(self.beta > 0.0) {
            return Err(AssemblyError::InvalidParameter(format!(
                "beta must be positive, got {}",
                self.beta
            )));
        }
        if self.gamma.iter().any(|g| !(*g >= 0.0)) || !(self.gamma_projection >= 0.0) {
            return Err(AssemblyError::InvalidParameter(
                "ghost penalty parameters must be non-negative".into(),
            ));
        }
        if !(self.c_s > 0.0) {
            return Err(AssemblyError::InvalidParameter(
                "c_s must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Scale `gamma_0..` and the projection scale by `factor`.
    pub fn scale_ghost(&self, factor: f64) -> Self {
        BvpParams {
            gamma: self.gamma.iter().map(|g| g * factor).collect(),
            gamma_projection: self.gamma_projection * factor,
            ..self.clone()
        }
    }
}

/// Interface weighting scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weighting {
    /// `omega_1 = k2/(k1+k2)`, `omega_2 = k1/(k1+k2)`, `beta_G = beta~ 2 k1 k2/(k1+k2)`.
    Harmonic,
    /// Weights from the cut volumes of each element, penalty from the cut
    /// volumes and the interface measure.
    CutArea,
}

impl FromStr for Weighting {
    type Err = AssemblyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "harmonic" => Ok(Weighting::Harmonic),
            "cut_area" | "cutarea" | "area" => Ok(Weighting::CutArea),
            _ => Err(AssemblyError::InvalidParameter(format!(
                "unknown weighting '{s}'"
            ))),
        }
    }
}

/// Parameters of the two-domain formulation.
#[derive(Clone, Debug, PartialEq)]
pub struct InterfaceParams {
    pub kappa1: f64,
    pub kappa2: f64,
    /// Interior-face penalty; scaled by `kappa_i` on side `i`.
    pub beta_face: f64,
    pub beta_gamma_tilde: f64,
    pub weighting: Weighting,
    pub gamma: Vec<f64>,
    pub gp_variant: GhostVariant,
    pub gamma_projection: f64,
    pub c_s: f64,
    pub h: Option<f64>,
}

impl Default for InterfaceParams {
    fn default() -> Self {
        let b = BvpParams::default();
        InterfaceParams {
            kappa1: 1.0,
            kappa2: 1.0,
            beta_face: b.beta,
            beta_gamma_tilde: 50.0,
            weighting: Weighting::Harmonic,
            gamma: b.gamma,
            gp_variant: b.gp_variant,
            gamma_projection: b.gamma_projection,
            c_s: b.c_s,
            h: None,
        }
    }
}

impl InterfaceParams {
    pub fn kappa(&self, side: usize) -> f64 {
        if side == 0 {
            self.kappa1
        } else {
            self.kappa2
        }
    }

    /// Harmonic weights `(omega_1, omega_2)`.
    pub fn harmonic_weights(&self) -> (f64, f64) {
        let s = self.kappa1 + self.kappa2;
        (self.kappa2 / s, self.kappa1 / s)
    }

    /// `beta~ 2 k1 k2 / (k1 + k2)`.
    pub fn beta_gamma(&self) -> f64 {
        self.beta_gamma_tilde * 2.0 * self.kappa1 * self.kappa2 / (self.kappa1 + self.kappa2)
    }

    /// Single-side parameters (face penalty and ghost penalty settings).
    pub fn side_params(&self) -> BvpParams {
        BvpParams {
            beta: self.beta_face,
            gamma: self.gamma.clone(),
            gp_variant: self.gp_variant,
            gamma_projection: self.gamma_projection,
            c_s: self.c_s,
            h: self.h,
        }
    }

    pub fn validate(&self) -> Result<(), AssemblyError> {
        if !(self.kappa1 > 0.0 && self.kappa2 > 0.0) {
            return Err(AssemblyError::InvalidParameter(
                "diffusion coefficients must be positive".into(),
            ));
        }
        if !(self.beta_gamma_tilde > 0.0) {
            return Err(AssemblyError::InvalidParameter(
                "interface penalty must be positive".into(),
            ));
        }
        self.side_params().validate()
    }
}

/// Assembled linear system.
#[derive(Clone, Debug)]
pub struct SystemOperator {
    pub matrix: SparseSym,
    pub rhs: Vec<f64>,
    /// Start of each field block in the unknown vector (one entry per side).
    pub offsets: Vec<usize>,
}

impl SystemOperator {
    pub fn n(&self) -> usize {
        self.rhs.len()
    }
}

/// Dense symmetric block on a list of global DOFs.
#[derive(Clone, Debug)]
pub(crate) struct Block {
    pub dofs: Vec<usize>,
    pub mat: DMatrix<f64>,
}

impl Block {
    pub fn new(dofs: Vec<usize>) -> Self {
        let n = dofs.len();
        Block {
            dofs,
            mat: DMatrix::zeros(n, n),
        }
    }

    /// `mat += c a b^T + c b a^T`
    pub fn add_sym_outer(&mut self, c: f64, a: &[f64], b: &[f64]) {
        for i in 0..a.len() {
            for j in 0..a.len() {
                self.mat[(i, j)] += c * (a[i] * b[j] + b[i] * a[j]);
            }
        }
    }

    /// `mat += c a a^T`
    pub fn add_outer(&mut self, c: f64, a: &[f64]) {
        for i in 0..a.len() {
            let ca = c * a[i];
            for j in 0..a.len() {
                self.mat[(i, j)] += ca * a[j];
            }
        }
    }

    pub fn push_into(&self, b: &mut TripletBuilder) {
        b.push_block(&self.dofs, &self.dofs, &self.mat);
    }
}

pub(crate) fn penalty_length(mesh: &crate::mesh::BackgroundMesh, h: Option<f64>) -> f64 {
    h.unwrap_or_else(|| mesh.spacing())
}

#[cfg(test)]
mod tests;
