//! Plain-text study configuration: one `key = value` per line, `#` comments,
//! lists separated by commas or whitespace.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::assembly::{BvpParams, GhostVariant, InterfaceParams, Weighting};
use crate::quadrature::NormalMode;
use crate::simplex::Point;

use super::problem::{builtin_problem, ManufacturedProblem};
use super::StudyError;

/// Direction of a translation sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SweepDirection {
    /// Offset `delta * d`.
    Absolute(Point),
    /// Offset `delta * h * d` with the mesh spacing `h`.
    MeshScaled(Point),
}

impl SweepDirection {
    pub fn offset(&self, delta: f64, h: f64) -> Point {
        match self {
            SweepDirection::Absolute(d) => d * delta,
            SweepDirection::MeshScaled(d) => d * (delta * h),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudyConfig {
    pub problem: String,
    pub order: usize,
    /// Overrides the problem's default mesh sequence.
    pub n_list: Option<Vec<usize>>,
    pub beta: f64,
    pub gamma: Vec<f64>,
    pub gp_variant: GhostVariant,
    pub gamma_projection: f64,
    pub c_s: f64,
    /// Length in the penalty scalings; the mesh spacing when absent.
    pub penalty_h: Option<f64>,
    pub weighting: Weighting,
    pub beta_gamma: f64,
    pub kappa: Option<[f64; 2]>,
    /// Cut refinement depth; `order + 1` when absent.
    pub geometry_depth: Option<usize>,
    /// Quadrature order is `quad_order_factor * order`.
    pub quad_order_factor: usize,
    pub normal_mode: NormalMode,
    pub out_csv: Option<String>,
    pub sweep_steps: usize,
    pub sweep_step: f64,
    pub sweep_direction: SweepDirection,
    /// Variants compared in a sweep; `gp_variant` alone when empty.
    pub sweep_variants: Vec<GhostVariant>,
    pub sweep_condition: bool,
    pub sweep_errors: bool,
    pub scales: Vec<f64>,
    /// Tolerance of the condition-number estimate.
    pub cond_tol: f64,
    pub condition: bool,
    pub dump_matrix: Option<String>,
    pub dump_mesh: Option<String>,
}

impl Default for StudyConfig {
    fn default() -> Self {
        let b = BvpParams::default();
        let i = InterfaceParams::default();
        StudyConfig {
            problem: "flower2d".into(),
            order: 1,
            n_list: None,
            beta: b.beta,
            gamma: b.gamma,
            gp_variant: b.gp_variant,
            gamma_projection: b.gamma_projection,
            c_s: b.c_s,
            penalty_h: None,
            weighting: Weighting::Harmonic,
            beta_gamma: i.beta_gamma_tilde,
            kappa: None,
            geometry_depth: None,
            quad_order_factor: 2,
            normal_mode: NormalMode::Facet,
            out_csv: None,
            sweep_steps: 500,
            sweep_step: 2e-4,
            sweep_direction: SweepDirection::MeshScaled(Point::new(1.0, 1.0, 0.0)),
            sweep_variants: Vec::new(),
            sweep_condition: true,
            sweep_errors: true,
            scales: (-6..=6).map(|k| 10f64.powi(k)).collect(),
            cond_tol: 1e-6,
            condition: false,
            dump_matrix: None,
            dump_mesh: None,
        }
    }
}

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T, StudyError> {
    v.trim()
        .parse()
        .map_err(|_| StudyError::Config(format!("bad value for '{key}': '{v}'")))
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>, StudyError> {
    v.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| parse(key, s))
        .collect()
}

fn parse_bool(key: &str, v: &str) -> Result<bool, StudyError> {
    match v.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(StudyError::Config(format!("bad value for '{key}': '{v}'"))),
    }
}

fn parse_point(key: &str, v: &str) -> Result<Point, StudyError> {
    let c: Vec<f64> = parse_list(key, v)?;
    match c[..] {
        [x, y] => Ok(Point::new(x, y, 0.0)),
        [x, y, z] => Ok(Point::new(x, y, z)),
        _ => Err(StudyError::Config(format!(
            "'{key}' needs 2 or 3 components"
        ))),
    }
}

impl StudyConfig {
    pub fn from_file(path: &Path) -> Result<Self, StudyError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| StudyError::Io(format!("{}: {e}", path.display())))?;
        text.parse()
    }

    /// Raw `key -> value` pairs, later lines overriding earlier ones.
    pub fn pairs(text: &str) -> Result<BTreeMap<String, String>, StudyError> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                StudyError::Config(format!("line {}: expected 'key = value'", i + 1))
            })?;
            map.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
        }
        Ok(map)
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<(), StudyError> {
        let err = |e: crate::assembly::AssemblyError| StudyError::Config(e.to_string());
        match key {
            "problem" => self.problem = v.to_string(),
            "order" => self.order = parse(key, v)?,
            "n_list" => self.n_list = Some(parse_list(key, v)?),
            "beta" => self.beta = parse(key, v)?,
            "gamma0" | "gamma1" | "gamma2" | "gamma3" => {
                let j = key[5..].parse::<usize>().expect("digit");
                if self.gamma.len() <= j {
                    self.gamma.resize(j + 1, 0.0);
                }
                self.gamma[j] = parse(key, v)?;
            }
            "gp_variant" => self.gp_variant = v.parse().map_err(err)?,
            "gamma_projection" => self.gamma_projection = parse(key, v)?,
            "c_s" => self.c_s = parse(key, v)?,
            "penalty_h" => self.penalty_h = Some(parse(key, v)?),
            "weighting" => self.weighting = v.parse().map_err(err)?,
            "beta_gamma" => self.beta_gamma = parse(key, v)?,
            "kappa" => {
                let k: Vec<f64> = parse_list(key, v)?;
                match k[..] {
                    [a, b] => self.kappa = Some([a, b]),
                    _ => return Err(StudyError::Config("'kappa' needs two values".into())),
                }
            }
            "geometry_depth" => self.geometry_depth = Some(parse(key, v)?),
            "quad_order_factor" => self.quad_order_factor = parse(key, v)?,
            "normal_mode" => {
                self.normal_mode = match v.trim() {
                    "facet" => NormalMode::Facet,
                    "gradient" => NormalMode::Gradient,
                    _ => return Err(StudyError::Config(format!("unknown normal mode '{v}'"))),
                }
            }
            "out_csv" => self.out_csv = Some(v.to_string()),
            "sweep_steps" => self.sweep_steps = parse(key, v)?,
            "sweep_step" => self.sweep_step = parse(key, v)?,
            "sweep_direction" => {
                let d = parse_point(key, v)?;
                self.sweep_direction = match self.sweep_direction {
                    SweepDirection::Absolute(_) => SweepDirection::Absolute(d),
                    SweepDirection::MeshScaled(_) => SweepDirection::MeshScaled(d),
                };
            }
            "sweep_scale_by_h" => {
                let d = match self.sweep_direction {
                    SweepDirection::Absolute(d) | SweepDirection::MeshScaled(d) => d,
                };
                self.sweep_direction = if parse_bool(key, v)? {
                    SweepDirection::MeshScaled(d)
                } else {
                    SweepDirection::Absolute(d)
                };
            }
            "sweep_variants" => {
                self.sweep_variants = v
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.parse())
                    .collect::<Result<_, _>>()
                    .map_err(err)?
            }
            "sweep_condition" => self.sweep_condition = parse_bool(key, v)?,
            "sweep_errors" => self.sweep_errors = parse_bool(key, v)?,
            "scales" => self.scales = parse_list(key, v)?,
            "cond_tol" => self.cond_tol = parse(key, v)?,
            "condition" => self.condition = parse_bool(key, v)?,
            "dump_matrix" => self.dump_matrix = Some(v.to_string()),
            "dump_mesh" => self.dump_mesh = Some(v.to_string()),
            _ => return Err(StudyError::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn depth(&self) -> usize {
        self.geometry_depth.unwrap_or(self.order + 1)
    }

    pub fn quad_order(&self) -> usize {
        (self.quad_order_factor * self.order).max(1)
    }

    pub fn problem(&self) -> Result<ManufacturedProblem, StudyError> {
        let p = builtin_problem(&self.problem, self.order)?;
        Ok(match self.kappa {
            Some(k) if p.is_interface() => p.with_kappa(&k),
            Some(k) => p.with_kappa(&k[..1]),
            None => p,
        })
    }

    pub fn n_list(&self, problem: &ManufacturedProblem) -> Vec<usize> {
        self.n_list
            .clone()
            .unwrap_or_else(|| problem.n_list.clone())
    }

    pub fn bvp_params(&self) -> BvpParams {
        BvpParams {
            beta: self.beta,
            gamma: self.gamma.clone(),
            gp_variant: self.gp_variant,
            gamma_projection: self.gamma_projection,
            c_s: self.c_s,
            h: self.penalty_h,
        }
    }

    pub fn interface_params(&self, problem: &ManufacturedProblem) -> InterfaceParams {
        InterfaceParams {
            kappa1: problem.kappa(0),
            kappa2: problem.kappa(1),
            beta_face: self.beta,
            beta_gamma_tilde: self.beta_gamma,
            weighting: self.weighting,
            gamma: self.gamma.clone(),
            gp_variant: self.gp_variant,
            gamma_projection: self.gamma_projection,
            c_s: self.c_s,
            h: self.penalty_h,
        }
    }

    pub fn variants(&self) -> Vec<GhostVariant> {
        if self.sweep_variants.is_empty() {
            vec![self.gp_variant]
        } else {
            self.sweep_variants.clone()
        }
    }
}

impl FromStr for StudyConfig {
    type Err = StudyError;

    fn from_str(text: &str) -> Result<Self, StudyError> {
        let mut c = StudyConfig::default();
        let pairs = StudyConfig::pairs(text)?;
        // direction kind before its components
        if let Some(v) = pairs.get("sweep_scale_by_h") {
            c.set("sweep_scale_by_h", v)?;
        }
        for (k, v) in &pairs {
            c.set(k, v)?;
        }
        Ok(c)
    }
}
