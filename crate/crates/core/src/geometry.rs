//! Level-set geometries and classification of background-mesh entities.
//!
//! Convention: `phi < 0` inside the physical domain (or inside `Omega_1` for
//! interface problems). Vertex values with `|phi| <= eps * h` are pushed to
//! `+eps * h`, so every vertex has a strict sign and element tags are total.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::mesh::BackgroundMesh;
use crate::real::{Real, Taylor2};
use crate::simplex::Point;

pub trait LevelSet: Send + Sync {
    fn value(&self, x: &Point) -> f64;
    fn gradient(&self, x: &Point) -> Point;
}

/// Which side of the zero level set a quantity refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// `phi < 0`
    Inside,
    /// `phi > 0`
    Outside,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Inside => 1.0,
            Side::Outside => -1.0,
        }
    }
}

/// Deterministic tie-break for vertex values on the zero level set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignRule {
    tol: f64,
}

impl SignRule {
    pub fn new(eps: f64, h: f64) -> Self {
        SignRule {
            tol: eps.max(0.0) * h,
        }
    }

    /// The perturbed value: never zero, pushed outside when within tolerance.
    pub fn apply(&self, v: f64) -> f64 {
        if v.abs() <= self.tol {
            self.tol.max(f64::MIN_POSITIVE)
        } else {
            v
        }
    }

    /// Perturbed value as seen from `side`: negative means "in this side".
    pub fn side_value(&self, v: f64, side: Side) -> f64 {
        side.sign() * self.apply(v)
    }
}

pub const DEFAULT_EPS: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    /// `n . x - offset`
    HalfSpace {
        normal: [f64; 3],
        offset: f64,
    },
    /// `|x - c|^2 - r^2`
    Ball {
        center: [f64; 3],
        radius: f64,
    },
    /// `sqrt(x^2 + y^2) - r0 - r1 cos(atan2(y, x))`
    Flower2d {
        r0: f64,
        r1: f64,
    },
    /// `|x| - r + (r / r0) cos(5 atan2(y, x)) cos(pi z)`
    Flower3d {
        r: f64,
        r0: f64,
    },
    /// `min_k |x - c_k| - r`
    UnionOfBalls {
        centers: Vec<[f64; 3]>,
        radius: f64,
    },
    /// Balls of radius `ball_radius` at `(+-corner, +-corner, +-corner)` united
    /// with a cylinder of radius `cylinder_radius` about the x-axis.
    CornerBallsCylinder {
        corner: f64,
        ball_radius: f64,
        cylinder_radius: f64,
    },
    Constant(f64),
}

impl Shape {
    pub fn eval<T: Real>(&self, x: [T; 3]) -> T {
        match self {
            Shape::HalfSpace { normal, offset } => {
                x[0] * normal[0] + x[1] * normal[1] + x[2] * normal[2] - *offset
            }
            Shape::Ball { center, radius } => {
                let d = [x[0] - center[0], x[1] - center[1], x[2] - center[2]];
                d[0] * d[0] + d[1] * d[1] + d[2] * d[2] - radius * radius
            }
            Shape::Flower2d { r0, r1 } => {
                (x[0] * x[0] + x[1] * x[1]).sqrt() - *r0 - x[1].atan2(x[0]).cos() * *r1
            }
            Shape::Flower3d { r, r0 } => {
                let rho = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                rho - *r + (x[1].atan2(x[0]) * 5.0).cos() * (x[2] * PI).cos() * (r / r0)
            }
            Shape::UnionOfBalls { centers, radius } => {
                let dist = |c: &[f64; 3]| {
                    let d = [x[0] - c[0], x[1] - c[1], x[2] - c[2]];
                    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt() - *radius
                };
                centers
                    .iter()
                    .map(dist)
                    .reduce(Real::min)
                    .expect("at least one ball")
            }
            Shape::CornerBallsCylinder {
                corner,
                ball_radius,
                cylinder_radius,
            } => {
                let mut best = (x[1] * x[1] + x[2] * x[2]).sqrt() - *cylinder_radius;
                for c in corner_points(*corner) {
                    let d = [x[0] - c[0], x[1] - c[1], x[2] - c[2]];
                    best =
                        best.min((d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt() - *ball_radius);
                }
                best
            }
            Shape::Constant(c) => T::cst(*c),
        }
    }
}

fn corner_points(a: f64) -> Vec<[f64; 3]> {
    let mut out = Vec::with_capacity(8);
    for sx in [-a, a] {
        for sy in [-a, a] {
            for sz in [-a, a] {
                out.push([sx, sy, sz]);
            }
        }
    }
    out
}

/// A catalogue shape, optionally translated: `phi(x) = shape(x - shift)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticLevelSet {
    pub name: String,
    pub shape: Shape,
    pub shift: Point,
}

impl AnalyticLevelSet {
    pub fn new(name: impl Into<String>, shape: Shape) -> Self {
        AnalyticLevelSet {
            name: name.into(),
            shape,
            shift: Point::zeros(),
        }
    }

    /// `translate(phi, offset)(x) = phi(x - offset)`.
    pub fn translate(&self, offset: Point) -> Self {
        AnalyticLevelSet {
            shift: self.shift + offset,
            ..self.clone()
        }
    }
}

impl LevelSet for AnalyticLevelSet {
    fn value(&self, x: &Point) -> f64 {
        let y = x - self.shift;
        self.shape.eval([y.x, y.y, y.z])
    }

    fn gradient(&self, x: &Point) -> Point {
        let y = x - self.shift;
        let mut g = Point::zeros();
        for a in 0..3 {
            let mut arg = [Taylor2::cst(y.x), Taylor2::cst(y.y), Taylor2::cst(y.z)];
            arg[a] = Taylor2::variable(y[a]);
            g[a] = self.shape.eval(arg).d1;
        }
        g
    }
}

impl fmt::Display for AnalyticLevelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// Level set from an arbitrary closure; gradient by central differences with
/// step `1e-6 * h`.
pub struct FnLevelSet<F> {
    f: F,
    step: f64,
}

impl<F: Fn(&Point) -> f64 + Send + Sync> FnLevelSet<F> {
    pub fn new(f: F, h: f64) -> Self {
        FnLevelSet { f, step: 1e-6 * h }
    }
}

impl<F: Fn(&Point) -> f64 + Send + Sync> LevelSet for FnLevelSet<F> {
    fn value(&self, x: &Point) -> f64 {
        (self.f)(x)
    }

    fn gradient(&self, x: &Point) -> Point {
        let mut g = Point::zeros();
        for a in 0..3 {
            let mut e = Point::zeros();
            e[a] = self.step;
            g[a] = ((self.f)(&(x + e)) - (self.f)(&(x - e))) / (2.0 * self.step);
        }
        g
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CatalogueError {
    #[error("unknown level set `{0}`")]
    UnknownName(String),
    #[error("level set `{name}` expects {expected} parameters, got {got}")]
    BadParameters {
        name: String,
        expected: String,
        got: usize,
    },
}

/// Names accepted by [`builtin_levelset`].
pub const BUILTIN_LEVELSETS: [&str; 8] = [
    "flower2d",
    "flower3d",
    "sphere",
    "circle",
    "eight_balls",
    "corner_balls_cylinder",
    "halfplane",
    "empty",
];

/// Look up a catalogue level set by name. An empty parameter list selects the
/// reference parameters; otherwise:
///
/// | name | parameters |
/// |------|------------|
/// | `flower2d` | `r0 r1` |
/// | `flower3d` | `r r0` |
/// | `sphere`, `circle` | `radius [cx cy [cz]]` |
/// | `eight_balls` | `radius offset` |
/// | `corner_balls_cylinder` | `corner ball_radius cylinder_radius` |
/// | `halfplane` | `nx ny [nz] offset` |
/// | `empty` | constant value (default `-1`, whole mesh inside) |
pub fn builtin_levelset(name: &str, params: &[f64]) -> Result<AnalyticLevelSet, CatalogueError> {
    let bad = |expected: &str| CatalogueError::BadParameters {
        name: name.to_string(),
        expected: expected.to_string(),
        got: params.len(),
    };
    let shape = match name {
        "flower2d" => match params {
            [] => Shape::Flower2d { r0: 0.6, r1: 0.2 },
            [r0, r1] => Shape::Flower2d { r0: *r0, r1: *r1 },
            _ => return Err(bad("0 or 2")),
        },
        "flower3d" => match params {
            [] => Shape::Flower3d { r: 0.5, r0: 3.5 },
            [r, r0] => Shape::Flower3d { r: *r, r0: *r0 },
            _ => return Err(bad("0 or 2")),
        },
        "sphere" | "circle" => match params {
            [] => Shape::Ball {
                center: [0.0; 3],
                radius: 0.25,
            },
            [r] => Shape::Ball {
                center: [0.0; 3],
                radius: *r,
            },
            [r, cx, cy] => Shape::Ball {
                center: [*cx, *cy, 0.0],
                radius: *r,
            },
            [r, cx, cy, cz] => Shape::Ball {
                center: [*cx, *cy, *cz],
                radius: *r,
            },
            _ => return Err(bad("0, 1, 3 or 4")),
        },
        "eight_balls" => {
            let (radius, offset) = match params {
                [] => (0.3, 0.5),
                [r, o] => (*r, *o),
                _ => return Err(bad("0 or 2")),
            };
            Shape::UnionOfBalls {
                centers: corner_points(offset),
                radius,
            }
        }
        "corner_balls_cylinder" => match params {
            [] => Shape::CornerBallsCylinder {
                corner: 1.0,
                ball_radius: 0.8,
                cylinder_radius: 0.6,
            },
            [c, rb, rc] => Shape::CornerBallsCylinder {
                corner: *c,
                ball_radius: *rb,
                cylinder_radius: *rc,
            },
            _ => return Err(bad("0 or 3")),
        },
        "halfplane" => match params {
            // irrational offset keeps the cut generic on structured grids
            [] => {
                let n = Point::new(1.0, 0.5f64.sqrt(), 0.0).normalize();
                Shape::HalfSpace {
                    normal: [n.x, n.y, 0.0],
                    offset: 0.1 * 2f64.sqrt(),
                }
            }
            [nx, ny, off] => {
                let n = Point::new(*nx, *ny, 0.0).normalize();
                Shape::HalfSpace {
                    normal: [n.x, n.y, 0.0],
                    offset: *off,
                }
            }
            [nx, ny, nz, off] => {
                let n = Point::new(*nx, *ny, *nz).normalize();
                Shape::HalfSpace {
                    normal: [n.x, n.y, n.z],
                    offset: *off,
                }
            }
            _ => return Err(bad("0, 3 or 4")),
        },
        "empty" => match params {
            [] => Shape::Constant(-1.0),
            [c] => Shape::Constant(*c),
            _ => return Err(bad("0 or 1")),
        },
        _ => return Err(CatalogueError::UnknownName(name.to_string())),
    };
    Ok(AnalyticLevelSet::new(name, shape))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElementTag {
    Inside,
    Outside,
    Cut,
}

/// Element and face sets of one level-set domain on a background mesh.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainClassification {
    pub side: Side,
    pub sign_rule: SignRule,
    pub element_tag: Vec<ElementTag>,
    /// Active mesh `T_h` (ascending element indices).
    pub active_elements: Vec<usize>,
    /// Cut elements `T_Gamma` (ascending).
    pub cut_elements: Vec<usize>,
    /// Interior faces of the active mesh `F_h` (both neighbours active).
    pub interior_faces: Vec<usize>,
    /// Ghost-penalty faces `F_h^g`: faces of `F_h` touching a cut element.
    pub ghost_faces: Vec<usize>,
    /// Background-boundary faces of active elements reaching into the domain.
    pub boundary_faces_fitted: Vec<usize>,
    /// Perturbed level-set vertex values (never zero).
    pub vertex_values: Vec<f64>,
    active_position: Vec<Option<usize>>,
}

impl DomainClassification {
    /// Position of element `e` in the active list.
    pub fn active_index(&self, e: usize) -> Option<usize> {
        self.active_position[e]
    }

    pub fn is_active(&self, e: usize) -> bool {
        self.active_position[e].is_some()
    }

    pub fn is_cut(&self, e: usize) -> bool {
        self.element_tag[e] == ElementTag::Cut
    }

    /// Perturbed vertex value as seen from this side (negative = inside).
    pub fn side_vertex_value(&self, v: usize) -> f64 {
        self.side.sign() * self.vertex_values[v]
    }
}

/// Classify `mesh` against `phi` (inside = `phi < 0`).
pub fn classify(mesh: &BackgroundMesh, phi: &dyn LevelSet, eps: f64) -> DomainClassification {
    let rule = SignRule::new(eps, mesh.h());
    let values = vertex_values(mesh, phi, &rule);
    classify_side(mesh, &values, rule, Side::Inside)
}

fn vertex_values(mesh: &BackgroundMesh, phi: &dyn LevelSet, rule: &SignRule) -> Vec<f64> {
    mesh.vertices()
        .iter()
        .map(|x| rule.apply(phi.value(x)))
        .collect()
}

fn classify_side(
    mesh: &BackgroundMesh,
    values: &[f64],
    rule: SignRule,
    side: Side,
) -> DomainClassification {
    let ne = mesh.n_elements();
    let mut element_tag = Vec::with_capacity(ne);
    let mut active_elements = Vec::new();
    let mut cut_elements = Vec::new();
    let mut active_position = vec![None; ne];
    for e in 0..ne {
        let (mut neg, mut pos) = (false, false);
        for &v in mesh.element_vertex_ids(e) {
            if side.sign() * values[v] < 0.0 {
                neg = true;
            } else {
                pos = true;
            }
        }
        let tag = match (neg, pos) {
            (true, true) => ElementTag::Cut,
            (true, false) => ElementTag::Inside,
            _ => ElementTag::Outside,
        };
        if tag != ElementTag::Outside {
            active_position[e] = Some(active_elements.len());
            active_elements.push(e);
        }
        if tag == ElementTag::Cut {
            cut_elements.push(e);
        }
        element_tag.push(tag);
    }

    let mut interior_faces = Vec::new();
    let mut ghost_faces = Vec::new();
    let mut boundary_faces_fitted = Vec::new();
    for (f, face) in mesh.faces().iter().enumerate() {
        match face.right {
            Some(r) => {
                if active_position[face.left].is_some() && active_position[r].is_some() {
                    interior_faces.push(f);
                    if element_tag[face.left] == ElementTag::Cut
                        || element_tag[r] == ElementTag::Cut
                    {
                        ghost_faces.push(f);
                    }
                }
            }
            None => {
                let touches = face.vertices.iter().any(|&v| side.sign() * values[v] < 0.0);
                if active_position[face.left].is_some() && touches {
                    boundary_faces_fitted.push(f);
                }
            }
        }
    }

    DomainClassification {
        side,
        sign_rule: rule,
        element_tag,
        active_elements,
        cut_elements,
        interior_faces,
        ghost_faces,
        boundary_faces_fitted,
        vertex_values: values.to_vec(),
        active_position,
    }
}

/// Classification of both subdomains of an interface problem.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoDomainClassification {
    /// `Omega_1 = {phi < 0}`
    pub inner: DomainClassification,
    /// `Omega_2 = {phi > 0}`
    pub outer: DomainClassification,
    /// Elements cut by the interface (shared by both active meshes).
    pub cut_elements: Vec<usize>,
}

impl TwoDomainClassification {
    pub fn side(&self, side: Side) -> &DomainClassification {
        match side {
            Side::Inside => &self.inner,
            Side::Outside => &self.outer,
        }
    }
}

/// Classify `Omega_1 = {phi < 0}` and `Omega_2 = {phi > 0}`. Vertex values are
/// perturbed once, so the two sides see exactly complementary signs.
pub fn classify_two_domain(
    mesh: &BackgroundMesh,
    phi: &dyn LevelSet,
    eps: f64,
) -> TwoDomainClassification {
    let rule = SignRule::new(eps, mesh.h());
    let values = vertex_values(mesh, phi, &rule);
    let inner = classify_side(mesh, &values, rule, Side::Inside);
    let outer = classify_side(mesh, &values, rule, Side::Outside);
    let cut_elements = inner.cut_elements.clone();
    TwoDomainClassification {
        inner,
        outer,
        cut_elements,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::BoundingBox;

    fn unit_square(n: usize) -> BackgroundMesh {
        BackgroundMesh::structured(BoundingBox::cube(0.0, 1.0), n, 2).unwrap()
    }

    fn plane_x(c: f64) -> AnalyticLevelSet {
        AnalyticLevelSet::new(
            "x",
            Shape::HalfSpace {
                normal: [1.0, 0.0, 0.0],
                offset: c,
            },
        )
    }

    #[test]
    fn vertical_plane_on_two_by_two() {
        // phi = x - 0.5 hits the middle grid line; perturbation pushes it outside,
        // so the left column is inside and there is no cut element.
        let m = unit_square(2);
        let c = classify(&m, &plane_x(0.5), DEFAULT_EPS);
        let shifted = classify(&m, &plane_x(0.5 - DEFAULT_EPS * m.h()), 0.0);
        assert_eq!(c.element_tag, shifted.element_tag);

        // A generic offset inside the middle column of a 4x4 grid.
        let m = unit_square(4);
        let phi = plane_x(0.6);
        let c = classify(&m, &phi, DEFAULT_EPS);
        for e in 0..m.n_elements() {
            let xs: Vec<f64> = m.element(e).vertices().iter().map(|p| p.x - 0.6).collect();
            let oracle = if xs.iter().all(|&v| v < 0.0) {
                ElementTag::Inside
            } else if xs.iter().all(|&v| v > 0.0) {
                ElementTag::Outside
            } else {
                ElementTag::Cut
            };
            assert_eq!(c.element_tag[e], oracle);
        }
        assert!(!c.cut_elements.is_empty());
    }

    #[test]
    fn everything_inside() {
        let m = unit_square(3);
        let c = classify(&m, &builtin_levelset("empty", &[]).unwrap(), DEFAULT_EPS);
        assert_eq!(c.active_elements.len(), m.n_elements());
        assert!(c.cut_elements.is_empty());
        assert!(c.ghost_faces.is_empty());
    }

    #[test]
    fn ghost_faces_match_brute_force() {
        let m = unit_square(8);
        let phi = builtin_levelset("circle", &[0.3, 0.5, 0.5]).unwrap();
        let c = classify(&m, &phi, DEFAULT_EPS);
        let brute: Vec<usize> = c
            .interior_faces
            .iter()
            .copied()
            .filter(|&f| {
                let face = m.face(f);
                c.is_cut(face.left) || c.is_cut(face.right.unwrap())
            })
            .collect();
        assert_eq!(brute, c.ghost_faces);
        for &e in &c.cut_elements {
            assert!(c.is_active(e));
        }
    }

    #[test]
    fn two_domain_sets() {
        let m = unit_square(8);
        let phi = builtin_levelset("circle", &[0.3, 0.5, 0.5]).unwrap();
        let two = classify_two_domain(&m, &phi, DEFAULT_EPS);
        let both: Vec<usize> = two
            .inner
            .active_elements
            .iter()
            .copied()
            .filter(|&e| two.outer.is_active(e))
            .collect();
        assert_eq!(both, two.cut_elements);
        assert_eq!(
            two.inner.active_elements.len() + two.outer.active_elements.len()
                - two.cut_elements.len(),
            m.n_elements()
        );
        // outer box boundary belongs to Omega_2 only
        assert!(two.inner.boundary_faces_fitted.is_empty());
        assert_eq!(two.outer.boundary_faces_fitted.len(), 4 * 8);
    }

    #[test]
    fn flower_reference_value() {
        let phi = builtin_levelset("flower2d", &[]).unwrap();
        let v = phi.value(&Point::new(0.0, 0.8, 0.0));
        let expected = 0.8 - 0.6 - 0.2 * (std::f64::consts::FRAC_PI_2).cos();
        assert!((v - expected).abs() < 1e-15);
        assert!(v > 0.0);
    }

    #[test]
    fn sphere_center_is_inside() {
        let phi = builtin_levelset("sphere", &[]).unwrap();
        assert!((phi.value(&Point::zeros()) + 0.0625).abs() < 1e-16);
    }

    #[test]
    fn translation_shifts_argument() {
        let phi = builtin_levelset("flower2d", &[]).unwrap();
        let h = 0.2;
        let d = 0.37;
        let moved = phi.translate(Point::new(d * h, d * h, 0.0));
        let x = Point::new(0.31, -0.44, 0.0);
        assert_eq!(
            moved.value(&x),
            phi.value(&(x - Point::new(d * h, d * h, 0.0)))
        );
    }

    #[test]
    fn analytic_gradients_match_differences() {
        let x = Point::new(0.31, -0.44, 0.27);
        for name in BUILTIN_LEVELSETS {
            let phi = builtin_levelset(name, &[]).unwrap();
            let fd = FnLevelSet::new(|p: &Point| phi.value(p), 1.0);
            let (g, g_fd) = (phi.gradient(&x), fd.gradient(&x));
            assert!(
                (g - g_fd).norm() < 1e-7 * (1.0 + g.norm()),
                "{name}: {g} vs {g_fd}"
            );
        }
    }

    #[test]
    fn unknown_name_is_an_error() {
        assert_eq!(
            builtin_levelset("torus", &[]),
            Err(CatalogueError::UnknownName("torus".into()))
        );
        assert!(matches!(
            builtin_levelset("flower2d", &[1.0]),
            Err(CatalogueError::BadParameters { .. })
        ));
    }
}
