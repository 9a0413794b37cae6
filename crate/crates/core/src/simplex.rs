//! Small fixed-capacity simplices embedded in 3-space.
//!
//! Two-dimensional problems are embedded in the `z = 0` plane, so every
//! geometric routine works on [`Point`] regardless of the ambient dimension.

use nalgebra::Vector3;

pub type Point = Vector3<f64>;

/// A k-simplex (k = 0..=3) stored as `k + 1` vertices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Simplex {
    pts: [Point; 4],
    len: usize,
}

impl Simplex {
    pub fn new(vertices: &[Point]) -> Self {
        assert!(!vertices.is_empty() && vertices.len() <= 4);
        let mut pts = [Point::zeros(); 4];
        pts[..vertices.len()].copy_from_slice(vertices);
        Simplex {
            pts,
            len: vertices.len(),
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.pts[..self.len]
    }

    /// Topological dimension k of the simplex.
    pub fn order(&self) -> usize {
        self.len - 1
    }

    /// k-dimensional measure (length, area or volume).
    pub fn measure(&self) -> f64 {
        let p = &self.pts;
        match self.len {
            1 => 1.0,
            2 => (p[1] - p[0]).norm(),
            3 => 0.5 * (p[1] - p[0]).cross(&(p[2] - p[0])).norm(),
            4 => {
                (p[1] - p[0])
                    .cross(&(p[2] - p[0]))
                    .dot(&(p[3] - p[0]))
                    .abs()
                    / 6.0
            }
            _ => unreachable!(),
        }
    }

    pub fn centroid(&self) -> Point {
        self.vertices().iter().sum::<Point>() / self.len as f64
    }

    /// Longest edge length.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.len {
            for j in i + 1..self.len {
                d = d.max((self.pts[i] - self.pts[j]).norm());
            }
        }
        d
    }

    /// Map barycentric-free reference coordinates (`xi` in the unit simplex) to
    /// physical space: `p0 + sum_i xi_i (p_{i+1} - p0)`.
    pub fn map(&self, xi: &[f64]) -> Point {
        let mut x = self.pts[0];
        for (i, &c) in xi.iter().enumerate().take(self.len - 1) {
            x += (self.pts[i + 1] - self.pts[0]) * c;
        }
        x
    }

    /// Unit normal of a facet-like simplex (segment in the xy-plane or triangle).
    pub fn hyperplane_normal(&self) -> Point {
        let p = &self.pts;
        let n = match self.len {
            2 => {
                let t = p[1] - p[0];
                Point::new(t.y, -t.x, 0.0)
            }
            3 => (p[1] - p[0]).cross(&(p[2] - p[0])),
            _ => panic!("hyperplane normal needs a segment or triangle"),
        };
        n / n.norm()
    }

    /// Split into 2^k similar children of half the size (red refinement).
    pub fn red_refine(&self) -> Vec<Simplex> {
        let p = &self.pts;
        let mid = |i: usize, j: usize| 0.5 * (p[i] + p[j]);
        match self.len {
            2 => {
                let m = mid(0, 1);
                vec![Simplex::new(&[p[0], m]), Simplex::new(&[m, p[1]])]
            }
            3 => {
                let (m01, m12, m02) = (mid(0, 1), mid(1, 2), mid(0, 2));
                vec![
                    Simplex::new(&[p[0], m01, m02]),
                    Simplex::new(&[m01, p[1], m12]),
                    Simplex::new(&[m02, m12, p[2]]),
                    Simplex::new(&[m01, m12, m02]),
                ]
            }
            4 => {
                let (m01, m02, m03) = (mid(0, 1), mid(0, 2), mid(0, 3));
                let (m12, m13, m23) = (mid(1, 2), mid(1, 3), mid(2, 3));
                let mut out = vec![
                    Simplex::new(&[p[0], m01, m02, m03]),
                    Simplex::new(&[m01, p[1], m12, m13]),
                    Simplex::new(&[m02, m12, p[2], m23]),
                    Simplex::new(&[m03, m13, m23, p[3]]),
                ];
                // inner octahedron, split along its shortest diagonal
                let diagonals = [(m01, m23), (m02, m13), (m03, m12)];
                let (k, _) = diagonals
                    .iter()
                    .enumerate()
                    .map(|(k, (a, b))| (k, (a - b).norm()))
                    .fold(
                        (0, f64::INFINITY),
                        |acc, x| if x.1 < acc.1 { x } else { acc },
                    );
                let (a, b) = diagonals[k];
                let ring: [Point; 4] = match k {
                    0 => [m02, m03, m13, m12],
                    1 => [m01, m03, m23, m12],
                    _ => [m01, m02, m23, m13],
                };
                for i in 0..4 {
                    out.push(Simplex::new(&[a, b, ring[i], ring[(i + 1) % 4]]));
                }
                out
            }
            _ => vec![*self],
        }
    }
}
