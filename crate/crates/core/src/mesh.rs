//! Structured simplicial background meshes with face topology.
//!
//! 2D: every grid quadrilateral is cut along its `(0,0)-(1,1)` diagonal.
//! 3D: every grid cube is split into the six Kuhn tetrahedra sharing the main
//! diagonal. Both patterns are conforming across cells.

use std::collections::HashMap;
use std::io::{self, Write};

use thiserror::Error;

use crate::simplex::{Point, Simplex};

#[derive(Debug, Error, PartialEq)]
pub enum MeshError {
    #[error("number of cells per axis must be positive")]
    ZeroCells,
    #[error("dimension must be 2 or 3, got {0}")]
    UnsupportedDimension(usize),
    #[error("bounding box is degenerate along axis {0}")]
    DegenerateBox(usize),
}

/// Axis-aligned box `[min, max]`; unused axes are ignored in 2D.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundingBox {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl BoundingBox {
    pub fn new(min: [f64; 3], max: [f64; 3]) -> Self {
        BoundingBox { min, max }
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(lo: f64, hi: f64) -> Self {
        BoundingBox {
            min: [lo; 3],
            max: [hi; 3],
        }
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.max[axis] - self.min[axis]
    }

    pub fn measure(&self, dim: usize) -> f64 {
        (0..dim).map(|a| self.extent(a)).product()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    pub left: usize,
    pub right: Option<usize>,
}

impl Face {
    pub fn is_boundary(&self) -> bool {
        self.right.is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FaceGeometry {
    /// Unit normal pointing from `left` to `right` (outward on the boundary).
    pub normal: Point,
    pub measure: f64,
    pub centroid: Point,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BackgroundMesh {
    dim: usize,
    bbox: BoundingBox,
    n_per_axis: usize,
    vertices: Vec<Point>,
    elements: Vec<usize>,
    faces: Vec<Face>,
    element_faces: Vec<usize>,
    h: f64,
}

const KUHN_PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

impl BackgroundMesh {
    /// Build the structured simplicial mesh of `bbox` with `n_per_axis` cells per axis.
    pub fn structured(bbox: BoundingBox, n_per_axis: usize, dim: usize) -> Result<Self, MeshError> {
        if n_per_axis == 0 {
            return Err(MeshError::ZeroCells);
        }
        if dim != 2 && dim != 3 {
            return Err(MeshError::UnsupportedDimension(dim));
        }
        for a in 0..dim {
            if !(bbox.extent(a) > 0.0) || !bbox.extent(a).is_finite() {
                return Err(MeshError::DegenerateBox(a));
            }
        }
        let n = n_per_axis;
        let np = n + 1;
        let coord = |a: usize, i: usize| {
            if i == n {
                bbox.max[a]
            } else {
                bbox.min[a] + bbox.extent(a) * i as f64 / n as f64
            }
        };

        let mut vertices = Vec::new();
        let mut elements = Vec::new();
        if dim == 2 {
            for j in 0..np {
                for i in 0..np {
                    vertices.push(Point::new(coord(0, i), coord(1, j), 0.0));
                }
            }
            let vid = |i: usize, j: usize| i + np * j;
            for j in 0..n {
                for i in 0..n {
                    let (v00, v10, v01, v11) =
                        (vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1));
                    elements.extend_from_slice(&[v00, v10, v11]);
                    elements.extend_from_slice(&[v00, v11, v01]);
                }
            }
        } else {
            for k in 0..np {
                for j in 0..np {
                    for i in 0..np {
                        vertices.push(Point::new(coord(0, i), coord(1, j), coord(2, k)));
                    }
                }
            }
            let vid = |c: [usize; 3]| c[0] + np * (c[1] + np * c[2]);
            for k in 0..n {
                for j in 0..n {
                    for i in 0..n {
                        for perm in KUHN_PERMUTATIONS {
                            let mut c = [i, j, k];
                            let mut tet = [vid(c); 4];
                            for (step, &axis) in perm.iter().enumerate() {
                                c[axis] += 1;
                                tet[step + 1] = vid(c);
                            }
                            elements.extend_from_slice(&tet);
                        }
                    }
                }
            }
        }

        let stride = dim + 1;
        // fix orientation: positive signed volume
        for e in elements.chunks_mut(stride) {
            if signed_measure(&vertices, e) < 0.0 {
                e.swap(stride - 2, stride - 1);
            }
        }

        let n_elems = elements.len() / stride;
        let mut faces: Vec<Face> = Vec::new();
        let mut lookup: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut element_faces = vec![0; n_elems * stride];
        for e in 0..n_elems {
            let verts = &elements[e * stride..(e + 1) * stride];
            for local in 0..stride {
                // local face `local` is opposite vertex `local`
                let mut key: Vec<usize> = verts
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != local)
                    .map(|(_, &v)| v)
                    .collect();
                key.sort_unstable();
                let fid = match lookup.get(&key) {
                    Some(&f) => {
                        faces[f].right = Some(e);
                        f
                    }
                    None => {
                        faces.push(Face {
                            vertices: key.clone(),
                            left: e,
                            right: None,
                        });
                        lookup.insert(key, faces.len() - 1);
                        faces.len() - 1
                    }
                };
                element_faces[e * stride + local] = fid;
            }
        }

        let mut mesh = BackgroundMesh {
            dim,
            bbox,
            n_per_axis,
            vertices,
            elements,
            faces,
            element_faces,
            h: 0.0,
        };
        mesh.h = (0..n_elems)
            .map(|e| mesh.element(e).diameter())
            .fold(0.0, f64::max);
        Ok(mesh)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bounding_box(&self) -> &BoundingBox {
        &self.bbox
    }

    pub fn n_per_axis(&self) -> usize {
        self.n_per_axis
    }

    /// Global mesh size: the largest element diameter.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Largest axis subdivision length, `extent / n`.
    pub fn spacing(&self) -> f64 {
        (0..self.dim)
            .map(|a| self.bbox.extent(a))
            .fold(0.0, f64::max)
            / self.n_per_axis as f64
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len() / (self.dim + 1)
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }

    pub fn element_vertex_ids(&self, e: usize) -> &[usize] {
        let s = self.dim + 1;
        &self.elements[e * s..(e + 1) * s]
    }

    /// Face indices of element `e`; local face `i` is opposite local vertex `i`.
    pub fn element_faces(&self, e: usize) -> &[usize] {
        let s = self.dim + 1;
        &self.element_faces[e * s..(e + 1) * s]
    }

    pub fn element(&self, e: usize) -> Simplex {
        let pts: Vec<Point> = self
            .element_vertex_ids(e)
            .iter()
            .map(|&v| self.vertices[v])
            .collect();
        Simplex::new(&pts)
    }

    pub fn face_simplex(&self, f: usize) -> Simplex {
        let pts: Vec<Point> = self.faces[f]
            .vertices
            .iter()
            .map(|&v| self.vertices[v])
            .collect();
        Simplex::new(&pts)
    }

    pub fn face_geometry(&self, f: usize) -> FaceGeometry {
        let s = self.face_simplex(f);
        let centroid = s.centroid();
        let mut normal = s.hyperplane_normal();
        if normal.dot(&(centroid - self.element(self.faces[f].left).centroid())) < 0.0 {
            normal = -normal;
        }
        FaceGeometry {
            normal,
            measure: s.measure(),
            centroid,
        }
    }

    /// For every vertex, the elements containing it (ascending).
    pub fn vertex_to_elements(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for e in 0..self.n_elements() {
            for &v in self.element_vertex_ids(e) {
                out[v].push(e);
            }
        }
        out
    }

    /// Elements sharing at least one vertex with `e` (including `e`), ascending.
    pub fn vertex_patch(&self, e: usize, v2e: &[Vec<usize>]) -> Vec<usize> {
        let mut patch: Vec<usize> = self
            .element_vertex_ids(e)
            .iter()
            .flat_map(|&v| v2e[v].iter().copied())
            .collect();
        patch.sort_unstable();
        patch.dedup();
        patch
    }

    /// Plain-text dump: header `dim n_vertices n_elements n_faces`, then one
    /// line per vertex, element and face (`vertices... left right`, right = -1
    /// on the boundary).
    pub fn write_text<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(
            w,
            "{} {} {} {}",
            self.dim,
            self.vertices.len(),
            self.n_elements(),
            self.faces.len()
        )?;
        for v in &self.vertices {
            let c: Vec<String> = (0..self.dim).map(|a| format!("{:.17e}", v[a])).collect();
            writeln!(w, "{}", c.join(" "))?;
        }
        for e in 0..self.n_elements() {
            let c: Vec<String> = self
                .element_vertex_ids(e)
                .iter()
                .map(|v| v.to_string())
                .collect();
            writeln!(w, "{}", c.join(" "))?;
        }
        for f in &self.faces {
            let mut c: Vec<String> = f.vertices.iter().map(|v| v.to_string()).collect();
            c.push(f.left.to_string());
            c.push(f.right.map_or("-1".to_string(), |r| r.to_string()));
            writeln!(w, "{}", c.join(" "))?;
        }
        Ok(())
    }
}

fn signed_measure(vertices: &[Point], e: &[usize]) -> f64 {
    let p: Vec<Point> = e.iter().map(|&v| vertices[v]).collect();
    match p.len() {
        3 => {
            let (a, b) = (p[1] - p[0], p[2] - p[0]);
            0.5 * (a.x * b.y - a.y * b.x)
        }
        4 => (p[1] - p[0]).cross(&(p[2] - p[0])).dot(&(p[3] - p[0])) / 6.0,
        _ => unreachable!(),
    }
}

/// Convenience wrapper matching the free-function style used by the drivers.
pub fn build_structured_mesh(
    bbox: BoundingBox,
    n_per_axis: usize,
    dim: usize,
) -> Result<BackgroundMesh, MeshError> {
    BackgroundMesh::structured(bbox, n_per_axis, dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn unit(dim: usize, n: usize) -> BackgroundMesh {
        BackgroundMesh::structured(BoundingBox::cube(0.0, 1.0), n, dim).unwrap()
    }

    #[test]
    fn single_cell_counts() {
        let m = unit(2, 1);
        assert_eq!((m.vertices().len(), m.n_elements(), m.n_faces()), (4, 2, 5));
        assert_eq!(m.faces().iter().filter(|f| f.is_boundary()).count(), 4);
        let m = unit(3, 1);
        assert_eq!((m.vertices().len(), m.n_elements()), (8, 6));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            BackgroundMesh::structured(BoundingBox::cube(0.0, 1.0), 0, 2),
            Err(MeshError::ZeroCells)
        );
        let flat = BoundingBox::new([0.0, 0.0, 0.0], [1.0, 0.0, 1.0]);
        assert_eq!(
            BackgroundMesh::structured(flat, 3, 2),
            Err(MeshError::DegenerateBox(1))
        );
        assert_eq!(
            BackgroundMesh::structured(BoundingBox::cube(0.0, 1.0), 2, 4),
            Err(MeshError::UnsupportedDimension(4))
        );
    }

    #[test]
    fn interior_faces_match_brute_force_pairing() {
        for (dim, n) in [(2, 4), (3, 2)] {
            let m = unit(dim, n);
            let mut count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            for e in 0..m.n_elements() {
                let v = m.element_vertex_ids(e);
                for skip in 0..v.len() {
                    let mut k: Vec<usize> = v
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != skip)
                        .map(|(_, &x)| x)
                        .collect();
                    k.sort();
                    *count.entry(k).or_default() += 1;
                }
            }
            let interior = count.values().filter(|&&c| c == 2).count();
            assert!(count.values().all(|&c| c == 1 || c == 2));
            assert_eq!(
                interior,
                m.faces().iter().filter(|f| !f.is_boundary()).count()
            );
            assert_eq!(count.len(), m.n_faces());
        }
    }

    #[test]
    fn measures_partition_the_box() {
        for dim in [2, 3] {
            for n in [1, 3, 4] {
                let bbox = BoundingBox::new([-1.1, -0.3, 0.2], [1.1, 0.9, 0.7]);
                let m = BackgroundMesh::structured(bbox, n, dim).unwrap();
                let total: f64 = (0..m.n_elements()).map(|e| m.element(e).measure()).sum();
                let exact = bbox.measure(dim);
                assert!(((total - exact) / exact).abs() < 1e-12);
                for e in 0..m.n_elements() {
                    let ids = m.element_vertex_ids(e);
                    assert!(signed_measure(m.vertices(), ids) > 0.0);
                }
            }
        }
    }

    #[test]
    fn h_is_cell_diagonal() {
        let m = unit(2, 4);
        assert!((m.h() - 0.25 * 2f64.sqrt()).abs() < 1e-15);
        let m = unit(3, 3);
        assert!((m.h() - 3f64.sqrt() / 3.0).abs() < 1e-15);
    }

    #[test]
    fn faces_are_conforming_and_normals_consistent() {
        for dim in [2, 3] {
            let m = unit(dim, 3);
            for (fid, f) in m.faces().iter().enumerate() {
                let g = m.face_geometry(fid);
                assert!(g.measure > 0.0);
                assert!((g.normal.norm() - 1.0).abs() < 1e-14);
                assert!(f
                    .vertices
                    .iter()
                    .all(|v| m.element_vertex_ids(f.left).contains(v)));
                if let Some(r) = f.right {
                    assert!(f.left < r);
                    assert!(f
                        .vertices
                        .iter()
                        .all(|v| m.element_vertex_ids(r).contains(v)));
                    let towards_right = m.element(r).centroid() - g.centroid;
                    assert!(g.normal.dot(&towards_right) > 0.0);
                } else {
                    // axis-aligned boundary faces have signed unit coordinate normals
                    let nonzero = (0..3).filter(|&a| g.normal[a].abs() > 1e-14).count();
                    assert_eq!(nonzero, 1);
                }
            }
        }
    }

    #[test]
    fn weighted_normals_sum_to_zero() {
        for dim in [2, 3] {
            let m = unit(dim, 2);
            for e in 0..m.n_elements() {
                let mut s = Point::zeros();
                for &f in m.element_faces(e) {
                    let g = m.face_geometry(f);
                    let sign = if m.face(f).left == e { 1.0 } else { -1.0 };
                    s += sign * g.measure * g.normal;
                }
                assert!(s.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn construction_is_deterministic_and_dumpable() {
        let a = unit(3, 2);
        let b = unit(3, 2);
        assert_eq!(a, b);
        let mut buf = Vec::new();
        a.write_text(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        let header: Vec<usize> = lines
            .next()
            .unwrap()
            .split(' ')
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(
            header,
            vec![3, a.vertices().len(), a.n_elements(), a.n_faces()]
        );
        assert_eq!(text.lines().count(), 1 + header[1] + header[2] + header[3]);
    }
}
