//! Closed triangle meshes, their angle defects and Euler characteristic.
//!
//! The defect at a vertex is `2 pi` minus the interior angles of the incident
//! triangles. Summed over a closed mesh it equals `2 pi (V - E + F)` exactly in
//! exact arithmetic; here only rounding separates the two.

mod convergence;
mod defect;
mod io;
mod shapes;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::numeric::Vec3;

pub use convergence::{sphere_mesh_convergence, ConvergenceRow};
pub use defect::{angle_defect, total_defect, DefectReport};
pub use io::{load_mesh, load_mesh_file, write_off, MeshFormat};
pub use shapes::{cube, cube_polygons, genus2, icosahedron, icosphere, tetrahedron, torus_grid};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeshError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("face {face} cannot be triangulated: {reason}")]
    NonTriangulatable { face: usize, reason: String },

    #[error("face {face} refers to vertex {index}, but the mesh has {count} vertices")]
    IndexOutOfRange {
        face: usize,
        index: i64,
        count: usize,
    },

    #[error("face {face} is degenerate")]
    DegenerateFace { face: usize },

    #[error("mesh is not a closed manifold: {} boundary edge(s), {} non-manifold edge(s)", boundary.len(), nonmanifold.len())]
    NotClosed {
        /// Edges used by exactly one face.
        boundary: Vec<(usize, usize)>,
        /// Edges used by three or more faces.
        nonmanifold: Vec<(usize, usize)>,
    },

    #[error("faces are not consistently oriented: directed edge ({0}, {1}) occurs twice")]
    InconsistentOrientation(usize, usize),

    #[error("vertex {0} belongs to no face")]
    IsolatedVertex(usize),

    #[error("the faces around vertex {0} do not form a single closed fan")]
    OpenStar(usize),

    #[error("{0}")]
    Io(String),
}

/// Indexed triangle mesh. Faces are counterclockwise about the outward normal.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<Vec3>,
    faces: Vec<[usize; 3]>,
}

impl TriMesh {
    /// Checks indices and rejects faces with repeated vertices or an area
    /// below `1e-12` times the squared size of the mesh.
    pub fn new(vertices: Vec<Vec3>, faces: Vec<[usize; 3]>) -> Result<Self, MeshError> {
        let count = vertices.len();
        let scale = bounding_diagonal(&vertices);
        for (f, face) in faces.iter().enumerate() {
            if let Some(&index) = face.iter().find(|&&i| i >= count) {
                return Err(MeshError::IndexOutOfRange {
                    face: f,
                    index: index as i64,
                    count,
                });
            }
            let [a, b, c] = *face;
            let area2 = (vertices[b] - vertices[a])
                .cross(&(vertices[c] - vertices[a]))
                .norm();
            if a == b || b == c || a == c || !(0.5 * area2 > 1e-12 * scale * scale) {
                return Err(MeshError::DegenerateFace { face: f });
            }
        }
        Ok(Self { vertices, faces })
    }

    /// Fan-triangulates each polygon from its first vertex. No vertices are
    /// added, so neither the Euler characteristic nor any defect changes.
    pub fn from_polygons(vertices: Vec<Vec3>, polygons: &[Vec<usize>]) -> Result<Self, MeshError> {
        let count = vertices.len();
        let mut faces = Vec::new();
        for (f, poly) in polygons.iter().enumerate() {
            if poly.len() < 3 {
                return Err(MeshError::NonTriangulatable {
                    face: f,
                    reason: format!("{} vertices", poly.len()),
                });
            }
            if let Some(&index) = poly.iter().find(|&&i| i >= count) {
                return Err(MeshError::IndexOutOfRange {
                    face: f,
                    index: index as i64,
                    count,
                });
            }
            let mut sorted = poly.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != poly.len() {
                return Err(MeshError::NonTriangulatable {
                    face: f,
                    reason: "repeated vertex".into(),
                });
            }
            // Newell normal: zero for a polygon without area.
            let newell: Vec3 = (0..poly.len())
                .map(|i| vertices[poly[i]].cross(&vertices[poly[(i + 1) % poly.len()]]))
                .sum();
            let scale = bounding_diagonal(&vertices);
            if !(newell.norm() > 1e-12 * scale * scale) {
                return Err(MeshError::NonTriangulatable {
                    face: f,
                    reason: "polygon has no area".into(),
                });
            }
            for i in 1..poly.len() - 1 {
                faces.push([poly[0], poly[i], poly[i + 1]]);
            }
        }
        Self::new(vertices, faces)
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Undirected edges with the number of faces using each.
    pub fn edges(&self) -> BTreeMap<(usize, usize), usize> {
        let mut edges = BTreeMap::new();
        for face in &self.faces {
            for k in 0..3 {
                let (a, b) = (face[k], face[(k + 1) % 3]);
                *edges.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// `V - E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edge_count() as i64 + self.faces.len() as i64
    }

    /// Edges used by exactly one face.
    pub fn boundary_edges(&self) -> Vec<(usize, usize)> {
        self.edges()
            .into_iter()
            .filter(|&(_, n)| n == 1)
            .map(|(e, _)| e)
            .collect()
    }

    /// Every edge shared by exactly two faces, traversed in opposite
    /// directions, so that `E = 3F / 2`.
    pub fn validate_closed(&self) -> Result<(), MeshError> {
        let edges = self.edges();
        let boundary: Vec<_> = edges.iter().filter(|&(_, &n)| n == 1).map(|(&e, _)| e).collect();
        let nonmanifold: Vec<_> = edges.iter().filter(|&(_, &n)| n > 2).map(|(&e, _)| e).collect();
        if !boundary.is_empty() || !nonmanifold.is_empty() {
            return Err(MeshError::NotClosed {
                boundary,
                nonmanifold,
            });
        }
        let mut directed = BTreeMap::new();
        for face in &self.faces {
            for k in 0..3 {
                let e = (face[k], face[(k + 1) % 3]);
                if directed.insert(e, ()).is_some() {
                    return Err(MeshError::InconsistentOrientation(e.0, e.1));
                }
            }
        }
        Ok(())
    }

    /// The same mesh with every vertex mapped through `f`.
    pub fn map_vertices<F: Fn(&Vec3) -> Vec3>(&self, f: F) -> Self {
        Self {
            vertices: self.vertices.iter().map(f).collect(),
            faces: self.faces.clone(),
        }
    }
}

fn bounding_diagonal(vertices: &[Vec3]) -> f64 {
    let mut lo = Vec3::repeat(f64::INFINITY);
    let mut hi = Vec3::repeat(f64::NEG_INFINITY);
    for v in vertices {
        lo = lo.inf(v);
        hi = hi.sup(v);
    }
    if vertices.is_empty() {
        0.0
    } else {
        (hi - lo).norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tetrahedron_counts() {
        let t = tetrahedron();
        assert_eq!((t.vertex_count(), t.edge_count(), t.face_count()), (4, 6, 4));
        assert_eq!(t.euler_characteristic(), 2);
        t.validate_closed().unwrap();
    }

    #[test]
    fn cube_fan_triangulation() {
        let c = cube();
        assert_eq!((c.vertex_count(), c.face_count()), (8, 12));
        assert_eq!(c.euler_characteristic(), 2);
        c.validate_closed().unwrap();
    }

    #[test]
    fn closed_meshes_have_three_halves_edges() {
        for m in [tetrahedron(), cube(), icosahedron(), torus_grid(16, 16, 2.0, 1.0), genus2()] {
            m.validate_closed().unwrap();
            assert_eq!(2 * m.edge_count(), 3 * m.face_count());
        }
    }

    #[test]
    fn open_strip_reports_boundary() {
        let v = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
        ];
        let m = TriMesh::new(v, vec![[0, 1, 2], [1, 3, 2]]).unwrap();
        match m.validate_closed() {
            Err(MeshError::NotClosed { boundary, .. }) => {
                assert_eq!(boundary, vec![(0, 1), (0, 2), (1, 3), (2, 3)])
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_faces() {
        let v = vec![Vec3::zeros(), Vec3::x(), Vec3::y()];
        assert!(matches!(
            TriMesh::new(v.clone(), vec![[0, 1, 3]]),
            Err(MeshError::IndexOutOfRange { index: 3, .. })
        ));
        assert!(matches!(
            TriMesh::new(v.clone(), vec![[0, 1, 1]]),
            Err(MeshError::DegenerateFace { face: 0 })
        ));
        let collinear = vec![Vec3::zeros(), Vec3::x(), Vec3::x() * 2.0, Vec3::y()];
        assert!(matches!(
            TriMesh::from_polygons(collinear, &[vec![0, 1, 2]]),
            Err(MeshError::NonTriangulatable { .. })
        ));
    }

    #[test]
    fn flipped_face_is_inconsistent() {
        let t = tetrahedron();
        let mut faces = t.faces().to_vec();
        faces[0].swap(1, 2);
        let m = TriMesh::new(t.vertices().to_vec(), faces).unwrap();
        assert!(matches!(m.validate_closed(), Err(MeshError::InconsistentOrientation(..))));
    }
}
