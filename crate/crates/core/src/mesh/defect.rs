use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::numeric::{angle_between, CompensatedSum};

use super::{MeshError, TriMesh};

/// Per-vertex angle defects of a closed mesh and their sum against `2 pi chi`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub chi: i64,
    /// Sum of the defects, in radians.
    pub total: f64,
    /// `|total - 2 pi chi|`.
    pub residual: f64,
    pub defects: Vec<f64>,
}

impl DefectReport {
    /// Header line plus one `vertex_index,defect_radians` row per vertex.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("vertex_index,defect_radians\n");
        for (i, d) in self.defects.iter().enumerate() {
            out.push_str(&format!("{i},{d:?}\n"));
        }
        out
    }
}

/// Interior angle of face `face` at its corner `vertex`.
fn corner_angle(mesh: &TriMesh, face: &[usize; 3], vertex: usize) -> f64 {
    let k = face.iter().position(|&i| i == vertex).expect("vertex in face");
    let p = mesh.vertices();
    let (o, a, b) = (p[face[k]], p[face[(k + 1) % 3]], p[face[(k + 2) % 3]]);
    angle_between(&(a - o), &(b - o))
}

/// Defect at `vertex` from its incident faces, checking that the faces close
/// up into a single fan.
fn defect_from_star(mesh: &TriMesh, vertex: usize, star: &[usize]) -> Result<f64, MeshError> {
    if star.is_empty() {
        return Err(MeshError::IsolatedVertex(vertex));
    }
    if star.len() < 3 {
        return Err(MeshError::OpenStar(vertex));
    }
    // Each incident face contributes the link edge opposite the vertex; the
    // link must be one cycle through all of them.
    let faces = mesh.faces();
    let link: Vec<(usize, usize)> = star
        .iter()
        .map(|&f| {
            let face = faces[f];
            let k = face.iter().position(|&i| i == vertex).unwrap();
            (face[(k + 1) % 3], face[(k + 2) % 3])
        })
        .collect();
    let start = link[0].0;
    let mut current = start;
    for step in 0..link.len() {
        let mut next = link.iter().filter(|e| e.0 == current);
        let (Some(edge), None) = (next.next(), next.next()) else {
            return Err(MeshError::OpenStar(vertex));
        };
        current = edge.1;
        if current == start && step + 1 != link.len() {
            return Err(MeshError::OpenStar(vertex));
        }
    }
    if current != start {
        return Err(MeshError::OpenStar(vertex));
    }
    let angles: CompensatedSum = star
        .iter()
        .map(|&f| corner_angle(mesh, &faces[f], vertex))
        .collect();
    Ok(TAU - angles.value())
}

fn stars(mesh: &TriMesh) -> Vec<Vec<usize>> {
    let mut stars = vec![Vec::new(); mesh.vertex_count()];
    for (f, face) in mesh.faces().iter().enumerate() {
        for &i in face {
            stars[i].push(f);
        }
    }
    stars
}

/// `2 pi` minus the angles of the triangles meeting at `vertex`. Negative at
/// saddle-like vertices.
pub fn angle_defect(mesh: &TriMesh, vertex: usize) -> Result<f64, MeshError> {
    if vertex >= mesh.vertex_count() {
        return Err(MeshError::IndexOutOfRange {
            face: usize::MAX,
            index: vertex as i64,
            count: mesh.vertex_count(),
        });
    }
    let star: Vec<usize> = mesh
        .faces()
        .iter()
        .enumerate()
        .filter(|(_, f)| f.contains(&vertex))
        .map(|(i, _)| i)
        .collect();
    defect_from_star(mesh, vertex, &star)
}

/// All defects of a closed mesh, summed in vertex order with compensation.
pub fn total_defect(mesh: &TriMesh) -> Result<DefectReport, MeshError> {
    mesh.validate_closed()?;
    let stars = stars(mesh);
    let defects = stars
        .par_iter()
        .enumerate()
        .map(|(v, star)| defect_from_star(mesh, v, star))
        .collect::<Result<Vec<f64>, MeshError>>()?;
    let total = defects.iter().copied().collect::<CompensatedSum>().value();
    let chi = mesh.euler_characteristic();
    Ok(DefectReport {
        vertices: mesh.vertex_count(),
        edges: mesh.edge_count(),
        faces: mesh.face_count(),
        chi,
        total,
        residual: (total - TAU * chi as f64).abs(),
        defects,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{cube, genus2, icosahedron, tetrahedron, torus_grid};
    use crate::numeric::Vec3;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    #[test]
    fn regular_solids() {
        let t = tetrahedron();
        for v in 0..4 {
            assert!((angle_defect(&t, v).unwrap() - PI).abs() < 1e-14);
        }
        let i = icosahedron();
        for v in 0..12 {
            assert!((angle_defect(&i, v).unwrap() - FRAC_PI_3).abs() < 1e-14);
        }
        let c = total_defect(&cube()).unwrap();
        for d in &c.defects {
            assert!((d - FRAC_PI_2).abs() < 1e-14);
        }
        assert!((c.total - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn torus_inner_ring_is_saddle() {
        let t = torus_grid(16, 16, 2.0, 1.0);
        // j = 8 is psi = pi, the inner equator; j = 0 the outer one.
        assert!(angle_defect(&t, 8).unwrap() < 0.0);
        assert!(angle_defect(&t, 0).unwrap() > 0.0);
        let r = total_defect(&t).unwrap();
        assert!(r.residual < 1e-9, "{r:?}");
    }

    #[test]
    fn genus2_total() {
        let r = total_defect(&genus2()).unwrap();
        assert_eq!(r.chi, -2);
        assert!((r.total + 4.0 * PI).abs() < 1e-9, "{}", r.total);
    }

    #[test]
    fn star_errors() {
        let v = vec![Vec3::zeros(), Vec3::x(), Vec3::y(), Vec3::z(), Vec3::new(5.0, 5.0, 5.0)];
        let m = TriMesh::new(v, vec![[0, 1, 2], [0, 2, 3], [0, 3, 1]]).unwrap();
        assert!(matches!(angle_defect(&m, 4), Err(MeshError::IsolatedVertex(4))));
        assert!(matches!(angle_defect(&m, 1), Err(MeshError::OpenStar(1))));
        assert!(angle_defect(&m, 0).is_ok());
        assert!(matches!(total_defect(&m), Err(MeshError::NotClosed { .. })));
    }

    #[test]
    fn csv_layout() {
        let r = total_defect(&tetrahedron()).unwrap();
        let csv = r.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "vertex_index,defect_radians");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("0,3.14159265358979"));
    }
}
