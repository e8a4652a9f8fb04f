//! Reference meshes shared by the tests and the bundled data files.

use std::collections::HashMap;
use std::f64::consts::TAU;

use crate::numeric::Vec3;

use super::TriMesh;

/// Regular tetrahedron inscribed in the cube `[-1, 1]^3`.
pub fn tetrahedron() -> TriMesh {
    let v = vec![
        Vec3::new(1.0, 1.0, 1.0),
        Vec3::new(1.0, -1.0, -1.0),
        Vec3::new(-1.0, 1.0, -1.0),
        Vec3::new(-1.0, -1.0, 1.0),
    ];
    TriMesh::new(v, vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]]).expect("valid tetrahedron")
}

/// Unit cube as six outward quads.
pub fn cube_polygons() -> (Vec<Vec3>, Vec<Vec<usize>>) {
    let v = (0..8)
        .map(|i| Vec3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64))
        .collect();
    let quads = vec![
        vec![0, 2, 3, 1],
        vec![4, 5, 7, 6],
        vec![0, 1, 5, 4],
        vec![2, 6, 7, 3],
        vec![0, 4, 6, 2],
        vec![1, 3, 7, 5],
    ];
    (v, quads)
}

/// Unit cube, each quad fan-triangulated.
pub fn cube() -> TriMesh {
    let (v, quads) = cube_polygons();
    TriMesh::from_polygons(v, &quads).expect("valid cube")
}

/// Faces of a convex mesh around the origin, each turned to face outward.
fn outward(vertices: &[Vec3], faces: Vec<[usize; 3]>) -> Vec<[usize; 3]> {
    faces
        .into_iter()
        .map(|[a, b, c]| {
            let n = (vertices[b] - vertices[a]).cross(&(vertices[c] - vertices[a]));
            if n.dot(&(vertices[a] + vertices[b] + vertices[c])) < 0.0 {
                [a, c, b]
            } else {
                [a, b, c]
            }
        })
        .collect()
}

/// Regular icosahedron with vertices on the unit sphere.
pub fn icosahedron() -> TriMesh {
    let g = 0.5 * (1.0 + 5f64.sqrt());
    let raw = [
        (-1.0, g, 0.0),
        (1.0, g, 0.0),
        (-1.0, -g, 0.0),
        (1.0, -g, 0.0),
        (0.0, -1.0, g),
        (0.0, 1.0, g),
        (0.0, -1.0, -g),
        (0.0, 1.0, -g),
        (g, 0.0, -1.0),
        (g, 0.0, 1.0),
        (-g, 0.0, -1.0),
        (-g, 0.0, 1.0),
    ];
    let v: Vec<Vec3> = raw.iter().map(|&(x, y, z)| Vec3::new(x, y, z).normalize()).collect();
    let faces = vec![
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ];
    let faces = outward(&v, faces);
    TriMesh::new(v, faces).expect("valid icosahedron")
}

/// Icosahedron subdivided `level` times, new vertices pushed to the unit sphere.
pub fn icosphere(level: usize) -> TriMesh {
    let base = icosahedron();
    let mut vertices = base.vertices().to_vec();
    let mut faces = base.faces().to_vec();
    for _ in 0..level {
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(4 * faces.len());
        for &[a, b, c] in &faces {
            let mut mid = |i: usize, j: usize| {
                *midpoints.entry((i.min(j), i.max(j))).or_insert_with(|| {
                    vertices.push((vertices[i] + vertices[j]).normalize());
                    vertices.len() - 1
                })
            };
            let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    TriMesh::new(vertices, faces).expect("valid icosphere")
}

/// Torus of revolution sampled on an `n x m` grid (`n` around the axis, `m`
/// around the tube), each grid quad split into two triangles.
pub fn torus_grid(n: usize, m: usize, major: f64, minor: f64) -> TriMesh {
    assert!(n >= 3 && m >= 3, "a torus grid needs at least 3x3 cells");
    let index = |i: usize, j: usize| (i % n) * m + (j % m);
    let mut vertices = Vec::with_capacity(n * m);
    for i in 0..n {
        let theta = TAU * i as f64 / n as f64;
        for j in 0..m {
            let psi = TAU * j as f64 / m as f64;
            let rho = major + minor * psi.cos();
            vertices.push(Vec3::new(rho * theta.cos(), rho * theta.sin(), minor * psi.sin()));
        }
    }
    let mut faces = Vec::with_capacity(2 * n * m);
    for i in 0..n {
        for j in 0..m {
            let (a, b, c, d) = (index(i, j), index(i + 1, j), index(i + 1, j + 1), index(i, j + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    TriMesh::new(vertices, faces).expect("valid torus grid")
}

/// A closed surface of genus 2: two 8x6 torus grids side by side, one
/// triangle removed from each facing side, the two holes joined by a
/// triangular tube of three quads.
pub fn genus2() -> TriMesh {
    let (n, m) = (8, 6);
    let shift = Vec3::new(3.5, 0.0, 0.0);
    // Rotate the right torus by pi about z so that its theta = 0 side faces -x.
    let left = torus_grid(n, m, 2.0, 1.0).map_vertices(|p| p - shift);
    let right = torus_grid(n, m, 2.0, 1.0).map_vertices(|p| Vec3::new(-p.x, -p.y, p.z) + shift);

    let offset = left.vertex_count();
    let mut vertices = left.vertices().to_vec();
    vertices.extend_from_slice(right.vertices());

    // Faces 0 of each grid are the triangles at theta = 0, psi = 0 (outermost).
    let hole_a = left.faces()[0];
    let hole_b = right.faces()[0].map(|i| i + offset);
    let mut faces: Vec<[usize; 3]> = left.faces()[1..].to_vec();
    faces.extend(right.faces()[1..].iter().map(|f| f.map(|i| i + offset)));

    // a_i pairs with b_(k - i); choose k to join nearest vertices.
    let pair = |k: usize, i: usize| hole_b[(k + 3 - i % 3) % 3];
    let k = (0..3)
        .min_by(|&x, &y| {
            let cost = |k: usize| -> f64 {
                (0..3).map(|i| (vertices[hole_a[i]] - vertices[pair(k, i)]).norm()).sum()
            };
            cost(x).total_cmp(&cost(y))
        })
        .unwrap();
    for i in 0..3 {
        let (a0, a1) = (hole_a[i], hole_a[(i + 1) % 3]);
        let (b0, b1) = (pair(k, i + 1), pair(k, i));
        faces.push([a0, a1, b0]);
        faces.push([a0, b0, b1]);
    }
    TriMesh::new(vertices, faces).expect("valid genus-2 mesh")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signed_volume(m: &TriMesh) -> f64 {
        let v = m.vertices();
        m.faces()
            .iter()
            .map(|&[a, b, c]| v[a].dot(&v[b].cross(&v[c])) / 6.0)
            .sum()
    }

    #[test]
    fn shapes_are_closed_and_outward() {
        for m in [tetrahedron(), cube(), icosahedron(), icosphere(2)] {
            m.validate_closed().unwrap();
            assert!(signed_volume(&m) > 0.0);
        }
        let t = torus_grid(16, 16, 2.0, 1.0);
        t.validate_closed().unwrap();
        assert!(signed_volume(&t) > 0.0);
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(tetrahedron().euler_characteristic(), 2);
        assert_eq!(icosahedron().euler_characteristic(), 2);
        assert_eq!(icosphere(3).euler_characteristic(), 2);
        assert_eq!(torus_grid(16, 16, 2.0, 1.0).euler_characteristic(), 0);
        let g = genus2();
        g.validate_closed().unwrap();
        // Direct count: 2 * 48 vertices, 2 * 144 + 6 edges, 2 * 95 + 6 faces.
        assert_eq!((g.vertex_count(), g.edge_count(), g.face_count()), (96, 294, 196));
        assert_eq!(g.euler_characteristic(), -2);
    }

    #[test]
    fn icosphere_counts() {
        let m = icosphere(3);
        assert_eq!((m.vertex_count(), m.face_count()), (642, 1280));
        assert!(m.vertices().iter().all(|p| (p.norm() - 1.0).abs() < 1e-15));
    }
}
