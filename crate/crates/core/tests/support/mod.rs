//! Strategies and property checks shared by the property suite and the
//! acceptance runner.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use holonomy::mesh::{angle_defect, icosphere, TriMesh};
use holonomy::numeric::Vec3;
use holonomy::transport::{deficit_angle, transport_around_loop};
use holonomy::verify::random_loops;
use holonomy::{ParamCurve, ParametricSurface};
use nalgebra::{Rotation3, Vector3};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const LOOP_STEPS: usize = 1024;

/// One of the random sweep loops: `(seed, index)` picks the surface too.
pub fn sweep_loop() -> impl Strategy<Value = (u64, usize)> {
    (any::<u64>(), 0usize..3)
}

pub fn orientation_antisymmetry((seed, index): (u64, usize)) -> Result<(), TestCaseError> {
    let l = &random_loops(seed, 3)[index];
    let forward = deficit_angle(&l.surface, &l.curve, LOOP_STEPS).unwrap();
    let backward = deficit_angle(&l.surface, &l.curve.reversed(), LOOP_STEPS).unwrap();
    prop_assert!(
        (forward + backward).abs() < 1e-9,
        "{} forward {forward} backward {backward}",
        l.surface.name()
    );
    Ok(())
}

pub fn w0_independence(
    ((seed, index), alpha): ((u64, usize), f64),
) -> Result<(), TestCaseError> {
    let l = &random_loops(seed, 3)[index];
    let (u, v) = l.curve.point(0.0);
    let f = l.surface.local_frame(u, v).unwrap();
    let w0 = f.e1() * alpha.cos() + f.e2() * alpha.sin();
    let base = transport_around_loop(&l.surface, &l.curve, LOOP_STEPS, None).unwrap();
    let turned = transport_around_loop(&l.surface, &l.curve, LOOP_STEPS, Some(w0 * 3.0)).unwrap();
    prop_assert!(
        (base.deficit_angle - turned.deficit_angle).abs() < 1e-9,
        "{} vs {}",
        base.deficit_angle,
        turned.deficit_angle
    );
    Ok(())
}

/// Parameter rectangle `[u0, u0 + du] x [v0, v2]` split at `v1`.
#[derive(Debug, Clone, Copy)]
pub struct SplitRectangle {
    pub surface: usize,
    pub u0: f64,
    pub du: f64,
    pub v0: f64,
    pub v1: f64,
    pub v2: f64,
}

pub fn split_rectangle() -> impl Strategy<Value = SplitRectangle> {
    (0usize..3, -PI..PI, 0.2..1.5f64, -1.2..0.2f64, 0.1..0.9f64, 0.3..1.0f64).prop_map(
        |(surface, u0, du, v0, split, height)| SplitRectangle {
            surface,
            u0,
            du,
            v0,
            v1: v0 + split * height,
            v2: v0 + height,
        },
    )
}

fn rectangle_surface(index: usize) -> ParametricSurface {
    match index {
        0 => ParametricSurface::sphere(1.0),
        1 => ParametricSurface::torus(2.0, 1.0),
        _ => ParametricSurface::ellipsoid(1.0, 0.8, 0.5),
    }
}

pub fn loop_additivity(r: SplitRectangle) -> Result<(), TestCaseError> {
    let s = rectangle_surface(r.surface);
    let u1 = r.u0 + r.du;
    let d = |v0, v1| deficit_angle(&s, &ParamCurve::rectangle(r.u0, v0, u1, v1), LOOP_STEPS).unwrap();
    let (lower, upper, whole) = (d(r.v0, r.v1), d(r.v1, r.v2), d(r.v0, r.v2));
    prop_assert!(
        (lower + upper - whole).abs() < 1e-8,
        "{}: {lower} + {upper} != {whole}",
        s.name()
    );
    Ok(())
}

/// Icosphere with every vertex pushed radially by up to 20 percent.
pub fn bumpy_sphere(radii: &[f64]) -> TriMesh {
    let base = icosphere(1);
    let vertices: Vec<Vec3> = base
        .vertices()
        .iter()
        .zip(radii.iter().cycle())
        .map(|(p, r)| p * (0.8 + 0.4 * r))
        .collect();
    TriMesh::new(vertices, base.faces().to_vec()).unwrap()
}

fn defects(mesh: &TriMesh) -> Vec<f64> {
    (0..mesh.vertex_count())
        .map(|i| angle_defect(mesh, i).unwrap())
        .collect()
}

fn max_difference(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub type RigidMotion = (Vec<f64>, [f64; 3], [f64; 3]);

pub fn rigid_motion() -> impl Strategy<Value = RigidMotion> {
    (
        prop::collection::vec(0.0..1.0f64, 42),
        prop::array::uniform3(-PI..PI),
        prop::array::uniform3(-10.0..10.0f64),
    )
}

pub fn rigid_motion_invariance((radii, axis, shift): RigidMotion) -> Result<(), TestCaseError> {
    let mesh = bumpy_sphere(&radii);
    let rotation = Rotation3::from_scaled_axis(Vector3::from(axis));
    let t = Vector3::from(shift);
    let moved = mesh.map_vertices(|p| rotation * p + t);
    let diff = max_difference(&defects(&mesh), &defects(&moved));
    prop_assert!(diff <= 1e-10, "defects moved by {diff}");
    Ok(())
}

pub fn scale_invariance((radii, scale): (Vec<f64>, f64)) -> Result<(), TestCaseError> {
    let mesh = bumpy_sphere(&radii);
    let scaled = mesh.map_vertices(|p| p * scale);
    let diff = max_difference(&defects(&mesh), &defects(&scaled));
    prop_assert!(diff <= 1e-12, "scale {scale} moved defects by {diff}");
    Ok(())
}

pub fn scaling() -> impl Strategy<Value = (Vec<f64>, f64)> {
    (prop::collection::vec(0.0..1.0f64, 42), 0.01..100.0f64)
}

/// Prism over a convex polygon: random vertex angles on a circle, random
/// height and a random starting vertex for each face's fan.
#[derive(Debug, Clone)]
pub struct Prism {
    pub gaps: Vec<f64>,
    pub height: f64,
    pub starts: Vec<usize>,
}

pub fn prism() -> impl Strategy<Value = Prism> {
    (3usize..12)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(0.2..1.0f64, n),
                0.1..3.0f64,
                prop::collection::vec(0usize..64, n + 2),
            )
        })
        .prop_map(|(gaps, height, starts)| Prism {
            gaps,
            height,
            starts,
        })
}

impl Prism {
    pub fn polygons(&self) -> (Vec<Vec3>, Vec<Vec<usize>>) {
        let n = self.gaps.len();
        let total: f64 = self.gaps.iter().sum();
        let mut angle = 0.0f64;
        let mut ring = Vec::with_capacity(n);
        for g in &self.gaps {
            ring.push(Vec3::new(angle.cos(), angle.sin(), 0.0));
            angle += TAU * g / total;
        }
        let mut vertices = ring.clone();
        vertices.extend(ring.iter().map(|p| p + Vec3::z() * self.height));
        let mut faces: Vec<Vec<usize>> = vec![(0..n).rev().collect(), (n..2 * n).collect()];
        faces.extend((0..n).map(|i| vec![i, (i + 1) % n, n + (i + 1) % n, n + i]));
        (vertices, faces)
    }

    /// The same polygons with each vertex list rotated to a new fan apex.
    pub fn rotated_polygons(&self) -> (Vec<Vec3>, Vec<Vec<usize>>) {
        let (v, faces) = self.polygons();
        let rotated = faces
            .into_iter()
            .zip(&self.starts)
            .map(|(mut f, &k)| {
                let len = f.len();
                f.rotate_left(k % len);
                f
            })
            .collect();
        (v, rotated)
    }
}

pub fn triangulation_invariance(prism: Prism) -> Result<(), TestCaseError> {
    let (v, faces) = prism.polygons();
    let edges: std::collections::BTreeSet<(usize, usize)> = faces
        .iter()
        .flat_map(|f| (0..f.len()).map(move |i| (f[i].min(f[(i + 1) % f.len()]), f[i].max(f[(i + 1) % f.len()]))))
        .collect();
    let polygonal_chi = v.len() as i64 - edges.len() as i64 + faces.len() as i64;
    let a = TriMesh::from_polygons(v, &faces).unwrap();
    let (v, rotated) = prism.rotated_polygons();
    let b = TriMesh::from_polygons(v, &rotated).unwrap();
    a.validate_closed().unwrap();
    b.validate_closed().unwrap();
    prop_assert_eq!(a.euler_characteristic(), polygonal_chi);
    prop_assert_eq!(b.euler_characteristic(), polygonal_chi);
    prop_assert_eq!(polygonal_chi, 2);
    let diff = max_difference(&defects(&a), &defects(&b));
    prop_assert!(diff < 1e-12, "fan apex changed defects by {diff}");
    Ok(())
}
