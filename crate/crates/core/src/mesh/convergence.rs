use std::f64::consts::PI;

use serde::Serialize;

use crate::numeric::{CompensatedSum, Vec3};

use super::{icosphere, total_defect, MeshError};

/// One refinement level of the icosphere ladder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub level: usize,
    pub vertices: usize,
    /// Longest edge.
    pub mesh_size: f64,
    /// `|sum of defects - 4 pi|`.
    pub defect_sum_error: f64,
    /// Largest `|defect / area share - 1|` over vertices of valence 6, where
    /// the area share is a third of the spherical area of each incident face
    /// and `K = 1`. `None` when no vertex has valence 6.
    pub max_ratio_error: Option<f64>,
    pub mean_ratio: Option<f64>,
}

/// Area of the spherical triangle spanned by three unit vectors.
fn spherical_area(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let numerator = a.dot(&b.cross(c)).abs();
    let denominator = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * numerator.atan2(denominator)
}

/// Defect sums and defect-to-area ratios on icosphere levels `0..=levels`.
pub fn sphere_mesh_convergence(levels: usize) -> Result<Vec<ConvergenceRow>, MeshError> {
    (0..=levels)
        .map(|level| {
            let mesh = icosphere(level);
            let report = total_defect(&mesh)?;
            let p = mesh.vertices();
            let mut share = vec![0.0; mesh.vertex_count()];
            let mut valence = vec![0usize; mesh.vertex_count()];
            let mut mesh_size = 0.0f64;
            for &[a, b, c] in mesh.faces() {
                let area = spherical_area(&p[a], &p[b], &p[c]) / 3.0;
                for i in [a, b, c] {
                    share[i] += area;
                    valence[i] += 1;
                }
                for (i, j) in [(a, b), (b, c), (c, a)] {
                    mesh_size = mesh_size.max((p[i] - p[j]).norm());
                }
            }
            let ratios: Vec<f64> = (0..mesh.vertex_count())
                .filter(|&v| valence[v] == 6)
                .map(|v| report.defects[v] / share[v])
                .collect();
            let max_ratio_error = ratios.iter().map(|r| (r - 1.0).abs()).reduce(f64::max);
            let mean_ratio = (!ratios.is_empty()).then(|| {
                ratios.iter().copied().collect::<CompensatedSum>().value() / ratios.len() as f64
            });
            Ok(ConvergenceRow {
                level,
                vertices: mesh.vertex_count(),
                mesh_size,
                defect_sum_error: (report.total - 4.0 * PI).abs(),
                max_ratio_error,
                mean_ratio,
            })
        })
        .collect()
}
