//! Numerical checks of the integral identities relating deficit angles,
//! curvature integrals and the Euler characteristic.

mod foucault;
mod prop1;
mod quadrature;
mod stokes;
mod sweep;
mod total;
mod triangle;

use serde::Serialize;

pub use foucault::foucault_rotation;
pub use prop1::{gauss_image, verify_prop1};
pub use quadrature::{integrate_curvature, surface_area, ParamRegion, DEFAULT_RESOLUTION};
pub use stokes::{stokes_curl, stokes_deficit_sphere, stokes_field};
pub use sweep::{random_loops, RandomLoop};
pub use total::{total_curvature, total_curvature_at, SPHERICAL_TOTAL_RESOLUTION};
pub use triangle::{
    geodesic_triangle_excess, octant_triangle, GeodesicTriangle, SHOOTING_TOL,
};

use crate::curve::ParamCurve;
use crate::error::Result;
use crate::surface::ParametricSurface;
use crate::transport::deficit_angle;

/// Which identity a report checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// Deficit angle of a loop against the curvature integral it encloses.
    Prop3,
    /// Deficit of a loop against the deficit of its Gauss image.
    Prop1,
    /// Transport deficit on the unit sphere against the line integral of `F`.
    Stokes,
    /// Angle excess of a geodesic triangle against its curvature integral.
    Triangle,
    /// Total curvature of a closed surface against `2 pi chi`.
    Total,
    /// Foucault rotation per day against the complementary loop deficit.
    Foucault,
}

/// Outcome of one numerical check. `lhs` and `rhs` are the two sides of the
/// identity; the report is produced whether or not they agree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub identity: Identity,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_error: f64,
    /// `abs_error / max(|lhs|, |rhs|)`, or 0 when both sides vanish.
    pub rel_error: f64,
    /// Quadrature resolution `[n_u, n_v]`, when a quadrature was involved.
    pub resolution: Option<[usize; 2]>,
    /// Integration step count, when an integrator was involved.
    pub steps: Option<usize>,
}

impl VerificationReport {
    pub fn new(identity: Identity, lhs: f64, rhs: f64) -> Self {
        let abs_error = (lhs - rhs).abs();
        let scale = lhs.abs().max(rhs.abs());
        let rel_error = if scale == 0.0 { 0.0 } else { abs_error / scale };
        Self {
            identity,
            lhs,
            rhs,
            abs_error,
            rel_error,
            resolution: None,
            steps: None,
        }
    }

    pub fn with_resolution(mut self, resolution: (usize, usize)) -> Self {
        self.resolution = Some([resolution.0, resolution.1]);
        self
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = Some(steps);
        self
    }

    pub fn within(&self, tolerance: f64) -> bool {
        self.abs_error <= tolerance
    }

    /// One JSON object on a single line, fields in declaration order.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }
}

/// Deficit angle of `curve` against the curvature integral over `region`,
/// which `curve` must bound positively.
pub fn verify_deficit_equals_integral(
    surface: &ParametricSurface,
    curve: &ParamCurve,
    region: &ParamRegion,
    steps: usize,
) -> Result<VerificationReport> {
    let lhs = deficit_angle(surface, curve, steps)?;
    let rhs = integrate_curvature(surface, region)?;
    Ok(VerificationReport::new(Identity::Prop3, lhs, rhs)
        .with_resolution(region.resolution)
        .with_steps(steps))
}
