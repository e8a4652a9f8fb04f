//! Parametric surfaces and their pointwise differential geometry.
//!
//! Normals follow `r_u x r_v`; catalog charts are oriented so that this is the
//! outward normal of every closed surface. The second fundamental form is
//! taken literally as `b_ij = r_ij . N`, which makes the principal curvatures
//! of an outward-oriented sphere of radius `R` equal to `-1/R`. Gaussian
//! curvature does not depend on that choice.

mod chart;

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::Arc;

use nalgebra::{Matrix2, Rotation3, Vector2};
use serde::Serialize;

pub use chart::{Chart, CustomChart, FirstPartialsFn, Jet, PositionFn, SecondPartialsFn};

use crate::error::{Error, Result};
use crate::numeric::Vec3;

/// Below this `|r_u x r_v|` a chart is treated as singular.
pub const REGULARITY_EPS: f64 = 1e-12;

/// Spherical charts stop this far short of the poles.
pub const POLE_MARGIN: f64 = 1e-9;

/// Slack allowed when testing membership of a closed parameter interval.
const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub min: f64,
    pub max: f64,
    pub periodic: bool,
}

impl Interval {
    pub fn new(min: f64, max: f64) -> Self {
        Self { min, max, periodic: false }
    }

    pub fn periodic(min: f64, max: f64) -> Self {
        Self { min, max, periodic: true }
    }

    pub fn extent(&self) -> f64 {
        self.max - self.min
    }

    pub fn contains(&self, x: f64) -> bool {
        self.periodic
            || (x >= self.min - DOMAIN_SLACK * (1.0 + self.extent())
                && x <= self.max + DOMAIN_SLACK * (1.0 + self.extent()))
    }
}

/// Rectangular parameter domain with per-axis periodicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Domain {
    pub u: Interval,
    pub v: Interval,
}

impl Domain {
    pub fn contains(&self, u: f64, v: f64) -> bool {
        self.u.contains(u) && self.v.contains(v)
    }

    pub fn center(&self) -> (f64, f64) {
        (
            0.5 * (self.u.min + self.u.max),
            0.5 * (self.v.min + self.v.max),
        )
    }
}

/// First and second fundamental forms in the `{r_u, r_v}` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalForms {
    pub g: Matrix2<f64>,
    pub b: Matrix2<f64>,
}

impl FundamentalForms {
    pub fn det_g(&self) -> f64 {
        self.g[(0, 0)] * self.g[(1, 1)] - self.g[(0, 1)] * self.g[(1, 0)]
    }

    pub fn det_b(&self) -> f64 {
        self.b[(0, 0)] * self.b[(1, 1)] - self.b[(0, 1)] * self.b[(1, 0)]
    }

    /// `K = det b / det g`.
    pub fn gaussian_curvature(&self) -> f64 {
        self.det_b() / self.det_g()
    }

    /// Matrix of the shape operator, `g^-1 b`.
    pub fn shape_operator(&self) -> Matrix2<f64> {
        let d = self.det_g();
        let g_inv = Matrix2::new(self.g[(1, 1)], -self.g[(0, 1)], -self.g[(1, 0)], self.g[(0, 0)]) / d;
        g_inv * self.b
    }

    /// Eigenvalues of `g^-1 b`, largest first.
    pub fn principal_curvatures(&self) -> (f64, f64) {
        let s = self.shape_operator();
        let half_trace = 0.5 * (s[(0, 0)] + s[(1, 1)]);
        let det = s[(0, 0)] * s[(1, 1)] - s[(0, 1)] * s[(1, 0)];
        // g^-1 b is self-adjoint w.r.t. g, so the discriminant is >= 0 up to rounding.
        let disc = (half_trace * half_trace - det).max(0.0).sqrt();
        (half_trace + disc, half_trace - disc)
    }
}

/// Everything known about the surface at one parameter point.
#[derive(Debug, Clone, Copy)]
pub struct LocalFrame {
    pub u: f64,
    pub v: f64,
    pub jet: Jet,
    pub normal: Vec3,
    pub forms: FundamentalForms,
}

impl LocalFrame {
    /// Derivative of the unit normal along the parameter velocity `(du, dv)`,
    /// from the Weingarten relation `N_i = -sum_k (g^-1 b)_ki r_k`.
    pub fn normal_derivative(&self, du: f64, dv: f64) -> Vec3 {
        let s = self.forms.shape_operator();
        let nu = -(self.jet.ru * s[(0, 0)] + self.jet.rv * s[(1, 0)]);
        let nv = -(self.jet.ru * s[(0, 1)] + self.jet.rv * s[(1, 1)]);
        nu * du + nv * dv
    }

    /// Spatial vector of the parameter velocity `(du, dv)`.
    pub fn push_forward(&self, du: f64, dv: f64) -> Vec3 {
        self.jet.ru * du + self.jet.rv * dv
    }

    /// Parameter components of a tangent vector, solving `g x = (r_u.w, r_v.w)`.
    pub fn pull_back(&self, w: &Vec3) -> Vector2<f64> {
        let rhs = Vector2::new(self.jet.ru.dot(w), self.jet.rv.dot(w));
        solve2(&self.forms.g, &rhs)
    }

    /// Unit vector along `r_u`, the first axis of the chart's tangent frame.
    pub fn e1(&self) -> Vec3 {
        self.jet.ru.normalize()
    }

    pub fn e2(&self) -> Vec3 {
        self.normal.cross(&self.e1())
    }

    /// Removes the normal component of `w`.
    pub fn project(&self, w: &Vec3) -> Vec3 {
        w - self.normal * self.normal.dot(w)
    }
}

pub(crate) fn solve2(m: &Matrix2<f64>, rhs: &Vector2<f64>) -> Vector2<f64> {
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    Vector2::new(
        (m[(1, 1)] * rhs[0] - m[(0, 1)] * rhs[1]) / det,
        (m[(0, 0)] * rhs[1] - m[(1, 0)] * rhs[0]) / det,
    )
}

/// A point of the surface together with its unit normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub u: f64,
    pub v: f64,
    pub position: [f64; 3],
    pub normal: [f64; 3],
    /// Set when the point is a pole of the spherical coordinates, where the
    /// longitude is undefined and reported as 0.
    pub pole_ambiguous: bool,
}

/// A chart `r(u, v)` into 3-space with its parameter domain.
#[derive(Debug, Clone)]
pub struct ParametricSurface {
    name: String,
    chart: Chart,
    domain: Domain,
    euler_characteristic: Option<i64>,
}

impl ParametricSurface {
    /// Sphere of radius `radius` in latitude/longitude coordinates `(theta, phi)`.
    pub fn sphere(radius: f64) -> Self {
        let mut s = Self::ellipsoid(radius, radius, radius);
        s.name = format!("sphere:{radius}");
        s
    }

    /// Ellipsoid with semi-axes `(a, b, c)` along x, y, z.
    pub fn ellipsoid(a: f64, b: f64, c: f64) -> Self {
        Self {
            name: format!("ellipsoid:{a},{b},{c}"),
            chart: Chart::Ellipsoid {
                axes: Vec3::new(a, b, c),
                rotation: Rotation3::identity(),
            },
            domain: Domain {
                u: Interval::periodic(0.0, TAU),
                v: Interval::new(-FRAC_PI_2 + POLE_MARGIN, FRAC_PI_2 - POLE_MARGIN),
            },
            euler_characteristic: Some(2),
        }
    }

    /// Torus of revolution with tube centre radius `major` and tube radius `minor`.
    pub fn torus(major: f64, minor: f64) -> Self {
        Self {
            name: format!("torus:{major},{minor}"),
            chart: Chart::Torus { major, minor },
            domain: Domain {
                u: Interval::periodic(0.0, TAU),
                v: Interval::periodic(-PI, PI),
            },
            euler_characteristic: Some(0),
        }
    }

    pub fn cylinder(radius: f64) -> Self {
        Self {
            name: format!("cylinder:{radius}"),
            chart: Chart::Cylinder { radius },
            domain: Domain {
                u: Interval::periodic(0.0, TAU),
                v: Interval::new(-2.0, 2.0),
            },
            euler_characteristic: None,
        }
    }

    /// Cone with the given half-angle (radians) at the apex.
    pub fn cone(half_angle: f64) -> Self {
        Self {
            name: format!("cone:{half_angle}"),
            chart: Chart::Cone { half_angle },
            domain: Domain {
                u: Interval::periodic(0.0, TAU),
                v: Interval::new(0.1, 2.0),
            },
            euler_characteristic: None,
        }
    }

    pub fn plane() -> Self {
        Self {
            name: "plane".to_string(),
            chart: Chart::Plane,
            domain: Domain {
                u: Interval::new(-10.0, 10.0),
                v: Interval::new(-10.0, 10.0),
            },
            euler_characteristic: None,
        }
    }

    /// A user chart given by its position map only. Derivatives come from
    /// central differences with step `1e-5` times the domain extent per axis.
    pub fn from_chart<F>(name: impl Into<String>, domain: Domain, position: F) -> Self
    where
        F: Fn(f64, f64) -> Vec3 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            chart: Chart::Custom(CustomChart {
                position: Arc::new(position),
                first: None,
                second: None,
                step: (1e-5 * domain.u.extent(), 1e-5 * domain.v.extent()),
            }),
            domain,
            euler_characteristic: None,
        }
    }

    /// Supplies analytic partials for a user chart.
    pub fn with_partials<F1, F2>(mut self, first: F1, second: F2) -> Self
    where
        F1: Fn(f64, f64) -> [Vec3; 2] + Send + Sync + 'static,
        F2: Fn(f64, f64) -> [Vec3; 3] + Send + Sync + 'static,
    {
        if let Chart::Custom(c) = &mut self.chart {
            c.first = Some(Arc::new(first));
            c.second = Some(Arc::new(second));
        }
        self
    }

    /// Overrides the finite-difference step of a user chart.
    pub fn with_fd_step(mut self, hu: f64, hv: f64) -> Self {
        if let Chart::Custom(c) = &mut self.chart {
            c.step = (hu, hv);
        }
        self
    }

    /// The same surface seen through a finite-difference copy of its chart.
    pub fn finite_difference_copy(&self, hu: f64, hv: f64) -> Self {
        let chart = self.chart.clone();
        let mut copy = Self::from_chart(format!("{}~fd", self.name), self.domain, move |u, v| {
            chart.position(u, v)
        })
        .with_fd_step(hu, hv);
        copy.euler_characteristic = self.euler_characteristic;
        copy
    }

    /// Declares the surface closed with the given Euler characteristic.
    pub fn with_euler_characteristic(mut self, chi: i64) -> Self {
        self.euler_characteristic = Some(chi);
        self
    }

    /// Rotates the unit-sphere coordinates behind a spherical chart. The
    /// surface is unchanged; only the location of the chart's poles moves.
    pub fn with_chart_rotation(mut self, rotation: Rotation3<f64>) -> Self {
        if let Chart::Ellipsoid { rotation: r, .. } = &mut self.chart {
            *r = rotation;
        }
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Catalog Euler characteristic, `None` for surfaces that are not closed.
    pub fn euler_characteristic(&self) -> Option<i64> {
        self.euler_characteristic
    }

    /// Typical length of the surface, used to scale tolerances.
    pub fn length_scale(&self) -> f64 {
        match &self.chart {
            Chart::Ellipsoid { axes, .. } => axes.max(),
            Chart::Torus { minor, .. } => *minor,
            Chart::Cylinder { radius } => *radius,
            Chart::Cone { .. } | Chart::Plane | Chart::Custom(_) => 1.0,
        }
    }

    pub fn is_spherical_chart(&self) -> bool {
        matches!(self.chart, Chart::Ellipsoid { .. })
    }

    pub fn position(&self, u: f64, v: f64) -> Vec3 {
        self.chart.position(u, v)
    }

    pub fn jet(&self, u: f64, v: f64) -> Jet {
        self.chart.jet(u, v)
    }

    /// Local frame at `(u, v)`, after checking the domain and regularity.
    pub fn local_frame(&self, u: f64, v: f64) -> Result<LocalFrame> {
        if !self.domain.contains(u, v) {
            return Err(Error::OutOfDomain { u, v });
        }
        self.local_frame_unchecked(u, v)
    }

    /// Like [`local_frame`](Self::local_frame) without the domain test.
    pub(crate) fn local_frame_unchecked(&self, u: f64, v: f64) -> Result<LocalFrame> {
        let jet = self.chart.jet(u, v);
        let cross = jet.ru.cross(&jet.rv);
        let cross_norm = cross.norm();
        if !(cross_norm >= REGULARITY_EPS) {
            return Err(Error::DegenerateChart { u, v, cross_norm });
        }
        let normal = cross / cross_norm;
        let g = Matrix2::new(
            jet.ru.dot(&jet.ru),
            jet.ru.dot(&jet.rv),
            jet.rv.dot(&jet.ru),
            jet.rv.dot(&jet.rv),
        );
        let b12 = jet.ruv.dot(&normal);
        let b = Matrix2::new(jet.ruu.dot(&normal), b12, b12, jet.rvv.dot(&normal));
        Ok(LocalFrame {
            u,
            v,
            jet,
            normal,
            forms: FundamentalForms { g, b },
        })
    }

    /// `N = r_u x r_v / |r_u x r_v|`.
    pub fn unit_normal(&self, u: f64, v: f64) -> Result<Vec3> {
        Ok(self.local_frame(u, v)?.normal)
    }

    pub fn fundamental_forms(&self, u: f64, v: f64) -> Result<FundamentalForms> {
        Ok(self.local_frame(u, v)?.forms)
    }

    pub fn gaussian_curvature(&self, u: f64, v: f64) -> Result<f64> {
        Ok(self.fundamental_forms(u, v)?.gaussian_curvature())
    }

    /// Principal curvatures `(k1, k2)` with `k1 >= k2`.
    pub fn principal_curvatures(&self, u: f64, v: f64) -> Result<(f64, f64)> {
        Ok(self.fundamental_forms(u, v)?.principal_curvatures())
    }

    /// Image of `(u, v)` under the Gauss map, in latitude/longitude coordinates
    /// of the unit sphere (`v` is the latitude, measured from the equator).
    pub fn gauss_map(&self, u: f64, v: f64) -> Result<SurfacePoint> {
        let n = self.unit_normal(u, v)?;
        let (theta, phi, pole_ambiguous) = spherical_coordinates(&n);
        Ok(SurfacePoint {
            u: theta,
            v: phi,
            position: n.into(),
            normal: n.into(),
            pole_ambiguous,
        })
    }

    pub fn surface_point(&self, u: f64, v: f64) -> Result<SurfacePoint> {
        let frame = self.local_frame(u, v)?;
        Ok(SurfacePoint {
            u,
            v,
            position: frame.jet.position.into(),
            normal: frame.normal.into(),
            pole_ambiguous: false,
        })
    }

    /// Inverse of a spherical chart: parameters of the surface point `p`.
    /// Returns `None` for other chart families.
    pub fn locate(&self, p: &Vec3) -> Option<(f64, f64)> {
        match &self.chart {
            Chart::Ellipsoid { axes, rotation } => {
                let q = rotation.inverse() * p.component_div(axes);
                let (theta, phi, _) = spherical_coordinates(&q.normalize());
                Some((theta.rem_euclid(TAU), phi))
            }
            _ => None,
        }
    }

    /// The other two axis-aligned spherical charts of the same surface, for
    /// routing computations away from this chart's poles.
    pub fn alternate_charts(&self) -> Vec<ParametricSurface> {
        match &self.chart {
            Chart::Ellipsoid { rotation, .. } => {
                // Cyclic permutation e_x -> e_y -> e_z -> e_x.
                let cyc = Rotation3::from_matrix_unchecked(nalgebra::Matrix3::new(
                    0.0, 0.0, 1.0, //
                    1.0, 0.0, 0.0, //
                    0.0, 1.0, 0.0,
                ));
                vec![
                    self.clone().with_chart_rotation(rotation * cyc),
                    self.clone().with_chart_rotation(rotation * cyc * cyc),
                ]
            }
            _ => Vec::new(),
        }
    }
}

/// Longitude, latitude and pole flag of a unit vector.
pub fn spherical_coordinates(n: &Vec3) -> (f64, f64, bool) {
    let horizontal = n.x.hypot(n.y);
    let phi = n.z.atan2(horizontal);
    if horizontal == 0.0 {
        (0.0, phi, true)
    } else {
        (n.y.atan2(n.x), phi, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn sphere_normal_is_radial() {
        let s = ParametricSurface::sphere(1.0);
        for &(t, p) in &[(0.3, 0.7), (2.0, -1.2), (5.5, 0.0)] {
            let n = s.unit_normal(t, p).unwrap();
            assert!((n - s.position(t, p)).norm() < 1e-14);
        }
    }

    #[test]
    fn plane_normal_and_forms() {
        let s = ParametricSurface::plane();
        assert_eq!(s.unit_normal(1.0, -2.0).unwrap(), Vec3::z());
        let f = s.fundamental_forms(0.5, 0.5).unwrap();
        assert_eq!(f.g, Matrix2::identity());
        assert_eq!(f.b, Matrix2::zeros());
        assert_eq!(s.principal_curvatures(0.0, 0.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn torus_outer_equator_normal() {
        // r_theta = (0, 3, 0), r_psi = (0, 0, 1) at (0, 0): cross = (3, 0, 0).
        let s = ParametricSurface::torus(2.0, 1.0);
        let n = s.unit_normal(0.0, 0.0).unwrap();
        assert!((n - Vec3::x()).norm() < 1e-15);
    }

    #[test]
    fn sphere_equator_forms_outward_sign() {
        // r_tt = r_pp = -r at the equator, N = r, so b = -I, g = I.
        let s = ParametricSurface::sphere(1.0);
        let f = s.fundamental_forms(0.0, 0.0).unwrap();
        assert!((f.g - Matrix2::identity()).norm() < 1e-15);
        assert!((f.b + Matrix2::identity()).norm() < 1e-15);
        let (k1, k2) = f.principal_curvatures();
        assert!(close(k1, -1.0, 1e-14) && close(k2, -1.0, 1e-14));
    }

    #[test]
    fn cylinder_forms_have_one_nonzero_eigenvalue() {
        // r_uu . N = -1, r_uv = r_vv = 0.
        let s = ParametricSurface::cylinder(1.0);
        let f = s.fundamental_forms(0.8, 0.3).unwrap();
        assert!((f.g - Matrix2::identity()).norm() < 1e-15);
        assert!((f.b - Matrix2::new(-1.0, 0.0, 0.0, 0.0)).norm() < 1e-15);
        let (k1, k2) = f.principal_curvatures();
        assert!(close(k1, 0.0, 1e-15) && close(k2, -1.0, 1e-15));
        assert_eq!(s.gaussian_curvature(0.1, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn sphere_curvature_scales_inverse_square() {
        for r in [0.5, 1.0, 3.0] {
            let s = ParametricSurface::sphere(r);
            let k = s.gaussian_curvature(1.0, 0.4).unwrap();
            assert!(close(k, 1.0 / (r * r), 1e-13 / (r * r)));
        }
    }

    #[test]
    fn torus_curvature_formula() {
        let s = ParametricSurface::torus(2.0, 1.0);
        for psi in [0.0, 0.5, FRAC_PI_2, 2.0, PI] {
            let k = s.gaussian_curvature(0.7, psi).unwrap();
            let oracle = psi.cos() / (1.0 * (2.0 + psi.cos()));
            assert!(close(k, oracle, 1e-14), "psi {psi}: {k} vs {oracle}");
        }
        assert!(close(s.gaussian_curvature(1.3, PI).unwrap(), -1.0, 1e-14));
    }

    #[test]
    fn degenerate_chart_is_an_error() {
        let s = ParametricSurface::sphere(1.0);
        assert!(matches!(
            s.local_frame_unchecked(0.0, FRAC_PI_2),
            Err(Error::DegenerateChart { .. })
        ));
        assert!(matches!(
            s.unit_normal(0.0, FRAC_PI_2),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn gauss_map_of_plane_is_constant_and_flags_pole() {
        let s = ParametricSurface::plane();
        let a = s.gauss_map(1.0, 2.0).unwrap();
        let b = s.gauss_map(-3.0, 0.5).unwrap();
        assert_eq!(a.position, b.position);
        assert!(a.pole_ambiguous);
        assert_eq!(a.u, 0.0);
        assert!(close(a.v, FRAC_PI_2, 1e-15));
    }

    #[test]
    fn gauss_map_of_unit_sphere_is_identity() {
        let s = ParametricSurface::sphere(1.0);
        let p = s.gauss_map(1.1, FRAC_PI_4).unwrap();
        assert!(close(p.u, 1.1, 1e-14) && close(p.v, FRAC_PI_4, 1e-14));
    }

    #[test]
    fn locate_inverts_rotated_ellipsoid_chart() {
        let s = ParametricSurface::ellipsoid(1.0, 0.8, 0.5)
            .with_chart_rotation(Rotation3::from_euler_angles(0.4, 0.1, -0.9));
        let (u, v) = (2.5, -0.3);
        let (u2, v2) = s.locate(&s.position(u, v)).unwrap();
        assert!(close(u, u2, 1e-12) && close(v, v2, 1e-12));
        for alt in s.alternate_charts() {
            let p = s.position(u, v);
            let (a, b) = alt.locate(&p).unwrap();
            assert!((alt.position(a, b) - p).norm() < 1e-12);
            // alternate charts keep the outward orientation
            let n = alt.unit_normal(a, b).unwrap();
            assert!((n - s.unit_normal(u, v).unwrap()).norm() < 1e-10);
        }
    }
}
