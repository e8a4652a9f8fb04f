//! Chart formulas for the surface catalog, with analytic first and second partials.

use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix3, Rotation3};

use crate::numeric::Vec3;

/// Position and partial derivatives of a chart at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub position: Vec3,
    pub ru: Vec3,
    pub rv: Vec3,
    pub ruu: Vec3,
    pub ruv: Vec3,
    pub rvv: Vec3,
}

pub type PositionFn = dyn Fn(f64, f64) -> Vec3 + Send + Sync;
pub type FirstPartialsFn = dyn Fn(f64, f64) -> [Vec3; 2] + Send + Sync;
pub type SecondPartialsFn = dyn Fn(f64, f64) -> [Vec3; 3] + Send + Sync;

/// A user supplied chart. Missing derivatives are taken by central differences.
#[derive(Clone)]
pub struct CustomChart {
    pub(crate) position: Arc<PositionFn>,
    pub(crate) first: Option<Arc<FirstPartialsFn>>,
    pub(crate) second: Option<Arc<SecondPartialsFn>>,
    pub(crate) step: (f64, f64),
}

impl fmt::Debug for CustomChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomChart")
            .field("analytic_first", &self.first.is_some())
            .field("analytic_second", &self.second.is_some())
            .field("step", &self.step)
            .finish()
    }
}

impl CustomChart {
    fn jet(&self, u: f64, v: f64) -> Jet {
        let r = &*self.position;
        let (hu, hv) = self.step;
        let position = r(u, v);
        let [ru, rv] = match &self.first {
            Some(first) => first(u, v),
            None => [
                (r(u + hu, v) - r(u - hu, v)) / (2.0 * hu),
                (r(u, v + hv) - r(u, v - hv)) / (2.0 * hv),
            ],
        };
        let [ruu, ruv, rvv] = match &self.second {
            Some(second) => second(u, v),
            None => [
                (r(u + hu, v) - position * 2.0 + r(u - hu, v)) / (hu * hu),
                (r(u + hu, v + hv) - r(u + hu, v - hv) - r(u - hu, v + hv) + r(u - hu, v - hv))
                    / (4.0 * hu * hv),
                (r(u, v + hv) - position * 2.0 + r(u, v - hv)) / (hv * hv),
            ],
        };
        Jet { position, ru, rv, ruu, ruv, rvv }
    }
}

/// The analytic chart families of the catalog, plus user charts.
#[derive(Debug, Clone)]
pub enum Chart {
    /// `p = diag(axes) * Q * q(theta, phi)` where `q` is the unit-sphere
    /// latitude/longitude chart and `Q` a rotation of the unit sphere. Any `Q`
    /// describes the same ellipsoid; it only moves the chart's poles.
    Ellipsoid { axes: Vec3, rotation: Rotation3<f64> },
    /// Standard torus of revolution about the z-axis, `(theta, psi)`.
    Torus { major: f64, minor: f64 },
    /// `(R cos u, R sin u, v)`.
    Cylinder { radius: f64 },
    /// Cone about the z-axis with apex at the origin, `(u, s)` with `s` the
    /// distance from the apex.
    Cone { half_angle: f64 },
    /// `(u, v, 0)`.
    Plane,
    Custom(CustomChart),
}

impl Chart {
    pub fn jet(&self, u: f64, v: f64) -> Jet {
        match self {
            Chart::Ellipsoid { axes, rotation } => {
                let m: Matrix3<f64> = Matrix3::from_diagonal(axes) * rotation.matrix();
                let (st, ct) = u.sin_cos();
                let (sp, cp) = v.sin_cos();
                let q = Vec3::new(ct * cp, st * cp, sp);
                let q_t = Vec3::new(-st * cp, ct * cp, 0.0);
                let q_p = Vec3::new(-ct * sp, -st * sp, cp);
                let q_tt = Vec3::new(-ct * cp, -st * cp, 0.0);
                let q_tp = Vec3::new(st * sp, -ct * sp, 0.0);
                Jet {
                    position: m * q,
                    ru: m * q_t,
                    rv: m * q_p,
                    ruu: m * q_tt,
                    ruv: m * q_tp,
                    rvv: -(m * q),
                }
            }
            Chart::Torus { major, minor } => {
                let (st, ct) = u.sin_cos();
                let (sp, cp) = v.sin_cos();
                let rho = major + minor * cp;
                Jet {
                    position: Vec3::new(rho * ct, rho * st, minor * sp),
                    ru: Vec3::new(-rho * st, rho * ct, 0.0),
                    rv: Vec3::new(-minor * sp * ct, -minor * sp * st, minor * cp),
                    ruu: Vec3::new(-rho * ct, -rho * st, 0.0),
                    ruv: Vec3::new(minor * sp * st, -minor * sp * ct, 0.0),
                    rvv: Vec3::new(-minor * cp * ct, -minor * cp * st, -minor * sp),
                }
            }
            Chart::Cylinder { radius } => {
                let (su, cu) = u.sin_cos();
                Jet {
                    position: Vec3::new(radius * cu, radius * su, v),
                    ru: Vec3::new(-radius * su, radius * cu, 0.0),
                    rv: Vec3::z(),
                    ruu: Vec3::new(-radius * cu, -radius * su, 0.0),
                    ruv: Vec3::zeros(),
                    rvv: Vec3::zeros(),
                }
            }
            Chart::Cone { half_angle } => {
                let (su, cu) = u.sin_cos();
                let (sa, ca) = half_angle.sin_cos();
                Jet {
                    position: Vec3::new(v * sa * cu, v * sa * su, v * ca),
                    ru: Vec3::new(-v * sa * su, v * sa * cu, 0.0),
                    rv: Vec3::new(sa * cu, sa * su, ca),
                    ruu: Vec3::new(-v * sa * cu, -v * sa * su, 0.0),
                    ruv: Vec3::new(-sa * su, sa * cu, 0.0),
                    rvv: Vec3::zeros(),
                }
            }
            Chart::Plane => Jet {
                position: Vec3::new(u, v, 0.0),
                ru: Vec3::x(),
                rv: Vec3::y(),
                ruu: Vec3::zeros(),
                ruv: Vec3::zeros(),
                rvv: Vec3::zeros(),
            },
            Chart::Custom(custom) => custom.jet(u, v),
        }
    }

    pub fn position(&self, u: f64, v: f64) -> Vec3 {
        match self {
            Chart::Custom(custom) => (custom.position)(u, v),
            _ => self.jet(u, v).position,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn fd_jet(chart: &Chart, u: f64, v: f64, h: f64) -> Jet {
        let r = |u, v| chart.position(u, v);
        Jet {
            position: r(u, v),
            ru: (r(u + h, v) - r(u - h, v)) / (2.0 * h),
            rv: (r(u, v + h) - r(u, v - h)) / (2.0 * h),
            ruu: (r(u + h, v) - r(u, v) * 2.0 + r(u - h, v)) / (h * h),
            ruv: (r(u + h, v + h) - r(u + h, v - h) - r(u - h, v + h) + r(u - h, v - h))
                / (4.0 * h * h),
            rvv: (r(u, v + h) - r(u, v) * 2.0 + r(u, v - h)) / (h * h),
        }
    }

    #[test]
    fn analytic_partials_match_finite_differences() {
        let charts = [
            Chart::Ellipsoid {
                axes: Vec3::new(1.0, 0.8, 0.5),
                rotation: Rotation3::from_euler_angles(0.3, -0.2, 1.1),
            },
            Chart::Torus { major: 2.0, minor: 1.0 },
            Chart::Cylinder { radius: 1.5 },
            Chart::Cone { half_angle: PI / 6.0 },
            Chart::Plane,
        ];
        for chart in &charts {
            for &(u, v) in &[(0.3, 0.4), (2.1, -0.7), (-1.0, 1.2)] {
                let a = chart.jet(u, v);
                let b = fd_jet(chart, u, v, 1e-4);
                for (x, y) in [
                    (a.ru, b.ru),
                    (a.rv, b.rv),
                    (a.ruu, b.ruu),
                    (a.ruv, b.ruv),
                    (a.rvv, b.rvv),
                ] {
                    assert!((x - y).norm() < 1e-6, "{chart:?} at ({u},{v}): {x} vs {y}");
                }
            }
        }
    }
}
