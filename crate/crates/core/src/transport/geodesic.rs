use nalgebra::Vector4;

use crate::curve::{CurveNode, ParamCurve};
use crate::error::{Error, Result};
use crate::numeric::{rk4_step, Vec3};
use crate::surface::{solve2, ParametricSurface};
use crate::transport::{tangential_acceleration, TANGENCY_TOL, MIN_STEPS};

/// A constant-speed geodesic and the chart it was integrated in.
#[derive(Debug, Clone)]
pub struct Geodesic {
    /// Chart of `curve`. Differs from the input surface's chart only when the
    /// path had to be routed away from the poles of a spherical chart.
    pub surface: ParametricSurface,
    pub curve: ParamCurve,
    pub arc_length: f64,
    /// Largest `|a_T|` found at the step midpoints of the interpolated path.
    pub max_tangential_acceleration: f64,
}

impl Geodesic {
    pub fn end_point(&self) -> Vec3 {
        let (u, v) = self.curve.point(1.0);
        self.surface.position(u, v)
    }

    /// Unit spatial velocity at curve parameter `t`.
    pub fn unit_velocity(&self, t: f64) -> Result<Vec3> {
        let (u, v) = self.curve.point(t);
        let (du, dv) = self.curve.velocity(t);
        Ok(self
            .surface
            .local_frame(u, v)?
            .push_forward(du, dv)
            .normalize())
    }
}

pub(crate) struct Trace {
    pub nodes: Vec<CurveNode>,
    /// Set when the integration stopped early.
    pub exit: Option<Error>,
}

type State = Vector4<f64>;

/// `(u'', v'')` making the spatial acceleration purely normal:
/// `g (u'', v'') = -(r_u . Q, r_v . Q)` with `Q = r_uu u'^2 + 2 r_uv u'v' + r_vv v'^2`.
fn geodesic_rhs(surface: &ParametricSurface, t: f64, y: &State) -> Result<State> {
    let (u, v, du, dv) = (y[0], y[1], y[2], y[3]);
    let frame = surface.local_frame(u, v).map_err(|e| match e {
        Error::OutOfDomain { u, v } => Error::LeftDomain { t, u, v },
        other => other,
    })?;
    let jet = &frame.jet;
    let q = jet.ruu * (du * du) + jet.ruv * (2.0 * du * dv) + jet.rvv * (dv * dv);
    let rhs = nalgebra::Vector2::new(-jet.ru.dot(&q), -jet.rv.dot(&q));
    let acc = solve2(&frame.forms.g, &rhs);
    Ok(State::new(du, dv, acc[0], acc[1]))
}

/// Integrates the geodesic from `start` with unit tangent `direction` over
/// `t in [0, 1]` at speed `arc_length`. With `stop_on_exit` an exit from the
/// chart ends the trace instead of failing it.
pub(crate) fn trace_geodesic(
    surface: &ParametricSurface,
    start: (f64, f64),
    direction: &Vec3,
    arc_length: f64,
    steps: usize,
    stop_on_exit: bool,
) -> Result<Trace> {
    let frame = surface.local_frame(start.0, start.1)?;
    let p = frame.pull_back(&(direction * arc_length));
    let mut y = State::new(start.0, start.1, p[0], p[1]);
    let h = 1.0 / steps as f64;
    let mut rhs = |t: f64, y: &State| geodesic_rhs(surface, t, y);

    let node = |t: f64, y: &State, d: &State| CurveNode {
        t,
        point: (y[0], y[1]),
        velocity: (y[2], y[3]),
        acceleration: (d[2], d[3]),
    };
    let d0 = rhs(0.0, &y)?;
    let mut nodes = Vec::with_capacity(steps + 1);
    nodes.push(node(0.0, &y, &d0));
    for k in 0..steps {
        let t = k as f64 * h;
        let stepped = rk4_step(&mut rhs, t, &y, h).and_then(|next| {
            let d = rhs(t + h, &next)?;
            Ok((next, d))
        });
        match stepped {
            Ok((next, d)) => {
                y = next;
                nodes.push(node((k + 1) as f64 * h, &y, &d));
            }
            Err(e) if stop_on_exit => {
                return Ok(Trace {
                    nodes,
                    exit: Some(e),
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Trace { nodes, exit: None })
}

fn build(surface: &ParametricSurface, trace: Trace, arc_length: f64) -> Result<Geodesic> {
    let steps = trace.nodes.len() - 1;
    let curve = ParamCurve::sampled(trace.nodes, false);
    let mut max_at = 0.0f64;
    for k in 0..steps {
        let t = (k as f64 + 0.5) / steps as f64;
        let a = tangential_acceleration(surface, &curve, t)?;
        max_at = max_at.max(Vec3::from(a.a_t).norm());
    }
    Ok(Geodesic {
        surface: surface.clone(),
        curve,
        arc_length,
        max_tangential_acceleration: max_at,
    })
}

/// Geodesic of length `arc_length` from `start` in the unit tangent `direction`.
///
/// Spherical charts are singular at their poles; for those surfaces the path
/// is traced in each axis-aligned chart and the one staying farthest from its
/// poles is returned.
pub fn integrate_geodesic(
    surface: &ParametricSurface,
    start: (f64, f64),
    direction: Vec3,
    arc_length: f64,
    steps: usize,
) -> Result<Geodesic> {
    if steps < MIN_STEPS {
        return Err(Error::InvalidParameter(format!(
            "steps must be at least {MIN_STEPS}, got {steps}"
        )));
    }
    if !(arc_length > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "arc length must be positive, got {arc_length}"
        )));
    }
    let frame = surface.local_frame(start.0, start.1)?;
    let residual = direction.dot(&frame.normal).abs();
    if residual > TANGENCY_TOL {
        return Err(Error::NotTangent { residual });
    }
    if (direction.norm() - 1.0).abs() > TANGENCY_TOL {
        return Err(Error::InvalidParameter(format!(
            "direction must be a unit vector, |d| = {}",
            direction.norm()
        )));
    }

    if !surface.is_spherical_chart() {
        let trace = trace_geodesic(surface, start, &direction, arc_length, steps, false)?;
        return build(surface, trace, arc_length);
    }

    let origin = surface.position(start.0, start.1);
    let mut best: Option<(f64, ParametricSurface, Trace)> = None;
    let mut first_error = None;
    let charts = std::iter::once(surface.clone()).chain(surface.alternate_charts());
    for chart in charts {
        let Some(s) = chart.locate(&origin) else { continue };
        match trace_geodesic(&chart, s, &direction, arc_length, steps, false) {
            Ok(trace) => {
                let polar = trace
                    .nodes
                    .iter()
                    .map(|n| n.point.1.abs())
                    .fold(0.0, f64::max);
                if best.as_ref().is_none_or(|(p, _, _)| polar < *p) {
                    best = Some((polar, chart, trace));
                }
            }
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    match best {
        Some((_, chart, trace)) => build(&chart, trace, arc_length),
        None => Err(first_error.expect("at least one chart was tried")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, TAU};

    #[test]
    fn equator_is_a_closed_geodesic() {
        let s = ParametricSurface::sphere(1.0);
        let east = s.local_frame(0.0, 0.0).unwrap().e1();
        let g = integrate_geodesic(&s, (0.0, 0.0), east, TAU, 512).unwrap();
        assert!((g.end_point() - s.position(0.0, 0.0)).norm() < 1e-6);
        assert!(g.max_tangential_acceleration < 1e-6 * TAU * TAU);
    }

    #[test]
    fn meridian_reaches_the_pole() {
        let s = ParametricSurface::sphere(1.0);
        let north = s.local_frame(0.0, 0.0).unwrap().e2();
        let g = integrate_geodesic(&s, (0.0, 0.0), north, FRAC_PI_2, 512).unwrap();
        assert!((g.end_point() - Vec3::z()).norm() < 1e-6);
    }

    #[test]
    fn plane_geodesics_are_straight() {
        let s = ParametricSurface::plane();
        let d = Vec3::new(0.6, -0.8, 0.0);
        let g = integrate_geodesic(&s, (1.0, 2.0), d, 3.0, 64).unwrap();
        assert!((g.end_point() - Vec3::new(2.8, -0.4, 0.0)).norm() < 1e-12);
        assert!(g.max_tangential_acceleration < 1e-10);
    }

    #[test]
    fn leaving_a_bounded_chart_is_reported() {
        let s = ParametricSurface::plane();
        let err = integrate_geodesic(&s, (9.0, 0.0), Vec3::x(), 5.0, 64).unwrap_err();
        assert!(matches!(err, Error::LeftDomain { .. }), "{err:?}");
    }

    #[test]
    fn cylinder_helix_is_a_geodesic() {
        // Unrolled, a helix on the cylinder is a straight line.
        let s = ParametricSurface::cylinder(1.0);
        let d = Vec3::new(0.0, 1.0, 1.0).normalize();
        let g = integrate_geodesic(&s, (0.0, -1.0), d, 2.0f64.sqrt(), 256).unwrap();
        let (u, v) = g.curve.point(1.0);
        assert!((u - 1.0).abs() < 1e-10 && (v - 0.0).abs() < 1e-10);
        assert!((g.arc_length - 2.0f64.sqrt()).abs() < 1e-15);
    }
}
