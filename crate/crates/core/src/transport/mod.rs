//! Extrinsic parallel transport and geodesics on parametric surfaces.
//!
//! A tangent field `w(t)` along a curve is parallel when its derivative has no
//! tangential component. For a field that starts tangent this is the linear
//! ODE `dw/dt = -(w . dN/dt) N`, integrated here with fixed-step RK4 and a
//! re-projection onto the tangent plane after every step.
//!
//! Deficit angles are accumulated, not wrapped: the angle of `w` against the
//! chart frame `e1 = r_u / |r_u|` is tracked step by step, and a loop that
//! winds around a periodic parameter axis gains `2 pi` per turn (the enclosed
//! side of such a loop is the one on its left). With this convention the
//! counterclockwise latitude circle at `phi` has deficit `2 pi (1 - sin phi)`
//! for every latitude, including values above `pi`.

mod geodesic;

use std::f64::consts::TAU;

use nalgebra::Vector6;
use serde::Serialize;

pub use geodesic::{integrate_geodesic, Geodesic};
pub(crate) use geodesic::trace_geodesic;

use crate::curve::{ParamCurve, Side};
use crate::error::{Error, Result};
use crate::numeric::{rk4_step, wrap_pi, Vec3};
use crate::surface::{LocalFrame, ParametricSurface};

/// Default step count for acceptance-grade runs.
pub const DEFAULT_STEPS: usize = 4096;

/// Smallest accepted step count.
pub const MIN_STEPS: usize = 8;

/// Tolerance on `|w0 . N| / |w0|` for the initial vector.
pub const TANGENCY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransportSample {
    pub t: f64,
    pub w: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportResult {
    /// `w` at the `steps + 1` uniform nodes `t = k / steps`.
    pub samples: Vec<TransportSample>,
    /// Accumulated rotation of `w` against the chart frame plus the winding
    /// correction; for a closed curve this is the signed deficit angle.
    pub deficit_angle: f64,
    /// Largest deviation of `|w|` from `|w0|` along a copy of the field
    /// integrated without re-projection or renormalisation.
    pub norm_drift: f64,
}

/// Geometry of the curve at one parameter value.
struct CurveState {
    frame: LocalFrame,
    velocity: (f64, f64),
}

fn curve_state(
    surface: &ParametricSurface,
    curve: &ParamCurve,
    t: f64,
    side: Side,
) -> Result<CurveState> {
    let (u, v) = curve.point(t);
    let velocity = curve.velocity_at(t, side);
    if !(u.is_finite() && v.is_finite() && velocity.0.is_finite() && velocity.1.is_finite()) {
        return Err(Error::CurveNotRegular { t });
    }
    let frame = surface.local_frame(u, v)?;
    Ok(CurveState { frame, velocity })
}

fn frame_angle(frame: &LocalFrame, w: &Vec3) -> f64 {
    w.dot(&frame.e2()).atan2(w.dot(&frame.e1()))
}

/// Net number of turns a sampled parameter path makes around each periodic axis.
pub(crate) fn winding_numbers(surface: &ParametricSurface, points: &[(f64, f64)]) -> (i64, i64) {
    let domain = surface.domain();
    let turns = |axis: &crate::surface::Interval, pick: fn(&(f64, f64)) -> f64| -> i64 {
        if !axis.periodic {
            return 0;
        }
        let period = axis.extent();
        let total: f64 = points
            .windows(2)
            .map(|w| {
                let d = pick(&w[1]) - pick(&w[0]);
                d - period * (d / period).round()
            })
            .sum();
        (total / period).round() as i64
    };
    (turns(&domain.u, |p| p.0), turns(&domain.v, |p| p.1))
}

/// Parallel transport of `w0` along `curve`, sampled at `steps + 1` nodes.
pub fn parallel_transport(
    surface: &ParametricSurface,
    curve: &ParamCurve,
    w0: Vec3,
    steps: usize,
) -> Result<TransportResult> {
    if steps < MIN_STEPS {
        return Err(Error::InvalidParameter(format!(
            "steps must be at least {MIN_STEPS}, got {steps}"
        )));
    }
    let start = curve_state(surface, curve, 0.0, Side::Right)?;
    let norm0 = w0.norm();
    if !(norm0 > 0.0) {
        return Err(Error::NotTangent { residual: f64::NAN });
    }
    let residual = w0.dot(&start.frame.normal).abs() / norm0;
    if residual > TANGENCY_TOL {
        return Err(Error::NotTangent { residual });
    }

    let breakpoints = curve.breakpoints();
    let mut w = start.frame.project(&w0) * (norm0 / start.frame.project(&w0).norm());
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(TransportSample { t: 0.0, w: w.into() });
    let mut angle = frame_angle(&start.frame, &w);
    let mut accumulated = 0.0;
    let mut shadow = w;
    let mut norm_drift = 0.0f64;
    let mut params = Vec::with_capacity(steps + 1);
    params.push((start.frame.u, start.frame.v));

    for k in 0..steps {
        let (a, b) = (k as f64 / steps as f64, (k + 1) as f64 / steps as f64);
        let mut cuts = vec![a];
        cuts.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
        cuts.push(b);

        // Rows 0..3 carry the corrected field, rows 3..6 an uncorrected copy
        // used only to measure drift.
        let mut pair = Vector6::zeros();
        pair.fixed_rows_mut::<3>(0).copy_from(&w);
        pair.fixed_rows_mut::<3>(3).copy_from(&shadow);
        for piece in cuts.windows(2) {
            let (p, q) = (piece[0], piece[1]);
            let h = q - p;
            let mut rhs = |t: f64, y: &Vector6<f64>| -> Result<Vector6<f64>> {
                let side = if t - p > 0.75 * h { Side::Left } else { Side::Right };
                let state = curve_state(surface, curve, t, side)?;
                let n = state.frame.normal;
                let n_dot = state.frame.normal_derivative(state.velocity.0, state.velocity.1);
                let mut d = Vector6::zeros();
                d.fixed_rows_mut::<3>(0)
                    .copy_from(&(-n * y.fixed_rows::<3>(0).dot(&n_dot)));
                d.fixed_rows_mut::<3>(3)
                    .copy_from(&(-n * y.fixed_rows::<3>(3).dot(&n_dot)));
                Ok(d)
            };
            pair = rk4_step(&mut rhs, p, &pair, h)?;
        }
        let raw: Vec3 = pair.fixed_rows::<3>(0).into();
        shadow = pair.fixed_rows::<3>(3).into();

        let state = curve_state(surface, curve, b, Side::Left)?;
        let speed = state.frame.push_forward(state.velocity.0, state.velocity.1).norm();
        if !(speed > 0.0) {
            return Err(Error::CurveNotRegular { t: b });
        }
        norm_drift = norm_drift.max((shadow.norm() - norm0).abs());

        let projected = state.frame.project(&raw);
        w = projected * (norm0 / projected.norm());
        let next = frame_angle(&state.frame, &w);
        accumulated += wrap_pi(next - angle);
        angle = next;
        samples.push(TransportSample { t: b, w: w.into() });
        params.push((state.frame.u, state.frame.v));
    }

    let (turns_u, turns_v) = if curve.is_closed() {
        winding_numbers(surface, &params)
    } else {
        (0, 0)
    };
    Ok(TransportResult {
        samples,
        deficit_angle: accumulated + TAU * (turns_u + turns_v) as f64,
        norm_drift,
    })
}

/// Signed deficit angle of a closed curve: the rotation, counterclockwise
/// about `N`, of a vector parallel transported once around it.
pub fn deficit_angle(
    surface: &ParametricSurface,
    curve: &ParamCurve,
    steps: usize,
) -> Result<f64> {
    Ok(transport_around_loop(surface, curve, steps, None)?.deficit_angle)
}

/// Transport around a closed curve starting from `w0`, or from `e1` when `None`.
pub fn transport_around_loop(
    surface: &ParametricSurface,
    curve: &ParamCurve,
    steps: usize,
    w0: Option<Vec3>,
) -> Result<TransportResult> {
    let (p0, p1) = (curve.point(0.0), curve.point(1.0));
    let gap = (surface.position(p0.0, p0.1) - surface.position(p1.0, p1.1)).norm();
    if !curve.is_closed() || gap > 1e-9 * (1.0 + surface.length_scale()) {
        return Err(Error::NotClosed { gap });
    }
    let w0 = match w0 {
        Some(w) => w,
        None => surface.local_frame(p0.0, p0.1)?.e1(),
    };
    parallel_transport(surface, curve, w0, steps)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentialAcceleration {
    /// Projection of `c''(t)` onto the tangent plane.
    pub a_t: [f64; 3],
    /// `|a_T| / |v|`, the rate at which the velocity turns in the tangent plane.
    pub rotation_rate: f64,
}

/// Tangential part of the spatial acceleration of `curve` at `t`.
pub fn tangential_acceleration(
    surface: &ParametricSurface,
    curve: &ParamCurve,
    t: f64,
) -> Result<TangentialAcceleration> {
    let state = curve_state(surface, curve, t, Side::Right)?;
    let (du, dv) = state.velocity;
    let (ddu, ddv) = curve.acceleration(t);
    let jet = &state.frame.jet;
    let velocity = state.frame.push_forward(du, dv);
    let speed = velocity.norm();
    if !(speed > 0.0) {
        return Err(Error::CurveNotRegular { t });
    }
    let a = jet.ruu * (du * du) + jet.ruv * (2.0 * du * dv) + jet.rvv * (dv * dv)
        + jet.ru * ddu
        + jet.rv * ddv;
    let a_t = state.frame.project(&a);
    Ok(TangentialAcceleration {
        a_t: a_t.into(),
        rotation_rate: a_t.norm() / speed,
    })
}
