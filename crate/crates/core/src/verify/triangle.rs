use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::{Matrix3, Rotation3};

use crate::curve::{hermite_segment, CurveNode};
use crate::error::{Error, Result};
use crate::numeric::{signed_angle, Vec3};
use crate::surface::ParametricSurface;
use crate::transport::{integrate_geodesic, trace_geodesic, Geodesic};

use super::{integrate_curvature, Identity, ParamRegion, VerificationReport};

/// Terminal miss distance accepted by the shooting method.
pub const SHOOTING_TOL: f64 = 1e-8;

/// Largest endpoint gap tolerated when the shot geodesic is re-integrated.
const CLOSURE_TOL: f64 = 1e-6;

/// A geodesic triangle and the comparison of its angle excess with the
/// curvature integral over its interior.
#[derive(Debug, Clone)]
pub struct GeodesicTriangle {
    pub vertices: [(f64, f64); 3],
    /// Interior angles at the three vertices.
    pub angles: [f64; 3],
    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub edges: Vec<Geodesic>,
    /// Closed boundary polygon in the parameters of the input chart.
    pub boundary: Vec<(f64, f64)>,
    /// `lhs` is the excess `sum(angles) - pi`, `rhs` the curvature integral.
    pub report: VerificationReport,
}

impl GeodesicTriangle {
    pub fn angle_sum(&self) -> f64 {
        self.angles.iter().sum()
    }
}

/// The octant of the unit sphere with vertices on the positive axes, in a
/// rotated chart whose poles and seam stay clear of it. Vertices are
/// `(0, 0, 1)`, `(1, 0, 0)` and `(0, 1, 0)`, counterclockwise about the
/// outward normal.
pub fn octant_triangle() -> (ParametricSurface, [(f64, f64); 3]) {
    let s = FRAC_1_SQRT_2;
    // Columns are the images of e_x, e_y, e_z.
    let q = Matrix3::new(
        0.0, -s, s, //
        0.0, -s, -s, //
        1.0, 0.0, 0.0,
    );
    let sphere = ParametricSurface::sphere(1.0)
        .with_chart_rotation(Rotation3::from_matrix_unchecked(q));
    (sphere, [(0.0, 0.0), (-FRAC_PI_2, FRAC_PI_4), (-FRAC_PI_2, -FRAC_PI_4)])
}

struct Shot {
    direction: Vec3,
    length: f64,
    path: Vec<(f64, f64)>,
}

struct Approach {
    /// Fraction of the traced length at closest approach.
    t: f64,
    /// Distance at closest approach, negative when the target lies to the
    /// right of the path.
    miss: f64,
}

fn closest_approach(surface: &ParametricSurface, nodes: &[CurveNode], target: &Vec3) -> Option<Approach> {
    if nodes.len() < 2 {
        return None;
    }
    let h = nodes[1].t - nodes[0].t;
    let eval = |t: f64| {
        let j = (((t - nodes[0].t) / h).floor() as usize).min(nodes.len() - 2);
        let s = (t - nodes[j].t) / h;
        let (p, d, _) = hermite_segment(&nodes[j], &nodes[j + 1], h, s);
        (p, d)
    };
    let dist = |t: f64| {
        let (p, _) = eval(t);
        (surface.position(p.0, p.1) - target).norm()
    };
    let k = (0..nodes.len())
        .min_by(|&a, &b| {
            let da = (surface.position(nodes[a].point.0, nodes[a].point.1) - target).norm();
            let db = (surface.position(nodes[b].point.0, nodes[b].point.1) - target).norm();
            da.total_cmp(&db)
        })
        .unwrap();
    let (mut lo, mut hi) = (nodes[k.saturating_sub(1)].t, nodes[(k + 1).min(nodes.len() - 1)].t);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let a = hi - ratio * (hi - lo);
        let b = lo + ratio * (hi - lo);
        if dist(a) < dist(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let t = 0.5 * (lo + hi);
    let ((u, v), (du, dv)) = eval(t);
    let frame = surface.local_frame(u, v).ok()?;
    let tangent = frame.push_forward(du, dv).normalize();
    let offset = target - frame.jet.position;
    let lateral = offset.dot(&frame.normal.cross(&tangent));
    Some(Approach {
        t,
        miss: offset.norm().copysign(lateral),
    })
}

/// Finds the launch direction at `from` whose geodesic passes through `to`.
fn shoot(
    surface: &ParametricSurface,
    from: (f64, f64),
    to: (f64, f64),
    edge: usize,
    steps: usize,
) -> Result<Shot> {
    let frame = surface.local_frame(from.0, from.1)?;
    let target = surface.position(to.0, to.1);
    let chord = (target - frame.jet.position).norm();
    let period = |axis: &crate::surface::Interval, d: f64| {
        if axis.periodic {
            d - axis.extent() * (d / axis.extent()).round()
        } else {
            d
        }
    };
    let d = surface.domain();
    let guess = frame
        .push_forward(period(&d.u, to.0 - from.0), period(&d.v, to.1 - from.1))
        .normalize();
    let side = frame.normal.cross(&guess);
    let launch = |alpha: f64| guess * alpha.cos() + side * alpha.sin();

    let attempt = |alpha: f64| -> Option<(f64, Approach, Vec<CurveNode>, f64)> {
        let mut length = 2.0 * chord;
        for _ in 0..4 {
            let trace = trace_geodesic(surface, from, &launch(alpha), length, steps, true).ok()?;
            let a = closest_approach(surface, &trace.nodes, &target)?;
            let at_end = a.t >= trace.nodes.last().unwrap().t - 1e-12;
            if at_end && trace.exit.is_none() {
                length *= 2.0;
                continue;
            }
            return Some((alpha, a, trace.nodes, length));
        }
        None
    };
    let finish = |(alpha, a, nodes, length): (f64, Approach, Vec<CurveNode>, f64)| {
        let mut path: Vec<(f64, f64)> =
            nodes.iter().take_while(|n| n.t < a.t).map(|n| n.point).collect();
        path.push(to);
        Shot {
            direction: launch(alpha),
            length: a.t * length,
            path,
        }
    };
    let fail = |miss: f64| Error::GeodesicShootingFailed { edge, miss };

    let first = attempt(0.0).ok_or_else(|| fail(f64::INFINITY))?;
    if first.1.miss.abs() < SHOOTING_TOL {
        return Ok(finish(first));
    }
    // Scan outwards on both sides for a sign change of the miss.
    let delta = 0.02;
    let mut previous = [(0.0, first.1.miss), (0.0, first.1.miss)];
    let mut bracket = None;
    'scan: for k in 1..=60 {
        for (slot, sign) in [(0usize, 1.0), (1, -1.0)] {
            let alpha = sign * k as f64 * delta;
            let Some(r) = attempt(alpha) else { continue };
            let (a0, m0) = previous[slot];
            let m = r.1.miss;
            if m.signum() != m0.signum() && m.abs() < 0.5 * chord && m0.abs() < 0.5 * chord {
                bracket = Some(((a0, m0), (alpha, m)));
                break 'scan;
            }
            previous[slot] = (alpha, m);
        }
    }
    let ((mut lo, m_lo), (mut hi, _)) = bracket.ok_or_else(|| fail(first.1.miss.abs()))?;
    let mut best = first;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let r = attempt(mid).ok_or_else(|| fail(f64::INFINITY))?;
        let m = r.1.miss;
        let done = m.abs() < SHOOTING_TOL;
        let collapsed = (hi - lo).abs() < 1e-15;
        best = r;
        if done {
            return Ok(finish(best));
        }
        if collapsed {
            break;
        }
        if m.signum() == m_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(fail(best.1.miss.abs()))
}

/// Shoots the three geodesic edges between `vertices`, measures the interior
/// angles and compares the excess with the curvature integral over the
/// enclosed parameter region at `resolution`.
pub fn geodesic_triangle_excess(
    surface: &ParametricSurface,
    vertices: [(f64, f64); 3],
    steps: usize,
    resolution: (usize, usize),
) -> Result<GeodesicTriangle> {
    let mut shots = Vec::with_capacity(3);
    let mut edges = Vec::with_capacity(3);
    for i in 0..3 {
        let (from, to) = (vertices[i], vertices[(i + 1) % 3]);
        let shot = shoot(surface, from, to, i, steps)?;
        let g = integrate_geodesic(surface, from, shot.direction, shot.length, steps)?;
        let gap = (g.end_point() - surface.position(to.0, to.1)).norm();
        if gap > CLOSURE_TOL {
            return Err(Error::GeodesicShootingFailed { edge: i, miss: gap });
        }
        shots.push(shot);
        edges.push(g);
    }

    let mut turns = [0.0; 3];
    for i in 0..3 {
        let (u, v) = vertices[i];
        let normal = surface.unit_normal(u, v)?;
        let incoming = edges[(i + 2) % 3].unit_velocity(1.0)?;
        turns[i] = signed_angle(&incoming, &shots[i].direction, &normal);
    }
    let ccw = turns.iter().sum::<f64>() > 0.0;
    let angles = turns.map(|turn| if ccw { PI - turn } else { PI + turn });
    let excess = angles.iter().sum::<f64>() - PI;

    // Boundary polygon, unwrapped across periodic axes.
    let d = *surface.domain();
    let mut boundary: Vec<(f64, f64)> = Vec::new();
    for shot in &shots {
        for &(u, v) in &shot.path {
            let (u, v) = match boundary.last() {
                Some(&(pu, pv)) => {
                    let near = |x: f64, prev: f64, axis: &crate::surface::Interval| {
                        if axis.periodic {
                            x - axis.extent() * ((x - prev) / axis.extent()).round()
                        } else {
                            x
                        }
                    };
                    (near(u, pu, &d.u), near(v, pv, &d.v))
                }
                None => (u, v),
            };
            boundary.push((u, v));
        }
    }
    boundary.dedup();

    let (mut u0, mut u1, mut v0, mut v1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(u, v) in &boundary {
        u0 = u0.min(u);
        u1 = u1.max(u);
        v0 = v0.min(v);
        v1 = v1.max(v);
    }
    if !d.v.periodic {
        v0 = v0.max(d.v.min);
        v1 = v1.min(d.v.max);
    }
    if !d.u.periodic {
        u0 = u0.max(d.u.min);
        u1 = u1.min(d.u.max);
    }
    let region = ParamRegion::polygon(&boundary, (u0, v0, u1, v1), resolution);
    let area_k = integrate_curvature(surface, &region)?;

    Ok(GeodesicTriangle {
        vertices,
        angles,
        edges,
        boundary,
        report: VerificationReport::new(Identity::Triangle, excess, area_k)
            .with_resolution(resolution)
            .with_steps(steps),
    })
}
