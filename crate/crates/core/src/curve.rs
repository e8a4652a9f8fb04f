//! Curves `t -> (u(t), v(t))`, `t in [0, 1]`, in a surface's parameter domain.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

pub type ParamFn = dyn Fn(f64) -> (f64, f64) + Send + Sync;

/// Which one-sided limit to take at a corner of a piecewise-smooth curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Node of a sampled curve: position, first and second derivative in `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveNode {
    pub t: f64,
    pub point: (f64, f64),
    pub velocity: (f64, f64),
    pub acceleration: (f64, f64),
}

#[derive(Clone)]
enum Kind {
    Analytic {
        path: Arc<ParamFn>,
        derivative: Option<Arc<ParamFn>>,
        second: Option<Arc<ParamFn>>,
    },
    /// Straight segments in parameter space, each taking an equal share of `t`.
    Polyline { points: Vec<(f64, f64)> },
    /// Quintic Hermite interpolation of uniformly spaced nodes.
    Sampled { nodes: Vec<CurveNode> },
}

/// A path in parameter space, possibly closed.
#[derive(Clone)]
pub struct ParamCurve {
    kind: Kind,
    closed: bool,
}

impl fmt::Debug for ParamCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            Kind::Analytic { derivative, .. } => {
                format!("analytic(derivative: {})", derivative.is_some())
            }
            Kind::Polyline { points } => format!("polyline({} vertices)", points.len()),
            Kind::Sampled { nodes } => format!("sampled({} nodes)", nodes.len()),
        };
        f.debug_struct("ParamCurve")
            .field("kind", &kind)
            .field("closed", &self.closed)
            .finish()
    }
}

const FD_STEP: f64 = 1e-5;

impl ParamCurve {
    /// Curve from a path function; derivatives by central differences.
    pub fn new<F>(path: F, closed: bool) -> Self
    where
        F: Fn(f64) -> (f64, f64) + Send + Sync + 'static,
    {
        Self {
            kind: Kind::Analytic {
                path: Arc::new(path),
                derivative: None,
                second: None,
            },
            closed,
        }
    }

    /// Curve with an analytic first derivative.
    pub fn with_derivative<F, D>(path: F, derivative: D, closed: bool) -> Self
    where
        F: Fn(f64) -> (f64, f64) + Send + Sync + 'static,
        D: Fn(f64) -> (f64, f64) + Send + Sync + 'static,
    {
        Self {
            kind: Kind::Analytic {
                path: Arc::new(path),
                derivative: Some(Arc::new(derivative)),
                second: None,
            },
            closed,
        }
    }

    /// Curve with analytic first and second derivatives.
    pub fn with_derivatives<F, D, S>(path: F, derivative: D, second: S, closed: bool) -> Self
    where
        F: Fn(f64) -> (f64, f64) + Send + Sync + 'static,
        D: Fn(f64) -> (f64, f64) + Send + Sync + 'static,
        S: Fn(f64) -> (f64, f64) + Send + Sync + 'static,
    {
        Self {
            kind: Kind::Analytic {
                path: Arc::new(path),
                derivative: Some(Arc::new(derivative)),
                second: Some(Arc::new(second)),
            },
            closed,
        }
    }

    /// Loop at constant `v` running once around the periodic `u` axis,
    /// `u = u0 + 2 pi t` (or decreasing when `forward` is false).
    pub fn u_loop(v: f64, forward: bool) -> Self {
        let s = if forward { TAU } else { -TAU };
        Self::with_derivatives(
            move |t| (s * t, v),
            move |_| (s, 0.0),
            |_| (0.0, 0.0),
            true,
        )
    }

    /// Counterclockwise latitude circle of a spherical chart at latitude `phi`.
    pub fn latitude(phi: f64) -> Self {
        Self::u_loop(phi, true)
    }

    /// Loop at constant `psi` on a torus, oriented as the positive boundary of
    /// the band between it and the top circle `psi = pi/2`.
    pub fn torus_tube_loop(psi: f64) -> Self {
        Self::u_loop(psi, psi.cos() >= 0.0)
    }

    /// Counterclockwise ellipse in parameter space.
    pub fn ellipse(center: (f64, f64), semi_u: f64, semi_v: f64, tilt: f64) -> Self {
        let (st, ct) = tilt.sin_cos();
        let (cu, cv) = center;
        Self::with_derivatives(
            move |t| {
                let (s, c) = (TAU * t).sin_cos();
                let (x, y) = (semi_u * c, semi_v * s);
                (cu + ct * x - st * y, cv + st * x + ct * y)
            },
            move |t| {
                let (s, c) = (TAU * t).sin_cos();
                let (x, y) = (-TAU * semi_u * s, TAU * semi_v * c);
                (ct * x - st * y, st * x + ct * y)
            },
            move |t| {
                let (s, c) = (TAU * t).sin_cos();
                let k = -TAU * TAU;
                let (x, y) = (k * semi_u * c, k * semi_v * s);
                (ct * x - st * y, st * x + ct * y)
            },
            true,
        )
    }

    /// Counterclockwise circle of radius `radius` in parameter space.
    pub fn circle(center: (f64, f64), radius: f64) -> Self {
        Self::ellipse(center, radius, radius, 0.0)
    }

    /// Closed polygon through `points` (the closing segment is implied).
    pub fn polygon(points: Vec<(f64, f64)>) -> Self {
        Self {
            kind: Kind::Polyline { points },
            closed: true,
        }
    }

    /// Counterclockwise boundary of the rectangle `[u0, u1] x [v0, v1]`.
    pub fn rectangle(u0: f64, v0: f64, u1: f64, v1: f64) -> Self {
        Self::polygon(vec![(u0, v0), (u1, v0), (u1, v1), (u0, v1)])
    }

    /// Curve through uniformly spaced nodes (`nodes[k].t = k / (n - 1)`).
    pub fn sampled(nodes: Vec<CurveNode>, closed: bool) -> Self {
        Self {
            kind: Kind::Sampled { nodes },
            closed,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Same set of points traversed backwards.
    pub fn reversed(&self) -> Self {
        let kind = match &self.kind {
            Kind::Polyline { points } => {
                let mut p = points.clone();
                p.reverse();
                // keep the start vertex
                p.rotate_right(1);
                Kind::Polyline { points: p }
            }
            Kind::Sampled { nodes } => {
                let nodes = nodes
                    .iter()
                    .rev()
                    .map(|n| CurveNode {
                        t: 1.0 - n.t,
                        point: n.point,
                        velocity: (-n.velocity.0, -n.velocity.1),
                        acceleration: n.acceleration,
                    })
                    .collect();
                Kind::Sampled { nodes }
            }
            Kind::Analytic { .. } => {
                let me = self.clone();
                let me2 = self.clone();
                let me3 = self.clone();
                Kind::Analytic {
                    path: Arc::new(move |t| me.point(1.0 - t)),
                    derivative: Some(Arc::new(move |t| {
                        let (a, b) = me2.velocity_at(1.0 - t, Side::Left);
                        (-a, -b)
                    })),
                    second: Some(Arc::new(move |t| me3.acceleration_at(1.0 - t, Side::Left))),
                }
            }
        };
        Self {
            kind,
            closed: self.closed,
        }
    }

    /// Parameters in `(0, 1)` where the curve has corners.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            Kind::Polyline { points } => {
                let n = points.len();
                (1..n).map(|k| k as f64 / n as f64).collect()
            }
            _ => Vec::new(),
        }
    }

    pub fn point(&self, t: f64) -> (f64, f64) {
        match &self.kind {
            Kind::Analytic { path, .. } => path(t),
            Kind::Polyline { points } => {
                let (a, b, s, _) = polyline_segment(points, t, Side::Right);
                (a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1))
            }
            Kind::Sampled { nodes } => hermite(nodes, t).0,
        }
    }

    pub fn velocity(&self, t: f64) -> (f64, f64) {
        self.velocity_at(t, Side::Right)
    }

    /// Derivative `(u'(t), v'(t))`, one-sided at corners.
    pub fn velocity_at(&self, t: f64, side: Side) -> (f64, f64) {
        match &self.kind {
            Kind::Analytic {
                path, derivative, ..
            } => match derivative {
                Some(d) => d(t),
                None => central_difference(&**path, t),
            },
            Kind::Polyline { points } => {
                let n = points.len() as f64;
                let (a, b, _, _) = polyline_segment(points, t, side);
                (n * (b.0 - a.0), n * (b.1 - a.1))
            }
            Kind::Sampled { nodes } => hermite(nodes, t).1,
        }
    }

    pub fn acceleration(&self, t: f64) -> (f64, f64) {
        self.acceleration_at(t, Side::Right)
    }

    /// Second derivative `(u''(t), v''(t))`.
    pub fn acceleration_at(&self, t: f64, _side: Side) -> (f64, f64) {
        match &self.kind {
            Kind::Analytic {
                derivative, second, ..
            } => match (second, derivative) {
                (Some(s), _) => s(t),
                (None, Some(d)) => central_difference(&**d, t),
                (None, None) => {
                    let h = FD_STEP;
                    let (a, b) = (self.point(t - h), self.point(t + h));
                    let m = self.point(t);
                    (
                        (a.0 - 2.0 * m.0 + b.0) / (h * h),
                        (a.1 - 2.0 * m.1 + b.1) / (h * h),
                    )
                }
            },
            Kind::Polyline { .. } => (0.0, 0.0),
            Kind::Sampled { nodes } => hermite(nodes, t).2,
        }
    }

    /// `n + 1` uniformly spaced parameter points, `t = 0, 1/n, ..., 1`.
    pub fn sample(&self, n: usize) -> Vec<(f64, f64)> {
        (0..=n).map(|k| self.point(k as f64 / n as f64)).collect()
    }
}

fn central_difference(f: &ParamFn, t: f64) -> (f64, f64) {
    let h = FD_STEP;
    let (a, b) = (f(t - h), f(t + h));
    ((b.0 - a.0) / (2.0 * h), (b.1 - a.1) / (2.0 * h))
}

/// Segment endpoints, local parameter and segment index for `t`.
fn polyline_segment(
    points: &[(f64, f64)],
    t: f64,
    side: Side,
) -> ((f64, f64), (f64, f64), f64, usize) {
    let n = points.len();
    let x = t.clamp(0.0, 1.0) * n as f64;
    let mut k = x.floor() as usize;
    // On a corner the left limit belongs to the previous segment.
    if side == Side::Left && k > 0 && (x - k as f64) == 0.0 {
        k -= 1;
    }
    let k = k.min(n - 1);
    let s = x - k as f64;
    (points[k], points[(k + 1) % n], s, k)
}

pub(crate) type Pair = (f64, f64);

/// Quintic Hermite interpolation: value, first and second derivative.
fn hermite(nodes: &[CurveNode], t: f64) -> (Pair, Pair, Pair) {
    let segments = nodes.len() - 1;
    let x = t.clamp(0.0, 1.0) * segments as f64;
    let k = (x.floor() as usize).min(segments - 1);
    let s = x - k as f64;
    hermite_segment(&nodes[k], &nodes[k + 1], 1.0 / segments as f64, s)
}

/// Quintic Hermite interpolation between two nodes `h` apart in `t`, at the
/// local coordinate `s in [0, 1]`.
pub(crate) fn hermite_segment(a: &CurveNode, b: &CurveNode, h: f64, s: f64) -> (Pair, Pair, Pair) {
    let s2 = s * s;
    let s3 = s2 * s;
    let s4 = s3 * s;
    let s5 = s4 * s;
    let basis = [
        1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5,
        s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5,
        0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5,
        0.5 * s3 - s4 + 0.5 * s5,
        -4.0 * s3 + 7.0 * s4 - 3.0 * s5,
        10.0 * s3 - 15.0 * s4 + 6.0 * s5,
    ];
    let d1 = [
        -30.0 * s2 + 60.0 * s3 - 30.0 * s4,
        1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4,
        s - 4.5 * s2 + 6.0 * s3 - 2.5 * s4,
        1.5 * s2 - 4.0 * s3 + 2.5 * s4,
        -12.0 * s2 + 28.0 * s3 - 15.0 * s4,
        30.0 * s2 - 60.0 * s3 + 30.0 * s4,
    ];
    let d2 = [
        -60.0 * s + 180.0 * s2 - 120.0 * s3,
        -36.0 * s + 96.0 * s2 - 60.0 * s3,
        1.0 - 9.0 * s + 18.0 * s2 - 10.0 * s3,
        3.0 * s - 12.0 * s2 + 10.0 * s3,
        -24.0 * s + 84.0 * s2 - 60.0 * s3,
        60.0 * s - 180.0 * s2 + 120.0 * s3,
    ];
    let combine = |w: &[f64; 6], scale: f64| -> Pair {
        let comp = |sel: fn(Pair) -> f64| {
            (w[0] * sel(a.point)
                + w[1] * h * sel(a.velocity)
                + w[2] * h * h * sel(a.acceleration)
                + w[3] * h * h * sel(b.acceleration)
                + w[4] * h * sel(b.velocity)
                + w[5] * sel(b.point))
                * scale
        };
        (comp(|p| p.0), comp(|p| p.1))
    };
    (
        combine(&basis, 1.0),
        combine(&d1, 1.0 / h),
        combine(&d2, 1.0 / (h * h)),
    )
}
