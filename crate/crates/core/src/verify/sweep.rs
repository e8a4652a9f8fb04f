use std::f64::consts::PI;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::ParamCurve;
use crate::surface::ParametricSurface;

use super::ParamRegion;

/// A small closed loop together with the parameter region it bounds.
#[derive(Debug, Clone)]
pub struct RandomLoop {
    pub surface: ParametricSurface,
    pub curve: ParamCurve,
    pub region: ParamRegion,
    pub center: (f64, f64),
    pub semi_axes: (f64, f64),
    pub tilt: f64,
}

/// `count` counterclockwise parameter-space ellipses, cycling through the
/// unit sphere, the torus (2, 1) and the ellipsoid (1, 0.8, 0.5).
///
/// Every loop stays inside a single region of definite curvature sign: on
/// the torus it lies either on the outer half or on the inner half.
pub fn random_loops(seed: u64, count: usize) -> Vec<RandomLoop> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let surfaces = [
        ParametricSurface::sphere(1.0),
        ParametricSurface::torus(2.0, 1.0),
        ParametricSurface::ellipsoid(1.0, 0.8, 0.5),
    ];
    (0..count)
        .map(|k| {
            let surface = surfaces[k % surfaces.len()].clone();
            let a: f64 = rng.random_range(0.1..0.35);
            let b: f64 = rng.random_range(0.1..0.35);
            let tilt: f64 = rng.random_range(0.0..PI);
            let u: f64 = rng.random_range(-PI..PI);
            let v = if k % surfaces.len() == 1 {
                let inner: bool = rng.random();
                let offset: f64 = rng.random_range(-0.9..0.9);
                if inner { PI + offset } else { offset }
            } else {
                rng.random_range(-1.0..1.0)
            };
            ellipse_loop(surface, (u, v), (a, b), tilt)
        })
        .collect()
}

/// The loop and region for one parameter-space ellipse.
pub(crate) fn ellipse_loop(
    surface: ParametricSurface,
    center: (f64, f64),
    semi_axes: (f64, f64),
    tilt: f64,
) -> RandomLoop {
    let (a, b) = semi_axes;
    let (st, ct) = tilt.sin_cos();
    let half_u = (a * a * ct * ct + b * b * st * st).sqrt();
    let half_v = (a * a * st * st + b * b * ct * ct).sqrt();
    let (cu, cv) = center;
    let region = ParamRegion::rectangle(cu - half_u, cv - half_v, cu + half_u, cv + half_v)
        .with_indicator(move |u, v| {
            let (x, y) = (u - cu, v - cv);
            let (p, q) = (ct * x + st * y, -st * x + ct * y);
            (p / a).powi(2) + (q / b).powi(2) <= 1.0
        });
    RandomLoop {
        surface,
        curve: ParamCurve::ellipse(center, a, b, tilt),
        region,
        center,
        semi_axes,
        tilt,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_is_deterministic_and_in_domain() {
        let a = random_loops(42, 12);
        let b = random_loops(42, 12);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.center, y.center);
            assert_eq!(x.semi_axes, y.semi_axes);
        }
        for l in &a {
            for (u, v) in l.curve.sample(64) {
                assert!(l.surface.domain().contains(u, v));
                if l.surface.name().starts_with("torus") {
                    // never crosses the parabolic circles psi = +-pi/2
                    assert!(v.cos().abs() > 0.0);
                    assert_eq!(v.cos() > 0.0, l.center.1.cos() > 0.0);
                }
            }
        }
    }
}
