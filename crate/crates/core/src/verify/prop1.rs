use crate::curve::ParamCurve;
use crate::error::{Error, Result};
use crate::surface::ParametricSurface;
use crate::transport::deficit_angle;

use super::{Identity, VerificationReport};

/// The Gauss image `N(c(t))` of `curve`, as a curve on the unit sphere.
///
/// Of the three axis-aligned latitude/longitude charts of the unit sphere the
/// one keeping the image farthest from its poles is used; that chart is
/// returned with the curve. `samples` nodes are checked for a vanishing
/// image velocity, which is reported as [`Error::GaussMapDegenerate`].
pub fn gauss_image(
    surface: &ParametricSurface,
    curve: &ParamCurve,
    samples: usize,
) -> Result<(ParametricSurface, ParamCurve)> {
    let samples = samples.max(2);
    let mut normals = Vec::with_capacity(samples + 1);
    for k in 0..=samples {
        let t = k as f64 / samples as f64;
        let (u, v) = curve.point(t);
        let (du, dv) = curve.velocity(t);
        let frame = surface.local_frame(u, v)?;
        let speed = frame.normal_derivative(du, dv).norm();
        let reference = frame.push_forward(du, dv).norm() / surface.length_scale();
        if !(speed > 1e-9 * reference) {
            return Err(Error::GaussMapDegenerate { t, speed });
        }
        normals.push(frame.normal);
    }

    let unit = ParametricSurface::sphere(1.0);
    let charts = std::iter::once(unit.clone()).chain(unit.alternate_charts());
    let sphere = charts
        .map(|chart| {
            let polar = normals
                .iter()
                .map(|n| chart.locate(n).map_or(f64::INFINITY, |p| p.1.abs()))
                .fold(0.0, f64::max);
            (polar, chart)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, chart)| chart)
        .expect("three charts");

    let (s1, c1, c2) = (surface.clone(), curve.clone(), curve.clone());
    let (s2, sphere1, sphere2) = (surface.clone(), sphere.clone(), sphere.clone());
    let image = ParamCurve::with_derivative(
        move |t| {
            let (u, v) = c1.point(t);
            match s1.unit_normal(u, v) {
                Ok(n) => sphere1.locate(&n).unwrap_or((f64::NAN, f64::NAN)),
                Err(_) => (f64::NAN, f64::NAN),
            }
        },
        move |t| {
            let (u, v) = c2.point(t);
            let (du, dv) = c2.velocity(t);
            let image_velocity = s2.local_frame(u, v).and_then(|frame| {
                let n = frame.normal;
                let n_dot = frame.normal_derivative(du, dv);
                let (a, b) = sphere2.locate(&n).ok_or(Error::OutOfDomain { u, v })?;
                let p = sphere2.local_frame(a, b)?.pull_back(&n_dot);
                Ok((p[0], p[1]))
            });
            image_velocity.unwrap_or((f64::NAN, f64::NAN))
        },
        curve.is_closed(),
    );
    Ok((sphere, image))
}

/// Deficit along `curve` on `surface` against the deficit along its Gauss
/// image on the unit sphere, both at `steps` integration steps.
pub fn verify_prop1(
    surface: &ParametricSurface,
    curve: &ParamCurve,
    steps: usize,
) -> Result<VerificationReport> {
    let lhs = deficit_angle(surface, curve, steps)?;
    let (sphere, image) = gauss_image(surface, curve, steps)?;
    let rhs = deficit_angle(&sphere, &image, steps)?;
    Ok(VerificationReport::new(Identity::Prop1, lhs, rhs).with_steps(steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    #[test]
    fn sphere_loop_is_its_own_image() {
        let s = ParametricSurface::sphere(1.0);
        let r = verify_prop1(&s, &ParamCurve::latitude(FRAC_PI_6), 1024).unwrap();
        assert!(r.abs_error < 1e-7, "{r:?}");
    }

    #[test]
    fn torus_outer_and_inner_loops() {
        let t = ParametricSurface::torus(2.0, 1.0);
        let outer = verify_prop1(&t, &ParamCurve::torus_tube_loop(FRAC_PI_4), 1024).unwrap();
        assert!(outer.abs_error < 1e-5 && outer.lhs > 0.0, "{outer:?}");
        let inner = verify_prop1(&t, &ParamCurve::torus_tube_loop(3.0 * FRAC_PI_4), 1024).unwrap();
        assert!(inner.abs_error < 1e-5 && inner.rhs < 0.0, "{inner:?}");
    }

    #[test]
    fn flat_surfaces_have_degenerate_images() {
        let p = ParametricSurface::plane();
        let err = verify_prop1(&p, &ParamCurve::circle((0.0, 0.0), 1.0), 64).unwrap_err();
        assert!(matches!(err, Error::GaussMapDegenerate { .. }));
    }

    #[test]
    fn torus_outer_equator_maps_to_sphere_equator() {
        let t = ParametricSurface::torus(2.0, 1.0);
        for k in 0..16 {
            let theta = k as f64 * 0.4;
            let g = t.gauss_map(theta, 0.0).unwrap();
            assert!(g.v.abs() < 1e-15);
            let n = t.unit_normal(theta, 0.0).unwrap();
            assert!((crate::numeric::Vec3::from(g.position) - n).norm() < 1e-15);
        }
    }
}
