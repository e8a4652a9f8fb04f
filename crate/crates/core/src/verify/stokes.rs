use crate::curve::{ParamCurve, Side};
use crate::error::{Error, Result};
use crate::numeric::{CompensatedSum, Vec3};
use crate::surface::ParametricSurface;

/// Below this `x^2 + y^2` a curve point is considered on the z-axis.
const AXIS_EPS: f64 = 1e-10;

/// Allowed deviation of `|c(t)|` from 1.
const SPHERE_TOL: f64 = 1e-9;

/// `F = ((1 - sqrt(1 - x^2 - y^2)) / (x^2 + y^2)) (-y, x, 0)`, the field whose
/// curl on the upper unit hemisphere is `(1 - x^2 - y^2)^(-1/2) k`.
///
/// Evaluated in the equivalent form `(-y, x, 0) / (1 + sqrt(1 - x^2 - y^2))`,
/// which does not cancel near the axis.
pub fn stokes_field(p: &Vec3) -> Vec3 {
    let rho2 = p.x * p.x + p.y * p.y;
    let root = (1.0 - rho2).max(0.0).sqrt();
    Vec3::new(-p.y, p.x, 0.0) / (1.0 + root)
}

/// Curl of [`stokes_field`] at `p` by central differences with step `h`.
pub fn stokes_curl(p: &Vec3, h: f64) -> Vec3 {
    let d = |axis: Vec3| (stokes_field(&(p + axis * h)) - stokes_field(&(p - axis * h))) / (2.0 * h);
    let (dx, dy, dz) = (d(Vec3::x()), d(Vec3::y()), d(Vec3::z()));
    Vec3::new(dy.z - dz.y, dz.x - dx.z, dx.y - dy.x)
}

/// `oint F . ds` along a closed curve on the upper unit hemisphere, by the
/// composite Simpson rule with `steps` panels (split at curve corners).
///
/// `sphere` is any chart of the unit sphere; `curve` lives in its parameters.
pub fn stokes_deficit_sphere(
    sphere: &ParametricSurface,
    curve: &ParamCurve,
    steps: usize,
) -> Result<f64> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be positive".into()));
    }
    let integrand = |t: f64, side: Side| -> Result<f64> {
        let (u, v) = curve.point(t);
        let (du, dv) = curve.velocity_at(t, side);
        let jet = sphere.jet(u, v);
        let p = jet.position;
        let deviation = p.norm() - 1.0;
        if !(deviation.abs() <= SPHERE_TOL) {
            return Err(Error::NotOnUnitSphere { t, deviation });
        }
        if p.z < 0.0 {
            return Err(Error::SouthernHemisphere { t, z: p.z });
        }
        if p.x * p.x + p.y * p.y < AXIS_EPS {
            return Err(Error::NearAxis { t });
        }
        Ok(stokes_field(&p).dot(&(jet.ru * du + jet.rv * dv)))
    };

    let breakpoints = curve.breakpoints();
    let mut sum = CompensatedSum::new();
    for k in 0..steps {
        let (a, b) = (k as f64 / steps as f64, (k + 1) as f64 / steps as f64);
        let mut cuts = vec![a];
        cuts.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
        cuts.push(b);
        for piece in cuts.windows(2) {
            let (p, q) = (piece[0], piece[1]);
            let m = 0.5 * (p + q);
            let simpson = integrand(p, Side::Right)?
                + 4.0 * integrand(m, Side::Right)?
                + integrand(q, Side::Left)?;
            sum.add(simpson * (q - p) / 6.0);
        }
    }
    Ok(sum.value())
}
