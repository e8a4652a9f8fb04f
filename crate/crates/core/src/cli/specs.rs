//! Text grammars for the surface, loop and triangle arguments.

use std::f64::consts::{FRAC_PI_2, TAU};

use crate::curve::ParamCurve;
use crate::surface::ParametricSurface;
use crate::verify::{octant_triangle, ParamRegion};

/// Parses `<name>[:<p1>,<p2>,...]`: `sphere:R`, `torus:R,r`, `cylinder:R`,
/// `cone:<half-angle in degrees>`, `ellipsoid:a,b,c` or `plane`.
pub fn parse_surface(spec: &str) -> Result<ParametricSurface, String> {
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    let numbers = |expected: usize| -> Result<Vec<f64>, String> {
        let values: Vec<f64> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',').map(number).collect::<Result<_, _>>()?
        };
        if values.len() != expected {
            return Err(format!("`{name}` takes {expected} parameter(s), got `{spec}`"));
        }
        if let Some(bad) = values.iter().find(|&&x| !(x > 0.0)) {
            return Err(format!("surface parameters must be positive, got {bad}"));
        }
        Ok(values)
    };
    match name {
        "sphere" => Ok(ParametricSurface::sphere(numbers(1)?[0])),
        "torus" => {
            let p = numbers(2)?;
            if p[1] >= p[0] {
                return Err(format!("torus needs R > r, got R = {}, r = {}", p[0], p[1]));
            }
            Ok(ParametricSurface::torus(p[0], p[1]))
        }
        "cylinder" => Ok(ParametricSurface::cylinder(numbers(1)?[0])),
        "cone" => {
            let deg = angle_degrees(args)?;
            if !(deg > 0.0 && deg < 90.0) {
                return Err(format!("cone half-angle must lie in (0, 90) degrees, got {deg}"));
            }
            Ok(ParametricSurface::cone(deg.to_radians()))
        }
        "ellipsoid" => {
            let p = numbers(3)?;
            Ok(ParametricSurface::ellipsoid(p[0], p[1], p[2]))
        }
        "plane" if args.is_empty() => Ok(ParametricSurface::plane()),
        "plane" => Err("`plane` takes no parameters".into()),
        _ => Err(format!(
            "unknown surface `{name}` (expected sphere, torus, cylinder, cone, ellipsoid or plane)"
        )),
    }
}

fn number(text: &str) -> Result<f64, String> {
    let x: f64 = text
        .trim()
        .parse()
        .map_err(|_| format!("expected a number, found `{text}`"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("expected a finite number, found `{text}`"))
    }
}

/// An angle in degrees, written `30`, `30deg` or `0.5rad`.
pub fn angle_degrees(text: &str) -> Result<f64, String> {
    let t = text.trim();
    if let Some(r) = t.strip_suffix("rad") {
        Ok(number(r)?.to_degrees())
    } else {
        number(t.strip_suffix("deg").unwrap_or(t))
    }
}

/// A closed loop and, where the grammar determines one, the region it bounds.
pub struct LoopSpec {
    pub curve: ParamCurve,
    pub region: Option<ParamRegion>,
}

/// Parses `latitude:<deg>`, `tube:<deg>`, `circle:<r>[@u,v]` or
/// `param:u0,v0,u1,v1,...`. Circle radii, centers and polygon vertices are
/// in the surface's own parameter units.
pub fn parse_loop(spec: &str, surface: &ParametricSurface, resolution: (usize, usize)) -> Result<LoopSpec, String> {
    let (kind, args) = spec
        .split_once(':')
        .ok_or_else(|| format!("loop spec `{spec}` needs the form <kind>:<arguments>"))?;
    let domain = *surface.domain();
    match kind {
        "latitude" => {
            if !surface.is_spherical_chart() {
                return Err("latitude loops need a sphere or ellipsoid".into());
            }
            let phi = angle_degrees(args)?.to_radians();
            if !(phi.abs() < FRAC_PI_2) {
                return Err(format!("latitude must lie strictly between -90 and 90 degrees, got {args}"));
            }
            let region = ParamRegion::rectangle(domain.u.min, phi, domain.u.max, domain.v.max)
                .with_resolution(resolution.0, resolution.1);
            Ok(LoopSpec {
                curve: ParamCurve::latitude(phi),
                region: Some(region),
            })
        }
        "tube" => {
            if !surface.name().starts_with("torus") {
                return Err("tube loops need a torus".into());
            }
            let psi = angle_degrees(args)?.to_radians();
            // Band between the loop and the top circle psi = pi/2, on the
            // loop's left.
            let p = (psi + FRAC_PI_2).rem_euclid(TAU) - FRAC_PI_2;
            let band = if p <= FRAC_PI_2 { (p, FRAC_PI_2) } else { (FRAC_PI_2, p) };
            let region = (band.1 - band.0 > 0.0).then(|| {
                ParamRegion::rectangle(domain.u.min, band.0, domain.u.max, band.1)
                    .with_resolution(resolution.0, resolution.1)
            });
            Ok(LoopSpec {
                curve: ParamCurve::torus_tube_loop(psi),
                region,
            })
        }
        "circle" => {
            let (r, center) = match args.split_once('@') {
                Some((r, c)) => {
                    let c: Vec<f64> = c.split(',').map(number).collect::<Result<_, _>>()?;
                    if c.len() != 2 {
                        return Err(format!("circle center must be u,v, got `{args}`"));
                    }
                    (number(r)?, (c[0], c[1]))
                }
                None => (number(args)?, domain.center()),
            };
            if !(r > 0.0) {
                return Err(format!("circle radius must be positive, got {r}"));
            }
            let (cu, cv) = center;
            let region = ParamRegion::rectangle(cu - r, cv - r, cu + r, cv + r)
                .with_resolution(resolution.0, resolution.1)
                .with_indicator(move |u, v| (u - cu).hypot(v - cv) <= r);
            Ok(LoopSpec {
                curve: ParamCurve::circle(center, r),
                region: Some(region),
            })
        }
        "param" => {
            let values: Vec<f64> = args.split(',').map(number).collect::<Result<_, _>>()?;
            if values.len() < 6 || !values.len().is_multiple_of(2) {
                return Err("param loops need at least three u,v pairs".into());
            }
            let points: Vec<(f64, f64)> = values.chunks(2).map(|c| (c[0], c[1])).collect();
            let (mut u0, mut v0, mut u1, mut v1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
            for &(u, v) in &points {
                u0 = u0.min(u);
                v0 = v0.min(v);
                u1 = u1.max(u);
                v1 = v1.max(v);
            }
            let region = ParamRegion::polygon(&points, (u0, v0, u1, v1), resolution);
            Ok(LoopSpec {
                curve: ParamCurve::polygon(points),
                region: Some(region),
            })
        }
        _ => Err(format!(
            "unknown loop kind `{kind}` (expected latitude, tube, circle or param)"
        )),
    }
}

/// `octant` (on the unit sphere only) or `u0,v0;u1,v1;u2,v2` in parameter units.
/// The octant replaces the surface by a rotated chart of the unit sphere.
pub fn parse_triangle(
    spec: &str,
    surface: ParametricSurface,
) -> Result<(ParametricSurface, [(f64, f64); 3]), String> {
    if spec == "octant" {
        if surface.name() != "sphere:1" {
            return Err("the octant triangle is defined on sphere:1".into());
        }
        return Ok(octant_triangle());
    }
    let pts: Vec<(f64, f64)> = spec
        .split(';')
        .map(|p| {
            let c: Vec<f64> = p.split(',').map(number).collect::<Result<_, _>>()?;
            match c[..] {
                [u, v] => Ok((u, v)),
                _ => Err(format!("triangle vertex must be u,v, got `{p}`")),
            }
        })
        .collect::<Result<_, String>>()?;
    match pts[..] {
        [a, b, c] => Ok((surface, [a, b, c])),
        _ => Err(format!("a triangle needs three vertices, got {}", pts.len())),
    }
}

/// `N` or `NxM`.
pub fn parse_resolution(text: &str) -> Result<(usize, usize), String> {
    let parse = |s: &str| -> Result<usize, String> {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("expected a positive integer, found `{s}`"))
            .and_then(|n| if n > 0 { Ok(n) } else { Err("resolution must be positive".into()) })
    };
    match text.split_once('x') {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => {
            let n = parse(text)?;
            Ok((n, n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn surfaces() {
        assert_eq!(parse_surface("sphere:1").unwrap().name(), "sphere:1");
        assert!(parse_surface("torus:2,1").is_ok());
        assert!(parse_surface("torus:1,2").is_err());
        assert!(parse_surface("cone:30deg").is_ok());
        assert!(parse_surface("cone:95").is_err());
        assert!(parse_surface("plane").is_ok());
        assert!(parse_surface("nosuch").is_err());
        assert!(parse_surface("sphere:-1").is_err());
        assert!(parse_surface("ellipsoid:1,2").is_err());
    }

    #[test]
    fn angles() {
        assert_eq!(angle_degrees("30deg").unwrap(), 30.0);
        assert_eq!(angle_degrees("45").unwrap(), 45.0);
        assert!((angle_degrees(&format!("{}rad", PI)).unwrap() - 180.0).abs() < 1e-12);
    }

    #[test]
    fn tube_bands() {
        let t = parse_surface("torus:2,1").unwrap();
        let band = |deg: &str| {
            let r = parse_loop(&format!("tube:{deg}"), &t, (8, 8)).unwrap().region.unwrap();
            (r.v.0, r.v.1)
        };
        let (a, b) = band("45");
        assert!((a - PI / 4.0).abs() < 1e-15 && (b - FRAC_PI_2).abs() < 1e-15);
        let (a, b) = band("135");
        assert!((a - FRAC_PI_2).abs() < 1e-15 && (b - 0.75 * PI).abs() < 1e-12);
        let (a, b) = band("-45");
        assert!((a + PI / 4.0).abs() < 1e-15 && (b - FRAC_PI_2).abs() < 1e-15);
        let (a, b) = band("225");
        assert!((a - FRAC_PI_2).abs() < 1e-15 && (b - 1.25 * PI).abs() < 1e-12);
        assert!(parse_loop("tube:90", &t, (8, 8)).unwrap().region.is_none());
    }

    #[test]
    fn loops_and_resolutions() {
        let s = parse_surface("sphere:1").unwrap();
        assert!(parse_loop("latitude:30deg", &s, (8, 8)).is_ok());
        assert!(parse_loop("latitude:90", &s, (8, 8)).is_err());
        assert!(parse_loop("tube:30", &s, (8, 8)).is_err());
        assert!(parse_loop("param:0,0,1,0,1,1", &s, (8, 8)).is_ok());
        assert!(parse_loop("param:0,0,1", &s, (8, 8)).is_err());
        assert!(parse_loop("circle:0.1@0.5,0.5", &s, (8, 8)).is_ok());
        assert!(parse_loop("spiral:1", &s, (8, 8)).is_err());
        assert_eq!(parse_resolution("64x32").unwrap(), (64, 32));
        assert_eq!(parse_resolution("128").unwrap(), (128, 128));
        assert!(parse_resolution("0").is_err());
    }

    #[test]
    fn triangles() {
        let s = parse_surface("sphere:1").unwrap();
        assert!(parse_triangle("octant", s.clone()).is_ok());
        assert!(parse_triangle("0,0;1,0;0,1", s.clone()).is_ok());
        assert!(parse_triangle("0,0;1,0", s).is_err());
        assert!(parse_triangle("octant", parse_surface("sphere:2").unwrap()).is_err());
    }
}
