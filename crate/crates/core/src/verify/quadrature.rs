use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::surface::{LocalFrame, ParametricSurface};

/// Default quadrature resolution per axis.
pub const DEFAULT_RESOLUTION: usize = 1024;

/// Smallest accepted resolution per axis.
const MIN_RESOLUTION: usize = 8;

pub type Indicator = dyn Fn(f64, f64) -> bool + Send + Sync;

/// A rectangle in parameter space, optionally restricted by an indicator, with
/// the midpoint-rule resolution used to integrate over it.
#[derive(Clone)]
pub struct ParamRegion {
    pub u: (f64, f64),
    pub v: (f64, f64),
    pub indicator: Option<Arc<Indicator>>,
    /// Closed polygon bounding the region; boundary cells are weighted by
    /// the share of their row segment that lies inside.
    pub polygon: Option<Arc<Vec<(f64, f64)>>>,
    pub resolution: (usize, usize),
}

impl fmt::Debug for ParamRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParamRegion")
            .field("u", &self.u)
            .field("v", &self.v)
            .field("indicator", &self.indicator.is_some())
            .field("polygon", &self.polygon.as_ref().map(|p| p.len()))
            .field("resolution", &self.resolution)
            .finish()
    }
}

impl ParamRegion {
    pub fn rectangle(u0: f64, v0: f64, u1: f64, v1: f64) -> Self {
        Self {
            u: (u0, u1),
            v: (v0, v1),
            indicator: None,
            polygon: None,
            resolution: (DEFAULT_RESOLUTION, DEFAULT_RESOLUTION),
        }
    }

    /// The whole parameter domain of `surface`.
    pub fn full(surface: &ParametricSurface) -> Self {
        let d = surface.domain();
        Self::rectangle(d.u.min, d.v.min, d.u.max, d.v.max)
    }

    /// The inside of a closed polygon within the rectangle `bounds =
    /// (u0, v0, u1, v1)`. Each row of the grid is clipped against the polygon
    /// along its center line and boundary cells count with the fraction of
    /// that line segment inside, which keeps the rule second order.
    pub fn polygon(points: &[(f64, f64)], bounds: (f64, f64, f64, f64), resolution: (usize, usize)) -> Self {
        let (u0, v0, u1, v1) = bounds;
        let mut region = Self::rectangle(u0, v0, u1, v1).with_resolution(resolution.0, resolution.1);
        region.polygon = Some(Arc::new(points.to_vec()));
        region
    }

    pub fn with_indicator<F>(mut self, indicator: F) -> Self
    where
        F: Fn(f64, f64) -> bool + Send + Sync + 'static,
    {
        self.indicator = Some(Arc::new(indicator));
        self
    }

    pub fn with_resolution(mut self, n_u: usize, n_v: usize) -> Self {
        self.resolution = (n_u, n_v);
        self
    }

    /// Cell centers `(u_i, v_j)` and the cell sizes.
    fn grid(&self) -> (f64, f64) {
        let (n_u, n_v) = self.resolution;
        (
            (self.u.1 - self.u.0) / n_u as f64,
            (self.v.1 - self.v.0) / n_v as f64,
        )
    }

    fn validate(&self, surface: &ParametricSurface) -> Result<()> {
        let (n_u, n_v) = self.resolution;
        if n_u < MIN_RESOLUTION || n_v < MIN_RESOLUTION {
            return Err(Error::InvalidParameter(format!(
                "quadrature resolution must be at least {MIN_RESOLUTION}x{MIN_RESOLUTION}, got {n_u}x{n_v}"
            )));
        }
        if !(self.u.0 < self.u.1 && self.v.0 < self.v.1) {
            return Err(Error::InvalidParameter(format!(
                "empty region [{}, {}] x [{}, {}]",
                self.u.0, self.u.1, self.v.0, self.v.1
            )));
        }
        let d = surface.domain();
        let inside = |lo: f64, hi: f64, axis: &crate::surface::Interval| {
            if axis.periodic {
                hi - lo <= axis.extent() * (1.0 + 1e-12)
            } else {
                axis.contains(lo) && axis.contains(hi)
            }
        };
        if !(inside(self.u.0, self.u.1, &d.u) && inside(self.v.0, self.v.1, &d.v)) {
            return Err(Error::InvalidParameter(format!(
                "region [{}, {}] x [{}, {}] is not contained in the domain of {}",
                self.u.0,
                self.u.1,
                self.v.0,
                self.v.1,
                surface.name()
            )));
        }
        Ok(())
    }
}

/// Sorted crossings of a closed polygon with the horizontal line `v = y`.
/// Consecutive pairs bound the inside (even-odd rule).
fn row_crossings(polygon: &[(f64, f64)], y: f64) -> Vec<f64> {
    let mut xs: Vec<f64> = (0..polygon.len())
        .filter_map(|i| {
            let (a, b) = (polygon[i], polygon[(i + 1) % polygon.len()]);
            ((a.1 <= y) != (b.1 <= y)).then(|| a.0 + (y - a.1) / (b.1 - a.1) * (b.0 - a.0))
        })
        .collect();
    xs.sort_by(f64::total_cmp);
    xs
}

/// Fraction of each cell `[u0 + i du, u0 + (i + 1) du]` covered by the inside
/// intervals of one row, as `(i, weight)` pairs in increasing `i`.
fn row_weights(crossings: &[f64], u0: f64, du: f64, n_u: usize) -> Vec<(usize, f64)> {
    let mut weights: Vec<(usize, f64)> = Vec::new();
    for pair in crossings.chunks_exact(2) {
        let (a, b) = ((pair[0] - u0) / du, (pair[1] - u0) / du);
        let (a, b) = (a.max(0.0), b.min(n_u as f64));
        if a >= b {
            continue;
        }
        let (first, last) = (a.floor() as usize, (b.ceil() as usize).min(n_u) - 1);
        for i in first..=last {
            let w = b.min((i + 1) as f64) - a.max(i as f64);
            if w <= 0.0 {
                continue;
            }
            match weights.last_mut() {
                Some((j, acc)) if *j == i => *acc += w,
                _ => weights.push((i, w)),
            }
        }
    }
    weights
}

/// Midpoint rule for `f dA` over `region`. Rows of constant `v` are summed in
/// parallel, each with compensation, and the row totals are then combined in
/// row order, so the result does not depend on the thread count.
fn integrate<F>(surface: &ParametricSurface, region: &ParamRegion, f: F) -> Result<f64>
where
    F: Fn(&LocalFrame) -> f64 + Sync,
{
    region.validate(surface)?;
    let (n_u, n_v) = region.resolution;
    let (du, dv) = region.grid();
    let rows: Vec<Result<f64>> = (0..n_v)
        .into_par_iter()
        .map(|j| {
            let v = region.v.0 + (j as f64 + 0.5) * dv;
            let cells = match &region.polygon {
                Some(p) => row_weights(&row_crossings(p, v), region.u.0, du, n_u),
                None => (0..n_u).map(|i| (i, 1.0)).collect(),
            };
            let mut row = CompensatedSum::new();
            for (i, weight) in cells {
                let u = region.u.0 + (i as f64 + 0.5) * du;
                if let Some(ind) = &region.indicator {
                    if !ind(u, v) {
                        continue;
                    }
                }
                let frame = surface.local_frame_unchecked(u, v)?;
                row.add(weight * f(&frame) * frame.forms.det_g().sqrt());
            }
            Ok(row.value())
        })
        .collect();
    let mut total = CompensatedSum::new();
    for row in rows {
        total.add(row?);
    }
    Ok(total.value() * du * dv)
}

/// `integral of K dA` over `region` by the tensor-product midpoint rule.
pub fn integrate_curvature(surface: &ParametricSurface, region: &ParamRegion) -> Result<f64> {
    integrate(surface, region, |frame| frame.forms.gaussian_curvature())
}

/// Area of `region` on `surface`, by the same rule.
pub fn surface_area(surface: &ParametricSurface, region: &ParamRegion) -> Result<f64> {
    integrate(surface, region, |_| 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::observed_order;
    use crate::surface::POLE_MARGIN;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI, TAU};

    #[test]
    fn torus_halves_have_opposite_curvature() {
        let t = ParametricSurface::torus(2.0, 1.0);
        let outer = ParamRegion::rectangle(0.0, -FRAC_PI_2, TAU, FRAC_PI_2).with_resolution(64, 4096);
        let inner = ParamRegion::rectangle(0.0, FRAC_PI_2, TAU, 1.5 * PI).with_resolution(64, 4096);
        let a = integrate_curvature(&t, &outer).unwrap();
        let b = integrate_curvature(&t, &inner).unwrap();
        assert!((a - 4.0 * PI).abs() < 1e-6, "{a}");
        assert!((b + 4.0 * PI).abs() < 1e-6, "{b}");
    }

    #[test]
    fn cap_integral_converges_at_second_order() {
        let s = ParametricSurface::sphere(1.0);
        let exact = TAU * (1.0 - FRAC_PI_6.sin());
        let errors: Vec<f64> = [16, 32, 64, 128]
            .iter()
            .map(|&n| {
                let r = ParamRegion::rectangle(0.0, FRAC_PI_6, TAU, FRAC_PI_2 - POLE_MARGIN).with_resolution(8, n);
                (integrate_curvature(&s, &r).unwrap() - exact).abs()
            })
            .collect();
        let order = observed_order(&errors);
        assert!((1.7..=2.3).contains(&order), "{order} {errors:?}");
    }

    #[test]
    fn partition_is_additive() {
        let s = ParametricSurface::ellipsoid(1.0, 0.8, 0.5);
        let whole = ParamRegion::rectangle(0.0, -1.0, 2.0, 1.0).with_resolution(40, 40);
        let left = ParamRegion::rectangle(0.0, -1.0, 1.0, 1.0).with_resolution(20, 40);
        let right = ParamRegion::rectangle(1.0, -1.0, 2.0, 1.0).with_resolution(20, 40);
        let w = integrate_curvature(&s, &whole).unwrap();
        let l = integrate_curvature(&s, &left).unwrap();
        let r = integrate_curvature(&s, &right).unwrap();
        assert!((w - (l + r)).abs() < 1e-10, "{w} {l} {r}");
    }

    #[test]
    fn bit_stable_across_thread_counts() {
        let s = ParametricSurface::ellipsoid(1.0, 0.8, 0.5);
        let r = ParamRegion::full(&s).with_resolution(128, 128);
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| integrate_curvature(&s, &r).unwrap());
        let many = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| integrate_curvature(&s, &r).unwrap());
        assert_eq!(one.to_bits(), many.to_bits());
    }

    #[test]
    fn rejects_coarse_or_foreign_regions() {
        let s = ParametricSurface::plane();
        let coarse = ParamRegion::rectangle(0.0, 0.0, 1.0, 1.0).with_resolution(4, 64);
        assert!(matches!(integrate_curvature(&s, &coarse), Err(Error::InvalidParameter(_))));
        let outside = ParamRegion::rectangle(0.0, 0.0, 20.0, 1.0);
        assert!(matches!(integrate_curvature(&s, &outside), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn degenerate_nodes_fail_unless_excluded() {
        let c = ParametricSurface::from_chart(
            "collapsed",
            crate::surface::Domain {
                u: crate::surface::Interval::new(-1.0, 1.0),
                v: crate::surface::Interval::new(-1.0, 1.0),
            },
            |u, v| crate::numeric::Vec3::new(u * v, v, 0.0) * if v.abs() < 0.2 { 0.0 } else { 1.0 },
        );
        let all = ParamRegion::rectangle(-1.0, -1.0, 1.0, 1.0).with_resolution(8, 10);
        assert!(matches!(integrate_curvature(&c, &all), Err(Error::DegenerateChart { .. })));
        let masked = all.with_indicator(|_, v| v.abs() > 0.3);
        assert!(integrate_curvature(&c, &masked).is_ok());
    }

    #[test]
    fn row_weights_are_exact_cover_fractions() {
        let w = row_weights(&[0.25, 0.5, 0.6, 2.0], 0.0, 0.1, 10);
        let mut dense = [0.0; 10];
        for (i, x) in w {
            dense[i] += x;
        }
        let expected = [0.0, 0.0, 0.5, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 1.0];
        for (a, b) in dense.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{dense:?}");
        }
    }

    #[test]
    fn polygon_area_on_the_plane() {
        let p = ParametricSurface::plane();
        // Vertical sides off the grid lines are clipped exactly.
        let square = [(0.13, 0.2), (0.77, 0.2), (0.77, 0.8), (0.13, 0.8)];
        let r = ParamRegion::polygon(&square, (0.0, 0.0, 1.0, 1.0), (10, 10));
        assert!((surface_area(&p, &r).unwrap() - 0.384).abs() < 1e-12);
        // Slanted sides leave only the kinks at the vertices, O(h^2).
        let tri = [(0.1, 0.1), (0.9, 0.3), (0.4, 0.9)];
        for n in [32, 64, 128, 256] {
            let r = ParamRegion::polygon(&tri, (0.0, 0.0, 1.0, 1.0), (n, n));
            let err = (surface_area(&p, &r).unwrap() - 0.29).abs();
            assert!(err < 1.0 / (n * n) as f64, "{n}: {err}");
        }
        // Resolution changes after construction are honoured.
        let r = ParamRegion::polygon(&square, (0.0, 0.0, 1.0, 1.0), (10, 10)).with_resolution(40, 20);
        assert!((surface_area(&p, &r).unwrap() - 0.384).abs() < 1e-12);
    }
}
