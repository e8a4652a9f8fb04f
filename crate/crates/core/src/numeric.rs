//! Small numerical building blocks shared by the integrators and quadrature.

use std::f64::consts::{PI, TAU};

use nalgebra::{SVector, Vector3};

pub type Vec3 = Vector3<f64>;

/// Neumaier-compensated running sum. Summation order is the caller's order,
/// so results are reproducible bit for bit.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Reduces an angle into `(-pi, pi]`.
pub fn wrap_pi(angle: f64) -> f64 {
    let mut a = angle.rem_euclid(TAU);
    if a > PI {
        a -= TAU;
    }
    a
}

/// Angle between two vectors via `atan2(|a x b|, a . b)`, accurate near 0 and pi.
pub fn angle_between(a: &Vec3, b: &Vec3) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Signed angle from `a` to `b`, counterclockwise about `axis`.
pub fn signed_angle(a: &Vec3, b: &Vec3, axis: &Vec3) -> f64 {
    a.cross(b).dot(axis).atan2(a.dot(b))
}

/// One classical fourth-order Runge-Kutta step for `y' = f(t, y)`.
pub fn rk4_step<const N: usize, E, F>(
    f: &mut F,
    t: f64,
    y: &SVector<f64, N>,
    h: f64,
) -> Result<SVector<f64, N>, E>
where
    F: FnMut(f64, &SVector<f64, N>) -> Result<SVector<f64, N>, E>,
{
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, &(y + k1 * (0.5 * h)))?;
    let k3 = f(t + 0.5 * h, &(y + k2 * (0.5 * h)))?;
    let k4 = f(t + h, &(y + k3 * h))?;
    Ok(y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0))
}

/// Observed convergence order from errors on a dyadic refinement ladder:
/// the least-squares slope of `log2(err)` against refinement level.
pub fn observed_order(errors: &[f64]) -> f64 {
    let n = errors.len() as f64;
    let xs: Vec<f64> = (0..errors.len()).map(|i| i as f64).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.log2()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    -sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector1;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-15).abs() < 1e-30);
    }

    #[test]
    fn wrap_pi_range() {
        assert_eq!(wrap_pi(PI), PI);
        assert!((wrap_pi(-PI) - PI).abs() < 1e-15);
        assert!((wrap_pi(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((wrap_pi(7.0 * TAU + 0.25) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn signed_angle_orientation() {
        let x = Vec3::x();
        let y = Vec3::y();
        let z = Vec3::z();
        assert!((signed_angle(&x, &y, &z) - PI / 2.0).abs() < 1e-15);
        assert!((signed_angle(&y, &x, &z) + PI / 2.0).abs() < 1e-15);
        assert!((angle_between(&x, &(-x)) - PI).abs() < 1e-15);
    }

    #[test]
    fn rk4_is_fourth_order_on_exponential() {
        let mut errs = Vec::new();
        for n in [8, 16, 32, 64] {
            let h = 1.0 / n as f64;
            let mut y = Vector1::new(1.0);
            let mut f = |_t: f64, y: &Vector1<f64>| Ok::<_, ()>(*y);
            for k in 0..n {
                y = rk4_step(&mut f, k as f64 * h, &y, h).unwrap();
            }
            errs.push((y[0] - 1f64.exp()).abs());
        }
        let order = observed_order(&errs);
        assert!((3.8..4.2).contains(&order), "order {order}");
    }
}
