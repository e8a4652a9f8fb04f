use thiserror::Error;

/// Failures of the continuous (chart based) pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("chart is degenerate at (u, v) = ({u}, {v}): |r_u x r_v| = {cross_norm:e}")]
    DegenerateChart { u: f64, v: f64, cross_norm: f64 },

    #[error("point (u, v) = ({u}, {v}) lies outside the chart domain")]
    OutOfDomain { u: f64, v: f64 },

    #[error("initial vector is not tangent: |w.N| / |w| = {residual:e}")]
    NotTangent { residual: f64 },

    #[error("curve is not regular at t = {t}")]
    CurveNotRegular { t: f64 },

    #[error("curve is not closed: endpoints are {gap:e} apart")]
    NotClosed { gap: f64 },

    #[error("trajectory left the chart domain at t = {t} (u = {u}, v = {v})")]
    LeftDomain { t: f64, u: f64, v: f64 },

    #[error("curve passes within sqrt(1e-10) of the z-axis at t = {t}")]
    NearAxis { t: f64 },

    #[error("curve enters the southern hemisphere at t = {t} (z = {z})")]
    SouthernHemisphere { t: f64, z: f64 },

    #[error("curve leaves the unit sphere at t = {t}: |c| - 1 = {deviation:e}")]
    NotOnUnitSphere { t: f64, deviation: f64 },

    #[error("Gauss-map image of the curve degenerates at t = {t} (|dN/dt| = {speed:e})")]
    GaussMapDegenerate { t: f64, speed: f64 },

    #[error("geodesic shooting failed on edge {edge}: terminal miss {miss:e}")]
    GeodesicShootingFailed { edge: usize, miss: f64 },

    #[error("surface `{0}` is not closed")]
    NotClosedSurface(String),

    #[error("value {value} is outside [{min}, {max}]")]
    OutOfRange { value: f64, min: f64, max: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
