//! Parallel transport and Gauss-Bonnet checks on parametric
//! surfaces and closed triangle meshes.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod curve;
pub mod error;
pub mod mesh;
pub mod numeric;
pub mod surface;
pub mod transport;
pub mod verify;

pub use curve::ParamCurve;
pub use error::{Error, Result};
pub use surface::{FundamentalForms, ParametricSurface, SurfacePoint};
pub use transport::TransportResult;
