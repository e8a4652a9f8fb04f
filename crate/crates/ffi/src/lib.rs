//! C ABI over the `holonomy` crate.
//!
//! Every function returns a [`HolonomyStatus`] and writes results through
//! out-pointers. Surfaces and meshes are opaque handles owned by the caller
//! and released with their `_free` function. After a non-OK status,
//! [`holonomy_last_error`] describes the failure on the calling thread.
//! Panics never cross the boundary; they are reported as
//! `HOLONOMY_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use holonomy::cli::{parse_loop, parse_surface};
use holonomy::mesh::{angle_defect, load_mesh, total_defect, MeshError, MeshFormat, TriMesh};
use holonomy::transport::transport_around_loop;
use holonomy::verify::{foucault_rotation, total_curvature, total_curvature_at, DEFAULT_RESOLUTION};
use holonomy::{Error, ParametricSurface};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HolonomyStatus {
    Ok = 0,
    /// A required pointer was null.
    NullPointer = 1,
    /// A malformed spec string or a parameter outside its range.
    InvalidArgument = 2,
    /// A point or curve outside the chart domain.
    OutOfDomain = 3,
    /// The surface is not closed, or the mesh is not a closed manifold.
    NotClosed = 4,
    /// Mesh text that does not parse.
    ParseError = 5,
    /// Degenerate geometry or a failed numerical procedure.
    NumericalFailure = 6,
    /// A panic was caught at the boundary.
    Panic = 7,
}

/// Input format for [`holonomy_mesh_from_bytes`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HolonomyMeshFormat {
    Off = 0,
    Obj = 1,
}

/// Curvature data at one parameter point.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HolonomyCurvature {
    pub gaussian: f64,
    pub k1: f64,
    pub k2: f64,
    pub normal: [f64; 3],
}

/// Opaque parametric surface.
pub struct HolonomySurface(ParametricSurface);

/// Opaque closed triangle mesh.
pub struct HolonomyMesh(TriMesh);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(HolonomyStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidParameter(_) | Error::OutOfRange { .. } | Error::NotTangent { .. } => {
                HolonomyStatus::InvalidArgument
            }
            Error::OutOfDomain { .. }
            | Error::LeftDomain { .. }
            | Error::NearAxis { .. }
            | Error::SouthernHemisphere { .. }
            | Error::NotOnUnitSphere { .. } => HolonomyStatus::OutOfDomain,
            Error::NotClosed { .. } | Error::NotClosedSurface(_) => HolonomyStatus::NotClosed,
            _ => HolonomyStatus::NumericalFailure,
        };
        Failure(status, e.to_string())
    }
}

impl From<MeshError> for Failure {
    fn from(e: MeshError) -> Self {
        let status = match e {
            MeshError::Parse { .. } | MeshError::Io(_) => HolonomyStatus::ParseError,
            MeshError::IndexOutOfRange { .. } | MeshError::NonTriangulatable { .. } => {
                HolonomyStatus::InvalidArgument
            }
            MeshError::DegenerateFace { .. } => HolonomyStatus::NumericalFailure,
            _ => HolonomyStatus::NotClosed,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(HolonomyStatus::InvalidArgument, message.into())
}

/// Runs `f`, recording any error or panic for [`holonomy_last_error`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> HolonomyStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            HolonomyStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {message}"));
            HolonomyStatus::Panic
        }
    }
}

fn null(name: &str) -> Failure {
    Failure(HolonomyStatus::NullPointer, format!("`{name}` is null"))
}

/// # Safety
/// `p` is null or points to a valid nul-terminated string.
unsafe fn string<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("`{name}` is not valid UTF-8")))
}

/// # Safety
/// `p` is null or valid for a write of `T`.
unsafe fn write<T>(p: *mut T, value: T, name: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    p.write(value);
    Ok(())
}

/// # Safety
/// `p` is null or a live handle from this library.
unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

/// Message for the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn holonomy_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn holonomy_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a surface from a catalog spec such as `"sphere:1"`, `"torus:2,1"`
/// or `"ellipsoid:1,0.8,0.5"`.
///
/// # Safety
/// `spec` is a nul-terminated string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn holonomy_surface_new(
    spec: *const c_char,
    out: *mut *mut HolonomySurface,
) -> HolonomyStatus {
    guard(|| {
        let spec = string(spec, "spec")?;
        let surface = parse_surface(spec).map_err(invalid)?;
        write(out, Box::into_raw(Box::new(HolonomySurface(surface))), "out")
    })
}

/// Releases a surface. Null is ignored.
///
/// # Safety
/// `surface` is null or a handle from [`holonomy_surface_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn holonomy_surface_free(surface: *mut HolonomySurface) {
    if !surface.is_null() {
        drop(Box::from_raw(surface));
    }
}

/// Gaussian and principal curvatures and unit normal at `(u, v)`.
///
/// # Safety
/// `surface` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn holonomy_curvature(
    surface: *const HolonomySurface,
    u: f64,
    v: f64,
    out: *mut HolonomyCurvature,
) -> HolonomyStatus {
    guard(|| {
        let s = &handle(surface, "surface")?.0;
        let frame = s.local_frame(u, v)?;
        let (k1, k2) = frame.forms.principal_curvatures();
        let value = HolonomyCurvature {
            gaussian: frame.forms.gaussian_curvature(),
            k1,
            k2,
            normal: frame.normal.into(),
        };
        write(out, value, "out")
    })
}

/// Deficit angle of a closed loop given in the CLI loop grammar
/// (`latitude:<deg>`, `tube:<deg>`, `circle:<r>[@u,v]`, `param:...`).
/// `norm_drift` may be null.
///
/// # Safety
/// `surface` is a live handle, `loop_spec` a nul-terminated string and
/// `deficit` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn holonomy_loop_deficit(
    surface: *const HolonomySurface,
    loop_spec: *const c_char,
    steps: usize,
    deficit: *mut f64,
    norm_drift: *mut f64,
) -> HolonomyStatus {
    guard(|| {
        let s = &handle(surface, "surface")?.0;
        let spec = string(loop_spec, "loop_spec")?;
        if deficit.is_null() {
            return Err(null("deficit"));
        }
        let lp = parse_loop(spec, s, (DEFAULT_RESOLUTION, DEFAULT_RESOLUTION)).map_err(invalid)?;
        let r = transport_around_loop(s, &lp.curve, steps, None)?;
        deficit.write(r.deficit_angle);
        if !norm_drift.is_null() {
            norm_drift.write(r.norm_drift);
        }
        Ok(())
    })
}

/// Integral of `K dA` over a closed surface. `n_u = n_v = 0` picks the
/// default resolution for the chart.
///
/// # Safety
/// `surface` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn holonomy_total_curvature(
    surface: *const HolonomySurface,
    n_u: usize,
    n_v: usize,
    out: *mut f64,
) -> HolonomyStatus {
    guard(|| {
        let s = &handle(surface, "surface")?.0;
        let report = if n_u == 0 && n_v == 0 {
            total_curvature(s)?
        } else {
            total_curvature_at(s, (n_u, n_v))?
        };
        write(out, report.lhs, "out")
    })
}

/// Foucault pendulum rotation per sidereal day, degrees, at a latitude in degrees.
///
/// # Safety
/// `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn holonomy_foucault_rotation(latitude_degrees: f64, out: *mut f64) -> HolonomyStatus {
    guard(|| write(out, foucault_rotation(latitude_degrees)?, "out"))
}

/// Parses an OFF or OBJ mesh from `len` bytes at `data`.
///
/// # Safety
/// `data` is valid for `len` bytes of reads; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn holonomy_mesh_from_bytes(
    data: *const u8,
    len: usize,
    format: HolonomyMeshFormat,
    out: *mut *mut HolonomyMesh,
) -> HolonomyStatus {
    guard(|| {
        if data.is_null() {
            return Err(null("data"));
        }
        let bytes = std::slice::from_raw_parts(data, len);
        let format = match format {
            HolonomyMeshFormat::Off => MeshFormat::Off,
            HolonomyMeshFormat::Obj => MeshFormat::Obj,
        };
        let mesh = load_mesh(bytes, format)?;
        write(out, Box::into_raw(Box::new(HolonomyMesh(mesh))), "out")
    })
}

/// Releases a mesh. Null is ignored.
///
/// # Safety
/// `mesh` is null or a handle from [`holonomy_mesh_from_bytes`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn holonomy_mesh_free(mesh: *mut HolonomyMesh) {
    if !mesh.is_null() {
        drop(Box::from_raw(mesh));
    }
}

/// Number of vertices.
///
/// # Safety
/// `mesh` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn holonomy_mesh_vertex_count(mesh: *const HolonomyMesh, out: *mut usize) -> HolonomyStatus {
    guard(|| write(out, handle(mesh, "mesh")?.0.vertex_count(), "out"))
}

/// Euler characteristic `V - E + F`.
///
/// # Safety
/// `mesh` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn holonomy_mesh_euler_characteristic(
    mesh: *const HolonomyMesh,
    out: *mut i64,
) -> HolonomyStatus {
    guard(|| write(out, handle(mesh, "mesh")?.0.euler_characteristic(), "out"))
}

/// Sum of angle defects and its residual against `2 pi chi`. Fails with
/// `HOLONOMY_STATUS_NOT_CLOSED` for open or inconsistently oriented meshes.
/// `residual` may be null.
///
/// # Safety
/// `mesh` is a live handle; `total` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn holonomy_mesh_total_defect(
    mesh: *const HolonomyMesh,
    total: *mut f64,
    residual: *mut f64,
) -> HolonomyStatus {
    guard(|| {
        let m = &handle(mesh, "mesh")?.0;
        if total.is_null() {
            return Err(null("total"));
        }
        let r = total_defect(m)?;
        total.write(r.total);
        if !residual.is_null() {
            residual.write(r.residual);
        }
        Ok(())
    })
}

/// Angle defect at one vertex.
///
/// # Safety
/// `mesh` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn holonomy_mesh_vertex_defect(
    mesh: *const HolonomyMesh,
    vertex: usize,
    out: *mut f64,
) -> HolonomyStatus {
    guard(|| {
        let m = &handle(mesh, "mesh")?.0;
        if vertex >= m.vertex_count() {
            return Err(invalid(format!(
                "vertex {vertex} out of range for {} vertices",
                m.vertex_count()
            )));
        }
        write(out, angle_defect(m, vertex)?, "out")
    })
}
