#ifndef HOLONOMY_H
#define HOLONOMY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every call.
typedef enum HolonomyStatus {
  HOLONOMY_STATUS_OK = 0,
  // A required pointer was null.
  HOLONOMY_STATUS_NULL_POINTER = 1,
  // A malformed spec string or a parameter outside its range.
  HOLONOMY_STATUS_INVALID_ARGUMENT = 2,
  // A point or curve outside the chart domain.
  HOLONOMY_STATUS_OUT_OF_DOMAIN = 3,
  // The surface is not closed, or the mesh is not a closed manifold.
  HOLONOMY_STATUS_NOT_CLOSED = 4,
  // Mesh text that does not parse.
  HOLONOMY_STATUS_PARSE_ERROR = 5,
  // Degenerate geometry or a failed numerical procedure.
  HOLONOMY_STATUS_NUMERICAL_FAILURE = 6,
  // A panic was caught at the boundary.
  HOLONOMY_STATUS_PANIC = 7,
} HolonomyStatus;

// Input format for [`holonomy_mesh_from_bytes`].
typedef enum HolonomyMeshFormat {
  HOLONOMY_MESH_FORMAT_OFF = 0,
  HOLONOMY_MESH_FORMAT_OBJ = 1,
} HolonomyMeshFormat;

// Opaque closed triangle mesh.
typedef struct HolonomyMesh HolonomyMesh;

// Opaque parametric surface.
typedef struct HolonomySurface HolonomySurface;

// Curvature data at one parameter point.
typedef struct HolonomyCurvature {
  double gaussian;
  double k1;
  double k2;
  double normal[3];
} HolonomyCurvature;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null after a success.
// The pointer stays valid until the next call on the same thread.
const char *holonomy_last_error(void);

// Library version as a static nul-terminated string.
const char *holonomy_version(void);

// Creates a surface from a catalog spec such as `"sphere:1"`, `"torus:2,1"`
// or `"ellipsoid:1,0.8,0.5"`.
//
// # Safety
// `spec` is a nul-terminated string; `out` is valid for writes.
enum HolonomyStatus holonomy_surface_new(const char *spec, struct HolonomySurface **out);

// Releases a surface. Null is ignored.
//
// # Safety
// `surface` is null or a handle from [`holonomy_surface_new`] not yet freed.
void holonomy_surface_free(struct HolonomySurface *surface);

// Gaussian and principal curvatures and unit normal at `(u, v)`.
//
// # Safety
// `surface` is a live handle; `out` is valid for writes.
enum HolonomyStatus holonomy_curvature(const struct HolonomySurface *surface,
                                       double u,
                                       double v,
                                       struct HolonomyCurvature *out);

// Deficit angle of a closed loop given in the CLI loop grammar
// (`latitude:<deg>`, `tube:<deg>`, `circle:<r>[@u,v]`, `param:...`).
// `norm_drift` may be null.
//
// # Safety
// `surface` is a live handle, `loop_spec` a nul-terminated string and
// `deficit` valid for writes.
enum HolonomyStatus holonomy_loop_deficit(const struct HolonomySurface *surface,
                                          const char *loop_spec,
                                          uintptr_t steps,
                                          double *deficit,
                                          double *norm_drift);

// Integral of `K dA` over a closed surface. `n_u = n_v = 0` picks the
// default resolution for the chart.
//
// # Safety
// `surface` is a live handle; `out` is valid for writes.
enum HolonomyStatus holonomy_total_curvature(const struct HolonomySurface *surface,
                                             uintptr_t n_u,
                                             uintptr_t n_v,
                                             double *out);

// Foucault pendulum rotation per sidereal day, degrees, at a latitude in degrees.
//
// # Safety
// `out` is valid for writes.
enum HolonomyStatus holonomy_foucault_rotation(double latitude_degrees, double *out);

// Parses an OFF or OBJ mesh from `len` bytes at `data`.
//
// # Safety
// `data` is valid for `len` bytes of reads; `out` is valid for writes.
enum HolonomyStatus holonomy_mesh_from_bytes(const uint8_t *data,
                                             uintptr_t len,
                                             enum HolonomyMeshFormat format,
                                             struct HolonomyMesh **out);

// Releases a mesh. Null is ignored.
//
// # Safety
// `mesh` is null or a handle from [`holonomy_mesh_from_bytes`] not yet freed.
void holonomy_mesh_free(struct HolonomyMesh *mesh);

// Number of vertices.
//
// # Safety
// `mesh` is a live handle; `out` is valid for writes.
enum HolonomyStatus holonomy_mesh_vertex_count(const struct HolonomyMesh *mesh, uintptr_t *out);

// Euler characteristic `V - E + F`.
//
// # Safety
// `mesh` is a live handle; `out` is valid for writes.
enum HolonomyStatus holonomy_mesh_euler_characteristic(const struct HolonomyMesh *mesh,
                                                       int64_t *out);

// Sum of angle defects and its residual against `2 pi chi`. Fails with
// `HOLONOMY_STATUS_NOT_CLOSED` for open or inconsistently oriented meshes.
// `residual` may be null.
//
// # Safety
// `mesh` is a live handle; `total` is valid for writes.
enum HolonomyStatus holonomy_mesh_total_defect(const struct HolonomyMesh *mesh,
                                               double *total,
                                               double *residual);

// Angle defect at one vertex.
//
// # Safety
// `mesh` is a live handle; `out` is valid for writes.
enum HolonomyStatus holonomy_mesh_vertex_defect(const struct HolonomyMesh *mesh,
                                                uintptr_t vertex,
                                                double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOLONOMY_H */
