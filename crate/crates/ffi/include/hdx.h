#ifndef HDX_H
#define HDX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

typedef enum HdxStatus {
  HDX_STATUS_OK = 0,
  HDX_STATUS_NULL_POINTER = 1,
  HDX_STATUS_INVALID_ARGUMENT = 2,
  // Malformed edge list or complex document.
  HDX_STATUS_PARSE = 3,
  // The graph is disconnected, has a self-loop, or similar.
  HDX_STATUS_INVALID_GRAPH = 4,
  // The predicted build or eigensolve size exceeds its cap.
  HDX_STATUS_SIZE_CAP = 5,
  // Eigensolver failure or a non-reversible operator.
  HDX_STATUS_NUMERICAL = 6,
  HDX_STATUS_IO = 7,
  // `hdx_verify` ran but at least one check failed.
  HDX_STATUS_CHECKS_FAILED = 8,
  HDX_STATUS_PANIC = 9,
} HdxStatus;

typedef enum HdxGraphKind {
  HDX_GRAPH_KIND_CYCLE = 0,
  HDX_GRAPH_KIND_COMPLETE = 1,
  HDX_GRAPH_KIND_RANDOM_REGULAR = 2,
} HdxGraphKind;

typedef enum HdxComplexKind {
  HDX_COMPLEX_KIND_Z = 0,
  HDX_COMPLEX_KIND_Q = 1,
} HdxComplexKind;

// Opaque weighted complex (Z or Q).
typedef struct HdxComplex HdxComplex;

// Opaque weighted graph.
typedef struct HdxGraph HdxGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. Valid until the
// next failing call on the same thread; do not free.
const char *hdx_last_error_message(void);

// Static version string; do not free.
const char *hdx_version(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void hdx_string_free(char *s);

// Parses an edge list (`u v [weight]` per line, `#` comments).
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum HdxStatus hdx_graph_from_edge_list(const char *text, struct HdxGraph **out);

// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum HdxStatus hdx_graph_load(const char *path, struct HdxGraph **out);

// Deterministic generator. `degree` is read only for random-regular graphs.
//
// # Safety
// `out` must be writable.
enum HdxStatus hdx_graph_generate(enum HdxGraphKind kind,
                                  size_t n,
                                  size_t degree,
                                  uint64_t seed,
                                  struct HdxGraph **out);

// # Safety
// `graph` must be a live handle or NULL; `out` must be writable.
enum HdxStatus hdx_graph_vertex_count(const struct HdxGraph *graph, size_t *out);

// # Safety
// `graph` must be a live handle or NULL; `out` must be writable.
enum HdxStatus hdx_graph_edge_count(const struct HdxGraph *graph, size_t *out);

// `1 - omega_2` of the random-walk matrix of the graph.
//
// # Safety
// `graph` must be a live handle or NULL; `out` must be writable.
enum HdxStatus hdx_graph_spectral_gap(const struct HdxGraph *graph, double *out);

// # Safety
// `graph` must come from this library and not have been freed. NULL is ignored.
void hdx_graph_free(struct HdxGraph *graph);

// Builds Z or Q on `graph` with dimension `dim` (H) and `colors` (s).
//
// # Safety
// `graph` must be a live handle or NULL; `out` must be writable.
enum HdxStatus hdx_complex_build(const struct HdxGraph *graph,
                                 enum HdxComplexKind kind,
                                 size_t dim,
                                 size_t colors,
                                 struct HdxComplex **out);

// Loads a complex document; weights are re-checked for balance.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum HdxStatus hdx_complex_from_json(const char *json, struct HdxComplex **out);

// # Safety
// `complex` must be a live handle or NULL; `out` must be writable. The
// string is released with `hdx_string_free`.
enum HdxStatus hdx_complex_to_json(const struct HdxComplex *complex, char **out);

// Number of faces of dimension `level` (`-1..=H`).
//
// # Safety
// `complex` must be a live handle or NULL; `out` must be writable.
enum HdxStatus hdx_complex_face_count(const struct HdxComplex *complex, int64_t level, size_t *out);

// `nu^(k)`: minimum link 1-skeleton gap over faces of dimension `k`
// (`0..=H-2`), or the 1-skeleton gap for `k = -1`.
//
// # Safety
// `complex` must be a live handle or NULL; `out` must be writable.
enum HdxStatus hdx_complex_local_expansion(const struct HdxComplex *complex,
                                           int64_t k,
                                           double *out);

// Spectral gap of the up-down walk at level `k` (`0..=H-1`).
//
// # Safety
// `complex` must be a live handle or NULL; `out` must be writable.
enum HdxStatus hdx_complex_updown_gap(const struct HdxComplex *complex, int64_t k, double *out);

// # Safety
// `complex` must come from this library and not have been freed. NULL is ignored.
void hdx_complex_free(struct HdxComplex *complex);

// Runs the verification harness on `graph`. Writes the JSON report to
// `report_json` and returns `HDX_STATUS_OK` if every non-skipped check
// passes, `HDX_STATUS_CHECKS_FAILED` otherwise. With `explore` set,
// parameters outside `H >= 2, s >= 2H, n >= 4` are reported, not refused.
//
// # Safety
// `graph` must be a live handle or NULL; `report_json` must be writable.
enum HdxStatus hdx_verify(const struct HdxGraph *graph,
                          size_t dim,
                          size_t colors,
                          double tolerance,
                          bool explore,
                          char **report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HDX_H */
