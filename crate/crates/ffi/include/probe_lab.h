#ifndef PROBE_LAB_H
#define PROBE_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum PlStatus {
  PL_STATUS_OK = 0,
  PL_STATUS_NULL_ARGUMENT = 1,
  PL_STATUS_INVALID_UTF8 = 2,
  PL_STATUS_IO = 3,
  PL_STATUS_PARSE = 4,
  PL_STATUS_INVALID_ARGUMENT = 5,
  PL_STATUS_NODE_OUT_OF_RANGE = 6,
  PL_STATUS_NOT_GRAY = 7,
  PL_STATUS_UNKNOWN_STRATEGY = 8,
  PL_STATUS_MODEL = 9,
  PL_STATUS_SIZE_CAP = 10,
  PL_STATUS_NUMERIC = 11,
  PL_STATUS_INVARIANT = 12,
  PL_STATUS_BUFFER_TOO_SMALL = 13,
  PL_STATUS_PANIC = 14,
} PlStatus;

// Node state in a view.
typedef enum PlColor {
  PL_COLOR_BLACK = 0,
  PL_COLOR_GRAY = 1,
  PL_COLOR_WHITE = 2,
} PlColor;

// Ground-truth graph.
typedef struct PlGraph PlGraph;

// Trained probing model.
typedef struct PlModel PlModel;

// Sequence of probes with their new-node counts.
typedef struct PlTrace PlTrace;

// Incomplete view of a graph.
typedef struct PlView PlView;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer is
// valid until the next failing call on the same thread.
const char *pl_last_error(void);

// Library version as a static NUL-terminated string.
const char *pl_version(void);

// Builds a graph on nodes `0..node_count` from `edge_count` pairs stored
// flat in `edges` (`u0, v0, u1, v1, ...`).
//
// # Safety
// `edges` must point to `2 * edge_count` readable values; `out` must be writable.
enum PlStatus pl_graph_from_edges(size_t node_count,
                                  const size_t *edges,
                                  size_t edge_count,
                                  struct PlGraph **out);

// Loads a whitespace-separated edge list (`#` comments allowed).
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum PlStatus pl_graph_load(const char *path, struct PlGraph **out);

// # Safety
// `graph` must be a live handle or NULL.
size_t pl_graph_node_count(const struct PlGraph *graph);

// # Safety
// `graph` must be a live handle or NULL.
size_t pl_graph_edge_count(const struct PlGraph *graph);

// # Safety
// `graph` must come from this library and not be used afterwards. NULL is ignored.
void pl_graph_free(struct PlGraph *graph);

// Creates a view in which the `seed_count` nodes of `seeds` are probed.
// The view keeps its own reference to the graph.
//
// # Safety
// `graph` must be live, `seeds` must hold `seed_count` values, `out` writable.
enum PlStatus pl_view_new(const struct PlGraph *graph,
                          const size_t *seeds,
                          size_t seed_count,
                          struct PlView **out);

// # Safety
// `view` must be live; `out` writable.
enum PlStatus pl_view_clone(const struct PlView *view, struct PlView **out);

// Probes a Gray node; `new_nodes` (optional) receives the number of newly
// observed nodes.
//
// # Safety
// `view` must be live; `new_nodes` writable or NULL.
enum PlStatus pl_view_probe(struct PlView *view, size_t node, size_t *new_nodes);

// # Safety
// `view` must be live; each output pointer writable or NULL.
enum PlStatus pl_view_counts(const struct PlView *view, size_t *black, size_t *gray, size_t *white);

// # Safety
// `view` must be live; `out` writable.
enum PlStatus pl_view_color(const struct PlView *view, size_t node, enum PlColor *out);

// Copies the Gray node ids (ascending) into `buf`. `len` always receives
// the full count; if it exceeds `capacity`, nothing is copied and
// `BufferTooSmall` is returned.
//
// # Safety
// `view` must be live, `buf` must hold `capacity` values (may be NULL when
// `capacity` is 0), `len` writable.
enum PlStatus pl_view_gray_nodes(const struct PlView *view,
                                 size_t *buf,
                                 size_t capacity,
                                 size_t *len);

// Nodes observed since the view was created.
//
// # Safety
// `view` must be live or NULL.
size_t pl_view_new_nodes(const struct PlView *view);

// Fingerprint of the node colors.
//
// # Safety
// `view` must be live or NULL.
uint64_t pl_view_checksum(const struct PlView *view);

// # Safety
// `view` must come from this library and not be used afterwards. NULL is ignored.
void pl_view_free(struct PlView *view);

// Loads a model file written by the `train` command.
//
// # Safety
// `path` must be a NUL-terminated string; `out` writable.
enum PlStatus pl_model_load(const char *path, struct PlModel **out);

// # Safety
// `model` must come from this library and not be used afterwards. NULL is ignored.
void pl_model_free(struct PlModel *model);

// Runs the named strategy (case-insensitive, e.g. "DEG", "TADA-H",
// "LINREG") for budget `k`, probing `view` in place. `seed` drives RAND;
// `model` may be NULL unless the strategy is learned.
//
// # Safety
// `view` must be live, `name` NUL-terminated, `model` live or NULL, `out` writable.
enum PlStatus pl_run_strategy(struct PlView *view,
                              const char *name,
                              size_t k,
                              uint64_t seed,
                              const struct PlModel *model,
                              struct PlTrace **out);

// # Safety
// `trace` must be live or NULL.
size_t pl_trace_len(const struct PlTrace *trace);

// # Safety
// `trace` must be live or NULL.
size_t pl_trace_total_new(const struct PlTrace *trace);

// Node and new-node count of step `index`.
//
// # Safety
// `trace` must be live; `node` and `new_nodes` writable or NULL.
enum PlStatus pl_trace_step(const struct PlTrace *trace,
                            size_t index,
                            size_t *node,
                            size_t *new_nodes);

// # Safety
// `trace` must come from this library and not be used afterwards. NULL is ignored.
void pl_trace_free(struct PlTrace *trace);

// Exhaustive optimum for budget `k` (refused with `SizeCap` on large inputs).
//
// # Safety
// `view` must be live; outputs writable or NULL.
enum PlStatus pl_exact_optimal(const struct PlView *view,
                               size_t k,
                               size_t *opt_value,
                               size_t *radius_min);

// Writes the 0/1 program for budget `k` to `path` in LP format.
//
// # Safety
// `view` must be live; `path` NUL-terminated.
enum PlStatus pl_export_ilp(const struct PlView *view, size_t k, const char *path);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PROBE_LAB_H */
