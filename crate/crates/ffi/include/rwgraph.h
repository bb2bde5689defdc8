#ifndef RWGRAPH_H
#define RWGRAPH_H

#include <stddef.h>
#include <stdint.h>

typedef enum RwClass {
  RW_CLASS_BELOW_LOWER = 0,
  RW_CLASS_AT_LOWER = 1,
  RW_CLASS_INTERIOR = 2,
  RW_CLASS_AT_UPPER = 3,
  RW_CLASS_ABOVE_UPPER = 4,
} RwClass;

// Which of the three graphs to export.
typedef enum RwGraphKind {
  // Reduced words with both kinds of edges.
  RW_GRAPH_KIND_G = 0,
  // Quotient by commutation edges.
  RW_GRAPH_KIND_C = 1,
  // Quotient by long braid edges.
  RW_GRAPH_KIND_B = 2,
} RwGraphKind;

// Result of every fallible call.
typedef enum RwStatus {
  RW_STATUS_OK = 0,
  RW_STATUS_NULL_POINTER = 1,
  RW_STATUS_INVALID_UTF8 = 2,
  RW_STATUS_PARSE = 3,
  RW_STATUS_TOO_LARGE = 4,
  RW_STATUS_PRECONDITION = 5,
  RW_STATUS_PANIC = 6,
} RwStatus;

// Opaque handle to the graph of reduced words of a permutation.
typedef struct RwGraph RwGraph;

// Opaque permutation handle.
typedef struct RwPermutation RwPermutation;

typedef struct RwDiameters {
  uint64_t g;
  uint64_t c;
  uint64_t b;
} RwDiameters;

typedef struct RwReport {
  uint64_t diam_g;
  uint64_t i2;
  uint64_t i3;
  uint64_t l2;
  enum RwClass classification;
} RwReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or NULL after a
// successful call. Valid until the next library call on the same thread.
const char *rw_last_error_message(void);

// Static, human-readable name of a status code.
const char *rw_status_name(enum RwStatus status);

// Releases a string returned by the library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed already.
void rw_string_free(char *s);

// Parses one-line notation such as `"4231"` or `"10 2 3 4 5 6 7 8 9 1"`.
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum RwStatus rw_perm_parse(const char *text, struct RwPermutation **out);

// # Safety
// `perm` must come from `rw_perm_parse` and not have been freed. NULL is ignored.
void rw_perm_free(struct RwPermutation *perm);

// Number of entries; 0 for NULL.
//
// # Safety
// `perm` must be NULL or a live handle.
uintptr_t rw_perm_size(const struct RwPermutation *perm);

// Number of inversions; 0 for NULL.
//
// # Safety
// `perm` must be NULL or a live handle.
uintptr_t rw_perm_length(const struct RwPermutation *perm);

// # Safety
// `perm` must be a live handle; `out` must be writable.
enum RwStatus rw_perm_to_string(const struct RwPermutation *perm, char **out);

// Number of reduced words; `RW_STATUS_TOO_LARGE` if it does not fit in 64 bits.
//
// # Safety
// `perm` must be a live handle; `out` must be writable.
enum RwStatus rw_count_reduced_words(const struct RwPermutation *perm, uint64_t *out);

// Reduced words, sorted, one per line.
//
// # Safety
// `perm` must be a live handle; `out` must be writable.
enum RwStatus rw_enumerate(const struct RwPermutation *perm, uintptr_t cap, char **out);

// Builds the graph of reduced words, refusing more than `cap` vertices.
//
// # Safety
// `perm` must be a live handle; `out` must be writable.
enum RwStatus rw_graph_build(const struct RwPermutation *perm, uintptr_t cap, struct RwGraph **out);

// # Safety
// `graph` must come from `rw_graph_build` and not have been freed. NULL is ignored.
void rw_graph_free(struct RwGraph *graph);

// # Safety
// `graph` must be NULL or a live handle.
uintptr_t rw_graph_vertex_count(const struct RwGraph *graph);

// # Safety
// `graph` must be NULL or a live handle.
uintptr_t rw_graph_edge_count(const struct RwGraph *graph);

// Diameters of the graph and of both quotients.
//
// # Safety
// `graph` must be a live handle; `out` must be writable.
enum RwStatus rw_graph_diameters(const struct RwGraph *graph,
                                 uintptr_t cap,
                                 struct RwDiameters *out);

// Graphviz DOT text of the graph or one of its quotients.
//
// # Safety
// `graph` must be a live handle; `out` must be writable.
enum RwStatus rw_graph_to_dot(const struct RwGraph *graph, enum RwGraphKind kind, char **out);

// JSON `{"edges": [[u, v, "C"|"B"], ...], "vertices": [...]}`.
//
// # Safety
// `graph` must be a live handle; `out` must be writable.
enum RwStatus rw_graph_to_json(const struct RwGraph *graph, enum RwGraphKind kind, char **out);

// Brute-force diameter triple of a permutation.
//
// # Safety
// `perm` must be a live handle; `out` must be writable.
enum RwStatus rw_brute_force(const struct RwPermutation *perm,
                             uintptr_t cap,
                             struct RwDiameters *out);

// Diameter of G compared with the bounds `|L2| / 2` and `|L2|`.
//
// # Safety
// `perm` must be a live handle; `out` must be writable.
enum RwStatus rw_classify(const struct RwPermutation *perm, uintptr_t cap, struct RwReport *out);

// Regenerates a bundled artifact (`"fig2"`, `"fig3"`, `"fig4"`, `"table2"`)
// and stores 1 in `matches` if it agrees with the golden file, else 0.
//
// # Safety
// `name` must be a nul-terminated string; `matches` must be writable.
enum RwStatus rw_reproduce(const char *name, int32_t *matches);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RWGRAPH_H */
