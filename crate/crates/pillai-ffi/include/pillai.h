/* C interface to the pillai library. See pf_status_describe for error texts. */

#ifndef PILLAI_H
#define PILLAI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every interface call.
typedef enum pf_status {
  // Success.
  PF_STATUS_OK = 0,
  // Working precision was exhausted before the result certified.
  PF_STATUS_PRECISION = 1,
  // The inputs are outside the supported domain.
  PF_STATUS_DOMAIN = 2,
  // A textual input failed to parse.
  PF_STATUS_PARSE = 3,
  // A required pointer argument was null.
  PF_STATUS_NULL_ARG = 4,
  // A textual input was not valid UTF-8.
  PF_STATUS_UTF8 = 5,
  // An internal invariant failed; the call did not complete.
  PF_STATUS_PANIC = 6,
} pf_status;

// Opaque handle for a validated family pair (the expansions `[0;(1,a)]`
// and `[0;(1,b)]` with `2 <= a < b`).
typedef struct pf_pair pf_pair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code. Never null; do not free.
const char *pf_status_describe(enum pf_status status);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be a pointer previously returned through an out-parameter of
// this library, and must not be used again afterwards.
void pf_string_free(char *s);

// Expand a quadratic surd (or echo a continued fraction) in canonical
// bracket notation, e.g. "sqrt(27)" to "[5; (5, 10)]".
//
// # Safety
// `expr` must be a NUL-terminated string; `out` must be writable.
enum pf_status pf_cf_expand(const char *expr, char **out);

// Space-joined convergent denominators `q_0 .. q_n` of a surd or
// continued fraction.
//
// # Safety
// `input` must be a NUL-terminated string; `out` must be writable.
enum pf_status pf_sequence(const char *input, size_t n, char **out);

// Create a validated pair handle for the family expansions `[0;(1,a)]`
// and `[0;(1,b)]`.
//
// # Safety
// `out` must be writable; the result must be released with `pf_pair_free`.
enum pf_status pf_pair_new(int64_t a, int64_t b, struct pf_pair **out);

// Release a pair handle. Null is ignored.
//
// # Safety
// `pair` must come from `pf_pair_new` and must not be used afterwards.
void pf_pair_free(struct pf_pair *pair);

// Search both family sequences of a pair for integers with two or more
// representations `q_a(N) - q_b(M)`; the report lists every
// representation. `format`: 0 JSON, 1 text, 2 CSV.
//
// # Safety
// `pair` must be a live handle from `pf_pair_new`; `out` must be writable.
enum pf_status pf_pair_search(const struct pf_pair *pair,
                              size_t n_max,
                              size_t m_max,
                              uint32_t format,
                              char **out);

// Certified linear-form constants and combined exponent bounds for a
// pair. `format`: 0 JSON, 1 text, 2 CSV.
//
// # Safety
// `pair` must be a live handle from `pf_pair_new`; `out` must be writable.
enum pf_status pf_pair_bounds(const struct pf_pair *pair, uint32_t format, char **out);

// Evaluate one published table row at its published ladder index and
// compare against the printed values. `case_id` names the row as
// "table:(c,...):sign", e.g. "2.2:(0,1,0):-". `format`: 0 JSON, 1 text,
// 2 CSV.
//
// # Safety
// `case_id` must be a NUL-terminated string; `out` must be writable.
enum pf_status pf_table_row_run(const char *case_id, uint32_t format, char **out);

// Re-run a published row with overrides: a solution-count cap given as a
// decimal string, and either a pinned ladder index (`q_index >= 0`) or
// the smallest certifying index (`q_index < 0`). `format`: 0 JSON,
// 1 text, 2 CSV.
//
// # Safety
// `case_id` and `cap` must be NUL-terminated strings; `out` writable.
enum pf_status pf_reduce_row(const char *case_id,
                             const char *cap,
                             int64_t q_index,
                             uint32_t format,
                             char **out);

// Recompute published values and compare against the bundled data.
// `scope` is one of "thm13", "appendix", "tables", "bounds", "all".
// `all_match` receives 1 when every check matched, else 0; the report is
// produced either way. `format`: 0 JSON, 1 text, 2 CSV.
//
// # Safety
// `scope` must be a NUL-terminated string; `out` and `all_match` writable.
enum pf_status pf_reproduce(const char *scope, uint32_t format, char **out, int32_t *all_match);

// The pair the bundled published values describe. Either pointer may be
// null if that component is not wanted.
void pf_published_pair(int64_t *a, int64_t *b);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PILLAI_H */
