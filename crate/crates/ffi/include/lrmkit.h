#ifndef LRMKIT_H
#define LRMKIT_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Kind of range-minimum index.
typedef enum LrmkIndexKind {
  // LRM-tree parentheses only; never reads the array.
  LRMK_INDEX_KIND_PLAIN = 0,
  // Strict-run heads; never reads the array.
  LRMK_INDEX_KIND_STRICT_RUNS = 1,
  // Run heads; each query reads the array at most once.
  LRMK_INDEX_KIND_RUNS = 2,
} LrmkIndexKind;

// Result of a call.
typedef enum LrmkStatus {
  LRMK_STATUS_OK = 0,
  LRMK_STATUS_NULL_POINTER = 1,
  LRMK_STATUS_RANGE = 2,
  LRMK_STATUS_CONTRACT = 3,
  LRMK_STATUS_STRUCTURE = 4,
  LRMK_STATUS_CAPABILITY = 5,
  LRMK_STATUS_FORMAT = 6,
  LRMK_STATUS_PARSE = 7,
  LRMK_STATUS_IO = 8,
  LRMK_STATUS_PANIC = 9,
} LrmkStatus;

// Opaque compressed permutation.
typedef struct LrmkPermCode LrmkPermCode;

// Opaque range-minimum index.
typedef struct LrmkRmqIndex LrmkRmqIndex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the message of the last failed call on this thread into `buf`
// (NUL-terminated, truncated to `cap` bytes) and returns the full message length.
//
// # Safety
// `buf` must be null or point to `cap` writable bytes.
size_t lrmk_last_error(char *buf, size_t cap);

// Encodes the permutation `values[0..n]` of `1..=n`. With `with_index`, the code
// also answers PSV and RMQ queries.
//
// # Safety
// `values` must point to `n` readable values; `out` must be valid for a write.
enum LrmkStatus lrmk_permcode_encode(const int64_t *values,
                                     size_t n,
                                     bool with_index,
                                     struct LrmkPermCode **out);

// Loads a code from an `LRMK` container.
//
// # Safety
// `bytes` must point to `len` readable bytes; `out` must be valid for a write.
enum LrmkStatus lrmk_permcode_load(const uint8_t *bytes, size_t len, struct LrmkPermCode **out);

// Serializes a code into a new buffer, released with [`lrmk_bytes_free`].
//
// # Safety
// `code` must be a live handle; `out` and `out_len` must be valid for writes.
enum LrmkStatus lrmk_permcode_serialize(const struct LrmkPermCode *code,
                                        uint8_t **out,
                                        size_t *out_len);

// Releases a buffer from [`lrmk_permcode_serialize`].
//
// # Safety
// `buf`/`len` must come from one call to [`lrmk_permcode_serialize`], not yet freed.
void lrmk_bytes_free(uint8_t *buf, size_t len);

// # Safety
// `code` must be null or a handle not yet freed.
void lrmk_permcode_free(struct LrmkPermCode *code);

// Length `n` of the permutation (0 for a null handle).
//
// # Safety
// `code` must be null or a live handle.
size_t lrmk_permcode_len(const struct LrmkPermCode *code);

// Number of parts `ρ` of the code (0 for a null handle).
//
// # Safety
// `code` must be null or a live handle.
size_t lrmk_permcode_runs(const struct LrmkPermCode *code);

// Total size of the code in bits (0 for a null handle).
//
// # Safety
// `code` must be null or a live handle.
uint64_t lrmk_permcode_size_bits(const struct LrmkPermCode *code);

// `*out = π(i)`.
//
// # Safety
// `code` must be a live handle; `out` must be valid for a write.
enum LrmkStatus lrmk_permcode_apply(const struct LrmkPermCode *code, size_t i, size_t *out);

// `*out = π⁻¹(v)`.
//
// # Safety
// `code` must be a live handle; `out` must be valid for a write.
enum LrmkStatus lrmk_permcode_inverse(const struct LrmkPermCode *code, size_t v, size_t *out);

// Part `*s` and offset `*p` of position `i`.
//
// # Safety
// `code` must be a live handle; `s` and `p` must be valid for writes.
enum LrmkStatus lrmk_permcode_map(const struct LrmkPermCode *code, size_t i, size_t *s, size_t *p);

// Position of the `p`-th element of part `s`.
//
// # Safety
// `code` must be a live handle; `out` must be valid for a write.
enum LrmkStatus lrmk_permcode_unmap(const struct LrmkPermCode *code,
                                    size_t s,
                                    size_t p,
                                    size_t *out);

// Previous smaller value of `i` (0 = none). Needs a code encoded `with_index`.
//
// # Safety
// `code` must be a live handle; `out` must be valid for a write.
enum LrmkStatus lrmk_permcode_psv(const struct LrmkPermCode *code, size_t i, size_t *out);

// Position of the minimum of `π[i..=j]`. Needs a code encoded `with_index`.
//
// # Safety
// `code` must be a live handle; `out` must be valid for a write.
enum LrmkStatus lrmk_permcode_rmq(const struct LrmkPermCode *code, size_t i, size_t j, size_t *out);

// Builds a range-minimum index over `values[0..n]`, `n >= 1`.
//
// # Safety
// `values` must point to `n` readable values; `out` must be valid for a write.
enum LrmkStatus lrmk_rmq_build(enum LrmkIndexKind kind,
                               const int64_t *values,
                               size_t n,
                               struct LrmkRmqIndex **out);

// Leftmost minimum of `A[i..=j]`. The runs index needs the indexed array in
// `values[0..n]`; the other kinds ignore `values` (may be null). `comparisons`,
// when not null, receives the number of data comparisons made.
//
// # Safety
// `index` must be a live handle; `values` must be null or point to `n` values;
// `out` must be valid for a write; `comparisons` must be null or valid for a write.
enum LrmkStatus lrmk_rmq_query(const struct LrmkRmqIndex *index,
                               const int64_t *values,
                               size_t n,
                               size_t i,
                               size_t j,
                               size_t *out,
                               uint64_t *comparisons);

// Length `n` of the indexed array (0 for a null handle).
//
// # Safety
// `index` must be null or a live handle.
size_t lrmk_rmq_len(const struct LrmkRmqIndex *index);

// Total size of the index in bits (0 for a null handle).
//
// # Safety
// `index` must be null or a live handle.
uint64_t lrmk_rmq_size_bits(const struct LrmkRmqIndex *index);

// # Safety
// `index` must be null or a handle not yet freed.
void lrmk_rmq_free(struct LrmkRmqIndex *index);

// Sorts `values[0..n]` in place with the LRM-sort; `comparisons`, when not null,
// receives the number of data comparisons.
//
// # Safety
// `values` must point to `n` writable values; `comparisons` must be null or valid
// for a write.
enum LrmkStatus lrmk_sort(int64_t *values, size_t n, uint64_t *comparisons);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LRMKIT_H */
