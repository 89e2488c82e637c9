#ifndef TNF_H
#define TNF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum TnfDegenerate {
  TNF_DEGENERATE_NONE = 0,
  TNF_DEGENERATE_IDENTITY = 1,
  TNF_DEGENERATE_ALTERNATING = 2,
  TNF_DEGENERATE_REGULAR = 3,
} TnfDegenerate;

typedef enum TnfStatus {
  TNF_STATUS_OK = 0,
  TNF_STATUS_NULL_ARGUMENT = 1,
  TNF_STATUS_INVALID_UTF8 = 2,
  TNF_STATUS_PARSE = 3,
  TNF_STATUS_DOMAIN = 4,
  TNF_STATUS_INVALID_ALPHA = 5,
  TNF_STATUS_SIZE_LIMIT = 6,
  TNF_STATUS_INTERNAL = 7,
  TNF_STATUS_PANIC = 8,
} TnfStatus;

/**
 * Validated weights `α`.
 */
typedef struct TnfAlpha TnfAlpha;

/**
 * Every subgroup of a small symmetric group.
 */
typedef struct TnfLattice TnfLattice;

/**
 * A finitely supported permutation of `{1, 2, …}`.
 */
typedef struct TnfPermutation TnfPermutation;

typedef struct TnfEstimate {
  double estimate;
  double stderr;
  uint64_t samples;
} TnfEstimate;

typedef struct TnfClassification {
  bool tnf;
  uint32_t degenerate;
  bool atomic;
} TnfClassification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *tnf_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void tnf_string_free(char *s);

/**
 * Parses `{"weights": {"1": "1/2", ...}}` or the bare map.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum TnfStatus tnf_alpha_from_json(const char *json, struct TnfAlpha **out);

/**
 * # Safety
 * `alpha` must come from [`tnf_alpha_from_json`] or be null.
 */
void tnf_alpha_free(struct TnfAlpha *alpha);

/**
 * Canonical JSON form of `alpha`.
 *
 * # Safety
 * `alpha` must be a live handle; `out` must be writable.
 */
enum TnfStatus tnf_alpha_to_json(const struct TnfAlpha *alpha, char **out);

/**
 * Parses cycle notation such as `"(1 2)(3 4 5)"`.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum TnfStatus tnf_permutation_parse(const char *text, struct TnfPermutation **out);

/**
 * # Safety
 * `perm` must come from [`tnf_permutation_parse`] or be null.
 */
void tnf_permutation_free(struct TnfPermutation *perm);

/**
 * Canonical cycle notation of `perm`.
 *
 * # Safety
 * `perm` must be a live handle; `out` must be writable.
 */
enum TnfStatus tnf_permutation_to_string(const struct TnfPermutation *perm, char **out);

/**
 * `∏ p_k(α)^{c_k(g)}` with `p_k` the Newton sum over nonzero indices. Either
 * out-parameter may be null; `out_exact` receives `"p/q"`.
 *
 * # Safety
 * Handles must be live; non-null out-parameters must be writable.
 */
enum TnfStatus tnf_fixed_measure_paper(const struct TnfAlpha *alpha,
                                       const struct TnfPermutation *perm,
                                       char **out_exact,
                                       double *out_value);

/**
 * `∏ (p_k(α) + α_0^k)^{c_k(g)}`.
 *
 * # Safety
 * As for [`tnf_fixed_measure_paper`].
 */
enum TnfStatus tnf_fixed_measure_full(const struct TnfAlpha *alpha,
                                      const struct TnfPermutation *perm,
                                      char **out_exact,
                                      double *out_value);

/**
 * Character value from super-Newton sums.
 *
 * # Safety
 * As for [`tnf_fixed_measure_paper`].
 */
enum TnfStatus tnf_thoma_character(const struct TnfAlpha *alpha,
                                   const struct TnfPermutation *perm,
                                   char **out_exact,
                                   double *out_value);

/**
 * Seeded Monte Carlo estimate of the fixed-point probability.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum TnfStatus tnf_mc_fixed_probability(const struct TnfAlpha *alpha,
                                        const struct TnfPermutation *perm,
                                        uint64_t samples,
                                        uint64_t seed,
                                        struct TnfEstimate *out);

/**
 * TNF verdict of `ν_α`; `degenerate` holds a [`TnfDegenerate`] value.
 *
 * # Safety
 * `alpha` must be live; `out` must be writable.
 */
enum TnfStatus tnf_classify_nu(const struct TnfAlpha *alpha, struct TnfClassification *out);

/**
 * TNF verdict of the product action on sequences; the symmetry count is
 * written in decimal to `out_symmetry` when non-null.
 *
 * # Safety
 * `alpha` must be live; non-null out-parameters must be writable.
 */
enum TnfStatus tnf_classify_sequence_action(const struct TnfAlpha *alpha,
                                            bool *out_tnf,
                                            char **out_symmetry);

/**
 * Exact overlap of a fixed pair with a uniform perfect matching of `2m` points.
 *
 * # Safety
 * Non-null out-parameters must be writable.
 */
enum TnfStatus tnf_part_l_overlap(size_t l, size_t m, char **out_exact, double *out_value);

/**
 * Enumerates the subgroups of `S_n` for `1 ≤ n ≤ 5`.
 *
 * # Safety
 * `out` must be writable.
 */
enum TnfStatus tnf_lattice_enumerate(size_t n, struct TnfLattice **out);

/**
 * # Safety
 * `lattice` must come from [`tnf_lattice_enumerate`] or be null.
 */
void tnf_lattice_free(struct TnfLattice *lattice);

/**
 * Number of subgroups; 0 for a null handle.
 *
 * # Safety
 * `lattice` must be live or null.
 */
size_t tnf_lattice_len(const struct TnfLattice *lattice);

/**
 * Number of conjugacy classes of subgroups; 0 for a null handle.
 *
 * # Safety
 * `lattice` must be live or null.
 */
size_t tnf_lattice_class_count(const struct TnfLattice *lattice);

/**
 * Order of subgroup `index`.
 *
 * # Safety
 * `lattice` must be live; `out` must be writable.
 */
enum TnfStatus tnf_lattice_order(const struct TnfLattice *lattice, size_t index, size_t *out);

/**
 * Index of the normalizer of subgroup `index`.
 *
 * # Safety
 * `lattice` must be live; `out` must be writable.
 */
enum TnfStatus tnf_lattice_normalizer(const struct TnfLattice *lattice, size_t index, size_t *out);

/**
 * Whether subgroup `index` equals its normalizer.
 *
 * # Safety
 * `lattice` must be live; `out` must be writable.
 */
enum TnfStatus tnf_lattice_is_self_normalizing(const struct TnfLattice *lattice,
                                               size_t index,
                                               bool *out);

/**
 * Whether the action on cosets of subgroup `index` is totally nonfree.
 *
 * # Safety
 * `lattice` must be live; `out` must be writable.
 */
enum TnfStatus tnf_lattice_transitive_tnf(const struct TnfLattice *lattice,
                                          size_t index,
                                          bool *out);

/**
 * Subgroup table as JSON.
 *
 * # Safety
 * `lattice` must be live; `out` must be writable.
 */
enum TnfStatus tnf_lattice_to_json(const struct TnfLattice *lattice, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TNF_H */
