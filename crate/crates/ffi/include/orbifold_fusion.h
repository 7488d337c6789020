#ifndef ORBIFOLD_FUSION_H
#define ORBIFOLD_FUSION_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of every fallible call.
 */
typedef enum OfStatus {
  OF_STATUS_OK = 0,
  OF_STATUS_NULL_POINTER = 1,
  OF_STATUS_INVALID_UTF8 = 2,
  OF_STATUS_CONFIG = 3,
  OF_STATUS_PARSE = 4,
  OF_STATUS_COMPUTATION = 5,
  OF_STATUS_NOT_FOUND = 6,
  /**
   * The bounds on a fusion rule disagree, so no single value exists.
   */
  OF_STATUS_UNDETERMINED = 7,
  OF_STATUS_PANIC = 8,
} OfStatus;

/**
 * Output formats of [`of_table_emit`].
 */
typedef enum OfFormat {
  OF_FORMAT_TEXT = 0,
  OF_FORMAT_RECORDS = 1,
} OfFormat;

/**
 * A loaded module registry together with its group data.
 */
typedef struct OfRegistry OfRegistry;

/**
 * A computed fusion table.
 */
typedef struct OfTable OfTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *of_last_error_message(void);

/**
 * Release a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void of_string_free(char *s);

/**
 * Load a registry file and the group data it names.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum OfStatus of_registry_load(const char *path, struct OfRegistry **out_registry);

/**
 * # Safety
 * `registry` must come from [`of_registry_load`] and not have been freed.
 */
void of_registry_free(struct OfRegistry *registry);

/**
 * Number of modules in the registry.
 *
 * # Safety
 * `registry` must be a live handle and `out_count` a valid pointer.
 */
enum OfStatus of_registry_module_count(const struct OfRegistry *registry, size_t *out_count);

/**
 * Name of the module at `index`, in registry order.
 *
 * # Safety
 * `registry` must be a live handle and `out_name` a valid pointer.
 */
enum OfStatus of_registry_module_name(const struct OfRegistry *registry,
                                      size_t index,
                                      char **out_name);

/**
 * The `(h, k)` recovered for a module, as scalar strings.
 *
 * # Safety
 * `registry` must be a live handle, `name` a NUL-terminated string and the
 * out-pointers valid.
 */
enum OfStatus of_registry_module_params(const struct OfRegistry *registry,
                                        const char *name,
                                        char **out_h,
                                        char **out_k);

/**
 * Compute bounds for every triple of registry modules.
 *
 * # Safety
 * `registry` must be a live handle and `out_table` a valid pointer.
 */
enum OfStatus of_table_build(const struct OfRegistry *registry, struct OfTable **out_table);

/**
 * # Safety
 * `table` must come from [`of_table_build`] and not have been freed.
 */
void of_table_free(struct OfTable *table);

/**
 * Lower and upper bound for `N(l3; l1, l2)`.
 *
 * # Safety
 * `table` must be a live handle, names NUL-terminated and out-pointers valid.
 */
enum OfStatus of_table_bounds(const struct OfTable *table,
                              const char *l1,
                              const char *l2,
                              const char *l3,
                              size_t *out_lower,
                              size_t *out_upper);

/**
 * The fusion rule `N(l3; l1, l2)`; [`OfStatus::Undetermined`] when the
 * bounds disagree.
 *
 * # Safety
 * `table` must be a live handle, names NUL-terminated and `out_value` valid.
 */
enum OfStatus of_table_multiplicity(const struct OfTable *table,
                                    const char *l1,
                                    const char *l2,
                                    const char *l3,
                                    size_t *out_value);

/**
 * Number of triples with contradictory bounds plus the number of failed
 * symmetry identities; zero for consistent inputs.
 *
 * # Safety
 * `table` must be a live handle and `out_count` valid.
 */
enum OfStatus of_table_inconsistencies(const struct OfTable *table, size_t *out_count);

/**
 * The table rendered as text or as CSV records.
 *
 * # Safety
 * `table` must be a live handle and `out_text` valid.
 */
enum OfStatus of_table_emit(const struct OfTable *table, enum OfFormat format, char **out_text);

/**
 * `ψ(h₂, k₂, h₃, k₃)` from scalar strings such as `"3/5"` or `"-2*s3"`.
 *
 * # Safety
 * All inputs must be NUL-terminated strings and `out_value` valid.
 */
enum OfStatus of_psi(const char *h2,
                     const char *k2,
                     const char *h3,
                     const char *k3,
                     char **out_value);

/**
 * Whether `vector`, written in mode syntax such as `"J(-1)^2 - 30*L(-2)"`,
 * is singular in the module with lowest weight `h` and `J(0)`-eigenvalue `k`.
 *
 * # Safety
 * All inputs must be NUL-terminated strings and `out_singular` valid.
 */
enum OfStatus of_is_singular(const char *vector, const char *h, const char *k, bool *out_singular);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORBIFOLD_FUSION_H */
