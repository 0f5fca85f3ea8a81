#ifndef MODCALC_H
#define MODCALC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result codes shared by every entry point.
 */
typedef enum ModcalcStatus {
  MODCALC_STATUS_OK = 0,
  MODCALC_STATUS_NULL_POINTER = 1,
  MODCALC_STATUS_INVALID_ARGUMENT = 2,
  MODCALC_STATUS_PARSE = 3,
  MODCALC_STATUS_WEIGHT_MISMATCH = 4,
  MODCALC_STATUS_OUT_OF_RANGE = 5,
  MODCALC_STATUS_NOT_MODULAR = 6,
  MODCALC_STATUS_UTF8 = 7,
  MODCALC_STATUS_INTERNAL = 8,
} ModcalcStatus;

/**
 * A q-expansion with its weight.
 */
typedef struct ModcalcSeries ModcalcSeries;

/**
 * A table of Ramanujan tau values.
 */
typedef struct ModcalcTauTable ModcalcTauTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread; do not free.
 */
const char *modcalc_last_error(void);

/**
 * Library version as a static string.
 */
const char *modcalc_version(void);

/**
 * # Safety
 * `s` must come from this library (or be NULL) and not be used afterwards.
 */
void modcalc_string_free(char *s);

/**
 * Evaluates an expression such as `"RC(E4,E6,1)"` to `prec` coefficients.
 *
 * # Safety
 * `expr` must be a NUL-terminated string; `out` must be writable.
 */
enum ModcalcStatus modcalc_eval(const char *expr, uintptr_t prec, struct ModcalcSeries **out);

/**
 * `E_k` for even `k >= 4`.
 *
 * # Safety
 * `out` must be writable.
 */
enum ModcalcStatus modcalc_eisenstein(uint32_t k, uintptr_t prec, struct ModcalcSeries **out);

/**
 * The discriminant `Delta` (`prec >= 2`).
 *
 * # Safety
 * `out` must be writable.
 */
enum ModcalcStatus modcalc_delta(uintptr_t prec, struct ModcalcSeries **out);

/**
 * # Safety
 * `s` must come from this library (or be NULL) and not be used afterwards.
 */
void modcalc_series_free(struct ModcalcSeries *s);

/**
 * Number of known coefficients, 0 for NULL.
 *
 * # Safety
 * `s` must be a live handle or NULL.
 */
uintptr_t modcalc_series_prec(const struct ModcalcSeries *s);

/**
 * Weight, 0 for NULL.
 *
 * # Safety
 * `s` must be a live handle or NULL.
 */
uint32_t modcalc_series_weight(const struct ModcalcSeries *s);

/**
 * Whether the value is modular (as opposed to quasimodular).
 *
 * # Safety
 * `s` must be a live handle or NULL.
 */
bool modcalc_series_is_modular(const struct ModcalcSeries *s);

/**
 * Coefficient of `q^n` as an exact `"p/q"` string.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum ModcalcStatus modcalc_series_coeff(const struct ModcalcSeries *s, uintptr_t n, char **out);

/**
 * `{"prec": .., "coeffs": ["p/q", ..]}`.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum ModcalcStatus modcalc_series_json(const struct ModcalcSeries *s, char **out);

/**
 * Exact coordinates in the `E4^a E6^b` basis as JSON.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum ModcalcStatus modcalc_series_basis_json(const struct ModcalcSeries *s, char **out);

/**
 * Tau values for indices `< len`.
 *
 * # Safety
 * `out` must be writable.
 */
enum ModcalcStatus modcalc_tau_table_new(uintptr_t len, struct ModcalcTauTable **out);

/**
 * # Safety
 * `t` must come from this library (or be NULL) and not be used afterwards.
 */
void modcalc_tau_table_free(struct ModcalcTauTable *t);

/**
 * # Safety
 * `t` must be a live handle or NULL.
 */
uintptr_t modcalc_tau_table_len(const struct ModcalcTauTable *t);

/**
 * `tau(n)` as a decimal string.
 *
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
enum ModcalcStatus modcalc_tau_table_get(const struct ModcalcTauTable *t, uintptr_t n, char **out);

/**
 * Checks one catalog identity (`"kumar"`, `"herrero"`, `"s10sig1"`,
 * `"s10sig3"`, `"s9sig1"`, `"s8sig1"`) at `m` with `cutoff` terms.
 * Builds its own tau table; prefer few large calls.
 *
 * # Safety
 * `id` must be a NUL-terminated string; `rel_err` and `passed` must be writable.
 */
enum ModcalcStatus modcalc_verify_identity(const char *id,
                                           uintptr_t m,
                                           uintptr_t cutoff,
                                           double tol,
                                           double *rel_err,
                                           bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MODCALC_H */
