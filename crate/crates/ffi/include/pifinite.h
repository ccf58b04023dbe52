#ifndef PIFINITE_H
#define PIFINITE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; the numeric values match the CLI exit codes where they overlap.
 */
typedef enum PifStatus {
  PifStatus_Ok = 0,
  PifStatus_InputError = 1,
  PifStatus_ResourceError = 2,
  PifStatus_NullPointer = 3,
  PifStatus_Panic = 4,
} PifStatus;

/**
 * Opaque handle to a parsed space.
 */
typedef struct PifSpace PifSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse an expression such as `B(S3) + pt`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum PifStatus pif_space_parse(const char *text, struct PifSpace **out);

/**
 * # Safety
 * `space` must come from this library and not be freed twice. Null is ignored.
 */
void pif_space_free(struct PifSpace *space);

/**
 * # Safety
 * `space` must be a live handle; `out` must be writable.
 */
enum PifStatus pif_space_to_string(const struct PifSpace *space, char **out);

/**
 * `|X|_n` at `p` as a reduced fraction of decimal strings; `n = 0` gives the
 * homotopy cardinality.
 *
 * # Safety
 * `space` must be a live handle; `num` and `den` must be writable.
 */
enum PifStatus pif_space_height_cardinality(const struct PifSpace *space,
                                            uint64_t p,
                                            uint32_t n,
                                            char **num,
                                            char **den);

/**
 * The p-adic free loop space as a new handle.
 *
 * # Safety
 * `space` must be a live handle; `out` must be writable.
 */
enum PifStatus pif_space_loop(const struct PifSpace *space, uint64_t p, struct PifSpace **out);

/**
 * Whether `|X|_n` is a p-adic unit; requires `n >= 1`.
 *
 * # Safety
 * `space` must be a live handle; `out` must be writable.
 */
enum PifStatus pif_space_is_amenable(const struct PifSpace *space,
                                     uint64_t p,
                                     uint32_t n,
                                     bool *out);

/**
 * `δ^k(a)` for a rational `a` written as `"num"` or `"num/den"`.
 *
 * # Safety
 * `value` must be a NUL-terminated string; `out` must be writable.
 */
enum PifStatus pif_delta(const char *value, uint64_t p, uint32_t k, char **out);

/**
 * The value of the splitting element `β_(k)` at height `n`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PifStatus pif_beta_value(uint64_t p, uint32_t k, uint32_t n, char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice. Null is ignored.
 */
void pif_string_free(char *s);

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next call into the library from the same thread.
 */
const char *pif_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PIFINITE_H */
