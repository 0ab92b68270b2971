#ifndef SUPERQ_H
#define SUPERQ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define SQ_OK 0

#define SQ_ERR_NULL -1

#define SQ_ERR_UTF8 -2

#define SQ_ERR_PANIC -3

typedef struct SqElement SqElement;

typedef struct SqKet SqKet;

typedef struct SqMatrix SqMatrix;

typedef struct SqTable SqTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *sq_last_error_message(void);

/**
 * Stable identifier for a status code, or `"unknown"`.
 */
const char *sq_error_name(int32_t code);

/**
 * # Safety
 * `s` must come from this library and not be freed twice. Null is ignored.
 */
void sq_string_free(char *s);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
int32_t sq_element_from_json(const char *json, struct SqElement **out);

/**
 * Canonical JSON text; release it with `sq_string_free`.
 *
 * # Safety
 * `e` must be a live handle and `out` a valid pointer.
 */
int32_t sq_element_to_json(const struct SqElement *e, char **out);

/**
 * # Safety
 * `a`, `b` must be live handles and `out` a valid pointer.
 */
int32_t sq_element_mul(const struct SqElement *a,
                       const struct SqElement *b,
                       struct SqElement **out);

/**
 * # Safety
 * `a`, `b` must be live handles and `out` a valid pointer.
 */
int32_t sq_element_add(const struct SqElement *a,
                       const struct SqElement *b,
                       struct SqElement **out);

/**
 * Writes 0 or 1 to `out`, or fails with `inhomogeneous`.
 *
 * # Safety
 * `e` must be a live handle and `out` a valid pointer.
 */
int32_t sq_element_parity(const struct SqElement *e, uint8_t *out);

/**
 * Real and imaginary part of the body.
 *
 * # Safety
 * `e` must be a live handle; `re` and `im` valid pointers.
 */
int32_t sq_element_body(const struct SqElement *e, double *re, double *im);

/**
 * # Safety
 * `e` must come from this library and not be freed twice. Null is ignored.
 */
void sq_element_free(struct SqElement *e);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
int32_t sq_matrix_from_json(const char *json, struct SqMatrix **out);

/**
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
int32_t sq_matrix_to_json(const struct SqMatrix *m, char **out);

/**
 * # Safety
 * `a`, `b` must be live handles and `out` a valid pointer.
 */
int32_t sq_matrix_mul(const struct SqMatrix *a, const struct SqMatrix *b, struct SqMatrix **out);

/**
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
int32_t sq_matrix_supertranspose(const struct SqMatrix *m, struct SqMatrix **out);

/**
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
int32_t sq_matrix_supertrace(const struct SqMatrix *m, struct SqElement **out);

/**
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
int32_t sq_matrix_berezinian(const struct SqMatrix *m, struct SqElement **out);

/**
 * # Safety
 * `m` must come from this library and not be freed twice. Null is ignored.
 */
void sq_matrix_free(struct SqMatrix *m);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
int32_t sq_ket_from_json(const char *json, struct SqKet **out);

/**
 * `<phi||psi>`.
 *
 * # Safety
 * `phi`, `psi` must be live handles and `out` a valid pointer.
 */
int32_t sq_ket_inner(const struct SqKet *phi, const struct SqKet *psi, struct SqElement **out);

/**
 * # Safety
 * `k` must come from this library and not be freed twice. Null is ignored.
 */
void sq_ket_free(struct SqKet *k);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
int32_t sq_table_from_json(const char *json, struct SqTable **out);

/**
 * # Safety
 * `t` must be a live qubit-table handle and `out` a valid pointer.
 */
int32_t sq_table_concurrence(const struct SqTable *t, bool force_unnormalized, double *out);

/**
 * # Safety
 * `t` must be a live super-table handle and `out` a valid pointer.
 */
int32_t sq_table_superconcurrence(const struct SqTable *t, double *out);

/**
 * # Safety
 * `t` must come from this library and not be freed twice. Null is ignored.
 */
void sq_table_free(struct SqTable *t);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUPERQ_H */
