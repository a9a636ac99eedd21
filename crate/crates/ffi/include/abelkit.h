#ifndef ABELKIT_H
#define ABELKIT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of an FFI call.
typedef enum AbelkitStatus {
  ABELKIT_STATUS_OK = 0,
  ABELKIT_STATUS_NULL_POINTER = 1,
  ABELKIT_STATUS_INVALID_UTF8 = 2,
  ABELKIT_STATUS_PARSE_ERROR = 3,
  ABELKIT_STATUS_UNKNOWN_PROPERTY = 4,
  ABELKIT_STATUS_INFINITE_HOM_SET = 5,
  ABELKIT_STATUS_BUDGET_EXCEEDED = 6,
  ABELKIT_STATUS_TOO_LARGE = 7,
  ABELKIT_STATUS_INFINITE_GROUP = 8,
  ABELKIT_STATUS_INVALID_ARGUMENT = 9,
  // The value does not fit the output type.
  ABELKIT_STATUS_OVERFLOW = 10,
  ABELKIT_STATUS_INTERNAL = 11,
} AbelkitStatus;

// An immutable finitely generated abelian group.
typedef struct AbelkitGroup AbelkitGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the
// next failing call on the same thread.
const char *abelkit_last_error(void);

// Library version, a static string.
const char *abelkit_version(void);

// Parses an expression such as `Z + Z/2 + Z/6`.
//
// # Safety
// `expr` is a NUL-terminated string and `out` points to writable storage.
enum AbelkitStatus abelkit_group_parse(const char *expr, struct AbelkitGroup **out);

// Releases a handle; null is ignored.
//
// # Safety
// `g` is null or a live handle from this library.
void abelkit_group_free(struct AbelkitGroup *g);

// Order of a finite group.
//
// # Safety
// `g` is a live handle and `out` points to writable storage.
enum AbelkitStatus abelkit_group_order(const struct AbelkitGroup *g, uint64_t *out);

// Canonical text form, e.g. `Z + Z/2 + Z/6`.
//
// # Safety
// `g` is a live handle and `out` points to writable storage.
enum AbelkitStatus abelkit_group_format(const struct AbelkitGroup *g, char **out);

// `a + b` as a new handle.
//
// # Safety
// `a` and `b` are live handles and `out` points to writable storage.
enum AbelkitStatus abelkit_group_direct_sum(const struct AbelkitGroup *a,
                                            const struct AbelkitGroup *b,
                                            struct AbelkitGroup **out);

// Decides `property` (e.g. `strongly-rickart`) for `m`, or for the pair
// `(m, n)` when `n` is non-null. A `budget` of 0 selects the default. The
// report, including any witness, is written to `json_out`.
//
// # Safety
// `property` is a NUL-terminated string, `m` a live handle, `n` null or a
// live handle, and `json_out` points to writable storage.
enum AbelkitStatus abelkit_decide(const char *property,
                                  const struct AbelkitGroup *m,
                                  const struct AbelkitGroup *n,
                                  uint64_t budget,
                                  char **json_out);

// Closed-form classification verdict as JSON.
//
// # Safety
// `g` is a live handle and `json_out` points to writable storage.
enum AbelkitStatus abelkit_classify(const struct AbelkitGroup *g, char **json_out);

// Releases a string returned by this library; null is ignored.
//
// # Safety
// `s` is null or a string from this library that has not been freed.
void abelkit_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ABELKIT_H */
