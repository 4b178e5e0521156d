#ifndef PASPC_H
#define PASPC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Status codes; the nonzero values match the command-line exit codes.
 */
typedef enum PaspcStatus {
  PASPC_STATUS_OK = 0,
  PASPC_STATUS_ERROR = 1,
  PASPC_STATUS_PARSE = 2,
  PASPC_STATUS_INVALID_TD = 3,
  PASPC_STATUS_CLASS_MISMATCH = 4,
  PASPC_STATUS_NULL_ARGUMENT = 6,
  PASPC_STATUS_INVALID_UTF8 = 7,
  PASPC_STATUS_UNKNOWN_ATOM = 8,
  PASPC_STATUS_PANIC = 9,
} PaspcStatus;

typedef enum PaspcAlgorithm {
  PASPC_ALGORITHM_AUTO = 0,
  PASPC_ALGORITHM_PHC = 1,
  PASPC_ALGORITHM_PHC_TIGHT = 2,
  PASPC_ALGORITHM_PRIM = 3,
} PaspcAlgorithm;

/**
 * A parsed program with its projection atoms.
 */
typedef struct PaspcProgram PaspcProgram;

/**
 * Parses program text. On success `*out` owns a handle to release with
 * [`paspc_program_free`].
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PaspcStatus paspc_program_parse(const char *text, struct PaspcProgram **out);

/**
 * # Safety
 * `program` must be null or a handle from [`paspc_program_parse`] not yet freed.
 */
void paspc_program_free(struct PaspcProgram *program);

/**
 * Number of atoms, or 0 for a null handle.
 *
 * # Safety
 * `program` must be null or a live handle.
 */
size_t paspc_program_atom_count(const struct PaspcProgram *program);

/**
 * Replaces the projection with the `len` named atoms. `len == 0` selects
 * the empty projection.
 *
 * # Safety
 * `program` must be a live handle and `names` must point to `len`
 * NUL-terminated strings.
 */
enum PaspcStatus paspc_program_set_projection(struct PaspcProgram *program,
                                              const char *const *names,
                                              size_t len);

/**
 * Projects onto every atom.
 *
 * # Safety
 * `program` must be a live handle.
 */
enum PaspcStatus paspc_program_project_all(struct PaspcProgram *program);

/**
 * Computes the projected answer-set count. On success `*out` holds a
 * decimal string to release with [`paspc_string_free`].
 *
 * # Safety
 * `program` must be a live handle and `out` a valid pointer.
 */
enum PaspcStatus paspc_count(const struct PaspcProgram *program,
                             enum PaspcAlgorithm algorithm,
                             char **out);

/**
 * The same count by brute-force enumeration (at most 24 atoms).
 *
 * # Safety
 * `program` must be a live handle and `out` a valid pointer.
 */
enum PaspcStatus paspc_oracle_count(const struct PaspcProgram *program, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void paspc_string_free(char *s);

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *paspc_last_error(void);

#endif  /* PASPC_H */
