#ifndef HOCHSCHILD_H
#define HOCHSCHILD_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * ABI version; bumped on breaking changes to this interface.
 */
#define HH_ABI_VERSION 1

#define HH_OK 0

#define HH_ERR_INTERNAL 1

#define HH_ERR_PARSE 2

#define HH_ERR_BUDGET 3

#define HH_ERR_VERIFY 4

#define HH_ERR_NULL_ARGUMENT 5

#define HH_ERR_UTF8 6

#define HH_ERR_PANIC 7

#define HH_ERR_IO 8

/**
 * Pipeline commands runnable through [`hh_run`].
 */
typedef enum HhCommand {
  HH_COMMAND_HH = 0,
  HH_COMMAND_RELATIVE = 1,
  HH_COMMAND_CERTIFICATE = 2,
  HH_COMMAND_JZ = 3,
  HH_COMMAND_HAN = 4,
  HH_COMMAND_GLDIM = 5,
} HhCommand;

/**
 * An opaque, parsed quiver spec.
 */
typedef struct HhSpec HhSpec;

/**
 * Run options; obtain defaults from [`hh_options_default`].
 */
typedef struct HhOptions {
  /**
   * truncation degree N (homology exact for k <= N-1); at least 2
   */
  uint32_t degree;
  uint32_t cap_nilpotency;
  uint32_t cap_pd;
  /**
   * chain-dimension budget
   */
  uint64_t budget;
  /**
   * bar-level sequence checks inside reports are skipped above this
   */
  uint64_t jz_bar_limit;
} HhOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

uint32_t hh_abi_version(void);

struct HhOptions hh_options_default(void);

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len` bytes); returns the full message length.
 *
 * # Safety
 * `buf` must point to `len` writable bytes, or be null (then only the
 * length is returned).
 */
size_t hh_last_error_message(char *buf, size_t len);

/**
 * Parses a quiver spec document.
 *
 * # Safety
 * `toml_text` must be a NUL-terminated string and `out_spec` a valid
 * pointer. On success `*out_spec` owns the handle; free it with
 * [`hh_spec_free`].
 */
int32_t hh_spec_parse(const char *toml_text, struct HhSpec **out_spec);

/**
 * Parses a quiver spec from a file path.
 *
 * # Safety
 * As [`hh_spec_parse`]; `path` must be a NUL-terminated string.
 */
int32_t hh_spec_parse_file(const char *path, struct HhSpec **out_spec);

/**
 * Frees a spec handle. Passing null is a no-op.
 *
 * # Safety
 * `spec` must have been returned by a parse function and not freed before.
 */
void hh_spec_free(struct HhSpec *spec);

/**
 * Dimension of the compiled algebra, written to `out_dim`.
 *
 * # Safety
 * `spec` and `out_dim` must be valid pointers.
 */
int32_t hh_spec_algebra_dim(const struct HhSpec *spec, size_t *out_dim);

/**
 * Runs a pipeline command and returns the report as a newly allocated
 * string in `out_report` (machine-readable JSON when `machine_format` is
 * nonzero, a human-readable table otherwise). Free it with
 * [`hh_string_free`]. Returns `HH_ERR_VERIFY` when the report was produced
 * but a theorem-level assertion failed; `out_report` is still set then.
 *
 * # Safety
 * `spec` must be a live handle, `options` null (take defaults) or valid,
 * and `out_report` a valid pointer.
 */
int32_t hh_run(const struct HhSpec *spec,
               enum HhCommand command,
               const struct HhOptions *options,
               int32_t machine_format,
               char **out_report);

/**
 * Frees a string returned by [`hh_run`]. Passing null is a no-op.
 *
 * # Safety
 * `s` must have been returned by this library and not freed before.
 */
void hh_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOCHSCHILD_H */
