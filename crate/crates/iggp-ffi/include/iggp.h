/* C interface to the game toolkit: load game descriptions, simulate playouts, generate induction-task datasets, and score predictors. */

#ifndef IGGP_H
#define IGGP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of a fallible call.
typedef enum IggpStatus {
  // The call succeeded.
  IGGP_OK = 0,
  // The inputs were readable but semantically invalid.
  IGGP_DOMAIN_ERROR = 1,
  // A file could not be read or written.
  IGGP_IO_ERROR = 2,
  // A null pointer or malformed string argument.
  IGGP_INVALID_ARGUMENT = 3,
} IggpStatus;

// Opaque game handle.
typedef struct IggpGame IggpGame;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version string of the library; static storage, do not free.
const char *iggp_version(void);

// Length in bytes (excluding NUL) of the last error message on this
// thread; 0 when there is none.
uintptr_t iggp_last_error_length(void);

// Copy the last error message (NUL-terminated, possibly truncated) into
// `buf`. Returns the number of bytes written excluding the NUL, or 0 when
// there is no pending error or no room.
//
// # Safety
// `buf` must point to at least `cap` writable bytes.
uintptr_t iggp_last_error(char *buf, uintptr_t cap);

// Load and validate a game description plus its type signature.
// Returns null on failure (see [`iggp_last_error`]).
//
// # Safety
// Both arguments must be NUL-terminated strings valid for reads.
struct IggpGame *iggp_game_load(const char *gdl_path, const char *sig_path);

// Load one of the built-in games by name. Returns null on failure.
//
// # Safety
// `name` must be a NUL-terminated string valid for reads.
struct IggpGame *iggp_game_load_bundled(const char *name);

// Free a game handle. Null is a no-op.
//
// # Safety
// `game` must have come from a load function and not been freed before.
void iggp_game_free(struct IggpGame *game);

// Number of roles in the game; 0 on a null handle.
//
// # Safety
// `game` must be a live handle or null.
uintptr_t iggp_game_role_count(const struct IggpGame *game);

// Copy the NUL-terminated name of role `index` into `buf`. Returns the
// byte length written excluding the NUL, or 0 when the index is out of
// range or the buffer too small.
//
// # Safety
// `game` must be a live handle; `buf` must point to `cap` writable bytes.
uintptr_t iggp_game_role_name(const struct IggpGame *game,
                              uintptr_t index,
                              char *buf,
                              uintptr_t cap);

// Generate `traces` seeded random playouts and write the dump to
// `out_path`.
//
// # Safety
// `game` must be a live handle; `out_path` a NUL-terminated string.
enum IggpStatus iggp_simulate(const struct IggpGame *game,
                              uintptr_t traces,
                              uintptr_t max_steps,
                              uint64_t seed,
                              const char *out_path);

// Generate a split dataset under `out_dir` (one subdirectory per game).
// `jobs` bounds worker threads; 0 means the library default. Output bytes
// are identical for every `jobs` value.
//
// # Safety
// `game` must be a live handle; `out_dir` a NUL-terminated string.
enum IggpStatus iggp_generate_dataset(const struct IggpGame *game,
                                      uintptr_t traces,
                                      uintptr_t max_steps,
                                      uint64_t seed,
                                      uintptr_t jobs,
                                      const char *out_dir);

// Score a baseline (`"true"`, `"inertia"`, `"mean"`, `"knn<k>"`) on a
// dataset directory; writes a TSV report.
//
// # Safety
// All pointers must be NUL-terminated strings valid for reads.
enum IggpStatus iggp_baseline(const char *dataset_dir, const char *method, const char *out_tsv);

// Score a hypothesis file against a dataset directory; writes a TSV
// report.
//
// # Safety
// All pointers must be NUL-terminated strings valid for reads.
enum IggpStatus iggp_eval_hypothesis(const char *dataset_dir,
                                     const char *hypothesis_path,
                                     const char *out_tsv);

// Score each game's own flattened rules against the dataset it generated;
// writes a TSV report.
//
// # Safety
// All pointers must be NUL-terminated strings valid for reads.
enum IggpStatus iggp_eval_reference(const char *dataset_dir, const char *out_tsv);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* IGGP_H */
