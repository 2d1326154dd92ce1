#ifndef MINIMAXLAB_H
#define MINIMAXLAB_H

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes shared by every FFI entry point.
 */
enum MmxStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  MMX_STATUS_OK = 0,
  MMX_STATUS_FAILURE = 1,
  MMX_STATUS_PARSE_ERROR = 2,
  MMX_STATUS_DIMENSION_ERROR = 3,
  MMX_STATUS_UNKNOWN_FIXTURE = 4,
  MMX_STATUS_NULL_ARGUMENT = 5,
};
#ifndef __cplusplus
typedef int32_t MmxStatus;
#endif // __cplusplus

/**
 * Opaque handle to a parsed quadratic game.
 */
typedef struct MmxGame MmxGame;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse a game from JSON ({"A": [[..]], "B": [[..]], "C": [[..]],
 * "a": [..], "b": [..], "c": ..}) into an opaque handle.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
MmxStatus mmx_game_parse(const char *json, MmxGame **out);

/**
 * Release a handle returned by `mmx_game_parse`.
 *
 * # Safety
 * `game` must come from `mmx_game_parse` and not be freed twice.
 */
void mmx_game_free(MmxGame *game);

/**
 * Classify the game; writes the classification report as a JSON string.
 *
 * # Safety
 * `game` must be a live handle and `out_json` a valid pointer.
 */
MmxStatus mmx_game_classify(const MmxGame *game, double tol, char **out_json);

/**
 * Exponential-stability verdict of an algorithm at a stationary point of
 * the game (the minimum-norm one, or the origin when none exists). `algo`
 * is one of "gda", "hb", "nag", "eg", "past-eg", "ogd"; `beta` is the
 * momentum or extra-gradient ratio, `k` the optimistic coefficient.
 *
 * # Safety
 * `game` must be a live handle; `algo` a valid NUL-terminated string;
 * `out_json` a valid pointer.
 */
MmxStatus mmx_game_stability(const MmxGame *game,
                             const char *algo,
                             double alpha1,
                             double alpha2,
                             double beta,
                             double k,
                             bool alternating,
                             char **out_json);

/**
 * Classify a registered quadratic fixture by id.
 *
 * # Safety
 * `id` must be a valid NUL-terminated string and `out_json` a valid pointer.
 */
MmxStatus mmx_fixture_classify(const char *id, double tol, char **out_json);

/**
 * Release a string returned by any of the `*_json` entry points.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void mmx_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MINIMAXLAB_H */
