#ifndef ELICIT_H
#define ELICIT_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ElicitCondorcet {
  /**
   * The same candidate is the Condorcet winner in every completion.
   */
  ELICIT_CONDORCET_FIXED = 0,
  /**
   * No completion has a Condorcet winner.
   */
  ELICIT_CONDORCET_NONE = 1,
  ELICIT_CONDORCET_NOT_DETERMINED = 2,
} ElicitCondorcet;

typedef enum ElicitStatus {
  ELICIT_STATUS_OK = 0,
  ELICIT_STATUS_INVALID_ARGUMENT = 1,
  ELICIT_STATUS_PARSE_ERROR = 2,
  ELICIT_STATUS_CAP_EXCEEDED = 3,
  ELICIT_STATUS_MODEL_MISMATCH = 4,
  ELICIT_STATUS_INVALID_PROFILE = 5,
  ELICIT_STATUS_INTERNAL = 6,
} ElicitStatus;

/**
 * Opaque profile handle.
 */
typedef struct ElicitProfile ElicitProfile;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a profile from its text form.
 *
 * # Safety
 * `text_ptr` must be a nul-terminated string and `out` a valid pointer. On
 * success `*out` owns a handle to be released with [`elicit_profile_free`].
 */
enum ElicitStatus elicit_profile_parse(const char *text_ptr, struct ElicitProfile **out);

/**
 * # Safety
 * `p` must come from [`elicit_profile_parse`] and not be freed twice. Null
 * is ignored.
 */
void elicit_profile_free(struct ElicitProfile *p);

/**
 * Allows an even total weight when `strict` is false.
 *
 * # Safety
 * `p` must be a live handle.
 */
enum ElicitStatus elicit_profile_set_strict_odd(struct ElicitProfile *p, bool strict);

/**
 * Number of candidates, or 0 for a null handle.
 *
 * # Safety
 * `p` must be a live handle or null.
 */
uintptr_t elicit_profile_num_candidates(const struct ElicitProfile *p);

/**
 * Label of candidate `index`, or null if out of range. Free the result with
 * [`elicit_string_free`].
 *
 * # Safety
 * `p` must be a live handle or null.
 */
char *elicit_candidate_label(const struct ElicitProfile *p, uintptr_t index);

/**
 * Winner of a complete profile. `tie_break` is `lex`, `favor:X` or
 * `against:X`; null means `lex`.
 *
 * # Safety
 * `p` must be a live handle, the strings nul-terminated, `out` valid.
 */
enum ElicitStatus elicit_winner(const struct ElicitProfile *p,
                                const char *rule,
                                const char *tie_break,
                                uintptr_t *out);

/**
 * Possible winners as a bit mask over candidate indices.
 *
 * # Safety
 * As for [`elicit_winner`].
 */
enum ElicitStatus elicit_possible_winners(const struct ElicitProfile *p,
                                          const char *rule,
                                          uint64_t cap,
                                          uint64_t *out_mask);

/**
 * Whether the winner is fixed over all completions of partial ballots and
 * unknown weight.
 *
 * # Safety
 * As for [`elicit_winner`].
 */
enum ElicitStatus elicit_fine_over(const struct ElicitProfile *p,
                                   const char *rule,
                                   uint64_t cap,
                                   bool *out);

/**
 * Whether the winner is fixed however the unknown weight votes.
 *
 * # Safety
 * As for [`elicit_winner`].
 */
enum ElicitStatus elicit_coarse_over(const struct ElicitProfile *p,
                                     const char *rule,
                                     uint64_t cap,
                                     bool *out);

/**
 * Fine elicitation over single-peaked completions along the profile's axis.
 *
 * # Safety
 * As for [`elicit_winner`].
 */
enum ElicitStatus elicit_fine_sp_over(const struct ElicitProfile *p,
                                      const char *rule,
                                      uint64_t cap,
                                      bool *out);

/**
 * Whether committed weight settles the Condorcet winner. `out_winner` is
 * written only for [`ElicitCondorcet::Fixed`] and may be null.
 *
 * # Safety
 * `p` must be a live handle, `out_status` valid, `out_winner` valid or null.
 */
enum ElicitStatus elicit_condorcet_fixed(const struct ElicitProfile *p,
                                         enum ElicitCondorcet *out_status,
                                         uintptr_t *out_winner);

/**
 * Builds the `kind` construction for `bag` (e.g. `"1,1,2"`) and reports
 * whether its answer matches the partition oracle.
 *
 * # Safety
 * The strings must be nul-terminated and `out_holds` valid.
 */
enum ElicitStatus elicit_verify_reduction(const char *kind,
                                          const char *bag,
                                          uint64_t cap,
                                          bool *out_holds);

/**
 * Message for the last failure on this thread, or null. Free the result
 * with [`elicit_string_free`].
 */
char *elicit_last_error_message(void);

/**
 * # Safety
 * `s` must come from this library and not be freed twice. Null is ignored.
 */
void elicit_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ELICIT_H */
