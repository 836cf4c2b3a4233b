/* C interface to mdrkit. See mdr_last_error() for error details. */

#ifndef MDRKIT_H
#define MDRKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Call outcome, matching the command-line exit codes.
 */
typedef enum MdrStatus {
  /**
   * The affirmative answer: valid, derivable, accepted, holds.
   */
  MdrStatus_Ok = 0,
  /**
   * The negative answer, with a witness in the out parameter.
   */
  MdrStatus_No = 1,
  /**
   * Neither answer within the given budget.
   */
  MdrStatus_Inconclusive = 2,
  /**
   * Bad input or internal failure; see `mdr_last_error`.
   */
  MdrStatus_Error = 3,
} MdrStatus;

/**
 * Opaque handle to a loaded proof system.
 */
typedef struct MdrSystem MdrSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The crate version as a static string; never freed.
 */
const char *mdr_version(void);

/**
 * The error message of the most recent failing call on this thread.
 * Borrowed; valid until the next API call on the same thread.
 */
const char *mdr_last_error(void);

/**
 * Releases a string returned through an out parameter.  NULL is a no-op.
 */
void mdr_string_free(char *s);

/**
 * Loads a built-in system (`"MV_s"` or `"MV"`).  NULL on error.
 */
struct MdrSystem *mdr_system_builtin(const char *name);

/**
 * Loads a system from `axiom`/`rule` lines.  NULL on error.
 */
struct MdrSystem *mdr_system_load(const char *source);

/**
 * Releases a system handle.  NULL is a no-op.
 */
void mdr_system_free(struct MdrSystem *sys);

/**
 * Parses a consecution and hands back its canonical printing.
 */
enum MdrStatus mdr_parse_consecution(const char *text, char **canonical);

/**
 * Decides a consecution over Łukasiewicz chains of 2..=`max_chain` points
 * plus `samples` seeded rational valuations.  `Ok` means no counterexample
 * was found; `No` hands back the refuting valuation, one `var=value` line
 * per variable plus an `lhs=.. rhs=..` line.
 */
enum MdrStatus mdr_oracle_mv(const char *consecution,
                             uint32_t max_chain,
                             uint32_t samples,
                             uint64_t seed,
                             char **witness);

/**
 * Searches for a derivation of `claim` within `depth` steps and
 * `max_nodes` expansions.  `Ok` hands back a replayable certificate;
 * `Inconclusive` means the bounded search found nothing.
 */
enum MdrStatus mdr_derive(const struct MdrSystem *sys,
                          const char *claim,
                          uint32_t depth,
                          uint32_t max_nodes,
                          char **certificate);

/**
 * Replays a certificate.  A non-NULL `claim` overrides the certificate's
 * header.  `No` hands back the rejection reason.
 */
enum MdrStatus mdr_check_certificate(const struct MdrSystem *sys,
                                     const char *certificate,
                                     const char *claim,
                                     char **reason);

/**
 * Checks a tree proof against a claim with a single conclusion.
 * `No` hands back the rejection reason.
 */
enum MdrStatus mdr_check_tree(const struct MdrSystem *sys,
                              const char *tree,
                              const char *claim,
                              char **reason);

/**
 * Splits an accepted certificate at one occurrence of `formula`: out come
 * the tree proof of that occurrence and the residual certificate.
 */
enum MdrStatus mdr_split(const struct MdrSystem *sys,
                         const char *certificate,
                         const char *formula,
                         char **tree,
                         char **rest);

/**
 * Evaluates a consecution in every hypermatrix of a structure source
 * (contextually when `contextual` is non-zero, plain otherwise).  `No`
 * hands back one witness line per failing hypermatrix.
 */
enum MdrStatus mdr_hyper(const char *structures,
                         const char *consecution,
                         int32_t contextual,
                         char **witness);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MDRKIT_H */
