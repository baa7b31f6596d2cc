#ifndef RELCAT_H
#define RELCAT_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RelcatStatus {
  RELCAT_STATUS_OK = 0,
  /**
   * A checked property does not hold, or the requested value does not exist.
   */
  RELCAT_STATUS_PROPERTY_FAILS = 1,
  /**
   * Text failed to parse or an argument is out of range.
   */
  RELCAT_STATUS_INVALID_INPUT = 2,
  /**
   * Operands have incompatible domains or codomains.
   */
  RELCAT_STATUS_DOMAIN_MISMATCH = 3,
  RELCAT_STATUS_NULL_POINTER = 4,
  /**
   * A panic was caught at the boundary.
   */
  RELCAT_STATUS_INTERNAL = 5,
} RelcatStatus;

/**
 * Outcome of the division-rig collapse check.
 */
typedef enum RelcatCollapse {
  RELCAT_COLLAPSE_NOT_DIVISION_RIG = 0,
  RELCAT_COLLAPSE_NOT_INFINITARY = 1,
  RELCAT_COLLAPSE_COLLAPSED = 2,
  RELCAT_COLLAPSE_COLLAPSE_VIOLATED = 3,
} RelcatCollapse;

/**
 * A relation between two labelled finite sets.
 */
typedef struct RelcatRelation RelcatRelation;

/**
 * A finite rig.
 */
typedef struct RelcatRig RelcatRig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or an empty string.
 * The pointer stays valid until the next call on the same thread.
 */
const char *relcat_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void relcat_string_free(char *s);

/**
 * Looks up a bundled rig: `bool`, `chain3`, `trunc3`, `gf2` or `trivial`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum RelcatStatus relcat_rig_bundled(const char *name, struct RelcatRig **out);

/**
 * Parses a rig in the textual rig format.
 *
 * # Safety
 * `src` must be a NUL-terminated string; `out` must be writable.
 */
enum RelcatStatus relcat_rig_parse(const char *src, struct RelcatRig **out);

/**
 * # Safety
 * `r` must be null or a rig handle not yet freed.
 */
void relcat_rig_free(struct RelcatRig *r);

/**
 * Classifies a rig under the division-rig collapse check.
 *
 * # Safety
 * `r` must be a live rig handle; `out` must be writable.
 */
enum RelcatStatus relcat_rig_collapse_verdict(const struct RelcatRig *r, enum RelcatCollapse *out);

/**
 * Parses a relation file and returns the relation called `name`, or the
 * first relation when `name` is null.
 *
 * # Safety
 * `src` must be a NUL-terminated string, `name` null or NUL-terminated,
 * and `out` writable.
 */
enum RelcatStatus relcat_relation_parse(const char *src,
                                        const char *name,
                                        struct RelcatRelation **out);

/**
 * # Safety
 * `r` must be null or a relation handle not yet freed.
 */
void relcat_relation_free(struct RelcatRelation *r);

/**
 * `s ∘ r`.
 *
 * # Safety
 * `s` and `r` must be live relation handles; `out` must be writable.
 */
enum RelcatStatus relcat_relation_compose(const struct RelcatRelation *s,
                                          const struct RelcatRelation *r,
                                          struct RelcatRelation **out);

/**
 * The converse relation.
 *
 * # Safety
 * `r` must be a live relation handle; `out` must be writable.
 */
enum RelcatStatus relcat_relation_dagger(const struct RelcatRelation *r,
                                         struct RelcatRelation **out);

/**
 * `r ⊗ s` on product sets.
 *
 * # Safety
 * `r` and `s` must be live relation handles; `out` must be writable.
 */
enum RelcatStatus relcat_relation_tensor(const struct RelcatRelation *r,
                                         const struct RelcatRelation *s,
                                         struct RelcatRelation **out);

/**
 * Inclusion of the domain elements related to nothing.
 *
 * # Safety
 * `r` must be a live relation handle; `out` must be writable.
 */
enum RelcatStatus relcat_relation_kernel(const struct RelcatRelation *r,
                                         struct RelcatRelation **out);

/**
 * Complement of a point `I -> X`.
 *
 * # Safety
 * `a` must be a live relation handle; `out` must be writable.
 */
enum RelcatStatus relcat_relation_neg(const struct RelcatRelation *a, struct RelcatRelation **out);

/**
 * Meet of two points of the same set.
 *
 * # Safety
 * `a` and `b` must be live relation handles; `out` must be writable.
 */
enum RelcatStatus relcat_relation_meet(const struct RelcatRelation *a,
                                       const struct RelcatRelation *b,
                                       struct RelcatRelation **out);

/**
 * Union of two parallel relations.
 *
 * # Safety
 * `a` and `b` must be live relation handles; `out` must be writable.
 */
enum RelcatStatus relcat_relation_join(const struct RelcatRelation *a,
                                       const struct RelcatRelation *b,
                                       struct RelcatRelation **out);

/**
 * Trace of an endorelation: true iff it has a fixed point.
 *
 * # Safety
 * `r` must be a live relation handle; `out` must be writable.
 */
enum RelcatStatus relcat_relation_trace(const struct RelcatRelation *r, bool *out);

/**
 * The point `I -> X⊗Y` naming a relation `X -> Y`.
 *
 * # Safety
 * `r` must be a live relation handle; `out` must be writable.
 */
enum RelcatStatus relcat_relation_breve(const struct RelcatRelation *r,
                                        struct RelcatRelation **out);

/**
 * Serializes a relation in the relation file format under `name`.
 *
 * # Safety
 * `r` must be a live relation handle, `name` NUL-terminated, and `out`
 * writable. Free the result with [`relcat_string_free`].
 */
enum RelcatStatus relcat_relation_write(const struct RelcatRelation *r,
                                        const char *name,
                                        char **out);

/**
 * Runs the full axiom suite on objects of size at most `bound`, over
 * relations when `rig` is null and over matrices with entries in `rig`
 * otherwise. Writes the report to `report_out`; witnesses are written to
 * `witness_dir` when it is not null. Returns `RELCAT_STATUS_OK` when every
 * condition holds and `RELCAT_STATUS_PROPERTY_FAILS` otherwise.
 *
 * # Safety
 * `rig` must be null or a live rig handle, `witness_dir` null or
 * NUL-terminated, and `report_out` writable.
 */
enum RelcatStatus relcat_check(const struct RelcatRig *rig,
                               uint32_t bound,
                               const char *witness_dir,
                               char **report_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RELCAT_H */
