/* stepup - stepup multiple-testing procedures with k-FWER and FDP control
 * under arbitrary p-value dependence.
 *
 * C interface over the C++ core. All objects are opaque handles released
 * with the matching *_free function; functions return STEPUP_OK on success
 * and a nonzero status otherwise, with a thread-local message available via
 * stepup_last_error().
 *
 * Proportions such as gamma are passed as strings ("1/10", "0.05") and
 * parsed as exact rationals so floor computations never hit floating-point
 * boundaries.
 */
#ifndef STEPUP_H
#define STEPUP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define STEPUP_API __declspec(dllexport)
#else
#  define STEPUP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    STEPUP_OK = 0,
    STEPUP_EINVAL = 1, /* malformed input (parse errors, inconsistent sizes) */
    STEPUP_EDOM = 2,   /* parameter outside its documented domain */
    STEPUP_ERANGE = 3, /* construction infeasible (e.g. bound exceeds 1) */
    STEPUP_ENOMEM = 4
} stepup_status;

/* Message describing the most recent failure on this thread. */
STEPUP_API const char* stepup_last_error(void);

STEPUP_API const char* stepup_version(void);

/* ---- critical sequences ---------------------------------------------- */

typedef struct stepup_seq stepup_seq;

/* k/s for i <= k, k/(s+k-i) above; requires 1 <= k <= s. */
STEPUP_API stepup_status stepup_seq_kfwer(int64_t k, int64_t s, stepup_seq** out);

/* i/s. */
STEPUP_API stepup_status stepup_seq_linear(int64_t s, stepup_seq** out);

/* m(i)/(s+m(i)-i) with m(i) = floor(gamma*i)+1; gamma in [0,1). */
STEPUP_API stepup_status stepup_seq_fdp(const char* gamma, int64_t s, stepup_seq** out);

/* Explicit thresholds; must be nondecreasing and lie in (0, 1]. */
STEPUP_API stepup_status stepup_seq_from_values(const double* values, size_t n, stepup_seq** out);

/* Holm / Hochberg thresholds alpha * (1/(s), ..., 1/2, 1)-shaped; identical
 * constants, intended for stepdown resp. stepup use. */
STEPUP_API stepup_status stepup_seq_holm(int64_t s, double alpha, stepup_seq** out);
STEPUP_API stepup_status stepup_seq_hochberg(int64_t s, double alpha, stepup_seq** out);

/* Benjamini-Yekutieli FDR thresholds q*i/(s*C_s). */
STEPUP_API stepup_status stepup_seq_by_fdr(int64_t s, double q, stepup_seq** out);

/* FDP-tail thresholds derived from BY via Markov: gamma*alpha*i/(s*C_s). */
STEPUP_API stepup_status stepup_seq_by_fdp(int64_t s, const char* gamma, double alpha,
                                           stepup_seq** out);

/* FDR control at level gamma: gamma*i/(s*C_s). */
STEPUP_API stepup_status stepup_seq_fdr_median(int64_t s, const char* gamma, stepup_seq** out);

/* alpha * a_i / D1(k,s): worst-case k-FWER control at level alpha. */
STEPUP_API stepup_status stepup_seq_kfwer_control(int64_t k, int64_t s, double alpha,
                                                  const stepup_seq* base, stepup_seq** out);

/* alpha * a_i / D2(gamma,s): worst-case P{FDP > gamma} <= alpha. */
STEPUP_API stepup_status stepup_seq_fdp_control(const char* gamma, int64_t s, double alpha,
                                                const stepup_seq* base, stepup_seq** out);

/* Entrywise multiple; result must remain a valid sequence. */
STEPUP_API stepup_status stepup_seq_scale(const stepup_seq* seq, double factor, stepup_seq** out);

STEPUP_API size_t stepup_seq_len(const stepup_seq* seq);

/* Copies the thresholds into values[0..n); n must equal stepup_seq_len. */
STEPUP_API stepup_status stepup_seq_values(const stepup_seq* seq, double* values, size_t n);

STEPUP_API void stepup_seq_free(stepup_seq* seq);

/* ---- normalizing constants ------------------------------------------- */

typedef struct stepup_report stepup_report;

/* D1(k,s) = max over k <= |I| <= s of the k-FWER bound S1. */
STEPUP_API stepup_status stepup_d1(int64_t k, int64_t s, const stepup_seq* seq,
                                   stepup_report** out);

/* D2(gamma,s) = max over 1 <= |I| <= s of the FDP bound S2. */
STEPUP_API stepup_status stepup_d2(const char* gamma, int64_t s, const stepup_seq* seq,
                                   stepup_report** out);

STEPUP_API double stepup_report_d(const stepup_report* rep);
STEPUP_API int64_t stepup_report_argmax(const stepup_report* rep);
STEPUP_API size_t stepup_report_len(const stepup_report* rep);

/* Entry i of the scan: the candidate cardinality and its S value. */
STEPUP_API stepup_status stepup_report_entry(const stepup_report* rep, size_t i, int64_t* card,
                                             double* s_value);

STEPUP_API void stepup_report_free(stepup_report* rep);

/* Single bound evaluations. */
STEPUP_API stepup_status stepup_s1(int64_t k, int64_t s, int64_t card, const stepup_seq* seq,
                                   double* out);
STEPUP_API stepup_status stepup_s2(const char* gamma, int64_t s, int64_t card,
                                   const stepup_seq* seq, double* out);

/* C_j = 1 + 1/2 + ... + 1/j. */
STEPUP_API stepup_status stepup_harmonic(int64_t j, double* out);

/* Attainable k-FWER factor with all hypotheses true (approaches 2). */
STEPUP_API stepup_status stepup_weak_control_factor(int64_t k, int64_t s, double* out);

/* Attainable factor with card true hypotheses; near 2 - k/card for large card. */
STEPUP_API stepup_status stepup_strong_control_factor(int64_t k, int64_t s, int64_t card,
                                                      double* out);

/* Markov bracket on P{FDP > gamma} given E[FDP] = e. */
STEPUP_API stepup_status stepup_fdp_fdr_bounds(double e, double gamma, double* lower,
                                               double* upper);

/* ---- applying procedures --------------------------------------------- */

typedef struct stepup_result stepup_result;

/* Runs the stepup (step_down = 0) or stepdown (step_down = 1) rule for the
 * p-values against the thresholds; n must equal the sequence length. */
STEPUP_API stepup_status stepup_apply(const double* p, size_t n, const stepup_seq* crit,
                                      int step_down, stepup_result** out);

STEPUP_API int64_t stepup_result_num_rejected(const stepup_result* res);

/* Per-input decisions: decisions[i] = 1 when hypothesis i is rejected. */
STEPUP_API stepup_status stepup_result_decisions(const stepup_result* res, int* decisions,
                                                 size_t n);

STEPUP_API void stepup_result_free(stepup_result* res);

/* ---- simulation ------------------------------------------------------- */

typedef struct stepup_model stepup_model;

typedef enum {
    STEPUP_FALSE_ZERO = 0,
    STEPUP_FALSE_FIXED = 1,
    STEPUP_FALSE_UNIFORM = 2
} stepup_false_policy;

/* True p-values i.i.d. uniform (hypotheses 0..num_true-1), false ones per
 * policy. */
STEPUP_API stepup_status stepup_model_independent_uniform(int64_t s, int64_t num_true,
                                                          stepup_false_policy policy,
                                                          double fixed_value,
                                                          stepup_model** out);

/* All t hypotheses true; joint distribution attaining the order-statistic
 * bound for the given thresholds with equality. Fails when the bound
 * exceeds 1. */
STEPUP_API stepup_status stepup_model_lemma32(const double* betas, size_t m, int64_t t,
                                              stepup_model** out);

/* Worst-case joint distribution for a stepup procedure with the given
 * thresholds: realizes k-FWER equal to max_card S1(k,s,card,crit). */
STEPUP_API stepup_status stepup_model_kfwer_adversary(int64_t k, int64_t s,
                                                      const stepup_seq* crit,
                                                      stepup_model** out);

/* Worst-case joint distribution for FDP tail control: realizes
 * P{FDP > gamma} equal to max_card S2(gamma,s,card,crit). */
STEPUP_API stepup_status stepup_model_fdp_adversary(const char* gamma, int64_t s,
                                                    const stepup_seq* crit, stepup_model** out);

/* Even s, s/2+1 true uniform p-values, false ones pinned at 0. */
STEPUP_API stepup_status stepup_model_by_counterexample(int64_t s, stepup_model** out);

STEPUP_API int64_t stepup_model_size(const stepup_model* model);
STEPUP_API int64_t stepup_model_num_true(const stepup_model* model);
STEPUP_API void stepup_model_free(stepup_model* model);

/* Closed-form FWER lower bound of the BY-threshold stepup procedure under
 * the counterexample model: 1 - (1 - alpha/(2 C_s))^(s/2+1). */
STEPUP_API stepup_status stepup_by_counterexample_bound(int64_t s, double alpha, double* out);

typedef enum {
    STEPUP_METRIC_KFWER = 0,
    STEPUP_METRIC_FDP_TAIL = 1,
    STEPUP_METRIC_FDR = 2
} stepup_metric_kind;

typedef struct {
    double estimate;
    double std_error;
    int64_t replications;
    uint64_t seed;
} stepup_estimate;

/* Monte-Carlo estimate of the chosen metric for the procedure (crit +
 * engine) under the model. metric_k applies to the k-FWER metric and
 * metric_gamma to the FDP tail metric (pass NULL otherwise). Replication r
 * derives its stream from (seed, r): results are identical for any
 * num_threads (0 = one worker per core). */
STEPUP_API stepup_status stepup_simulate(const stepup_model* model, const stepup_seq* crit,
                                         int step_down, stepup_metric_kind metric,
                                         int64_t metric_k, const char* metric_gamma,
                                         int64_t reps, uint64_t seed, int num_threads,
                                         stepup_estimate* out);

#ifdef __cplusplus
}
#endif

#endif /* STEPUP_H */
