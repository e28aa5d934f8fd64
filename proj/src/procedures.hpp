#ifndef STEPUP_PROCEDURES_HPP
#define STEPUP_PROCEDURES_HPP

#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rational.hpp"
#include "sequences.hpp"

namespace stepup {

// Index-level result: decisions by input position. Rejected hypotheses are
// exactly the num_rejected smallest p-values.
struct StepResult {
    std::int64_t num_rejected = 0;
    std::vector<unsigned char> rejected;
};

// Stepup rule: reject the r smallest p-values, r the largest rank whose
// ordered p-value sits at or below its threshold (none if no rank does).
StepResult step_up(std::span<const double> p, const CriticalSequence& crit);

// Stepdown rule: r is the longest prefix of ranks all meeting their
// thresholds. Never rejects more than step_up on the same thresholds.
StepResult step_down(std::span<const double> p, const CriticalSequence& crit);

// Identifier-level wrappers used by the file-driven interface.
struct PValueVector {
    std::vector<std::string> ids;  // unique
    std::vector<double> p;         // each in [0, 1]
};

struct RankedDecision {
    std::string id;
    double p = 0.0;
    bool rejected = false;
};

struct RejectionOutcome {
    std::int64_t num_rejected = 0;
    std::vector<std::string> rejected_ids;     // ascending p
    std::vector<RankedDecision> sorted_pairs;  // full ranking
};

RejectionOutcome apply_stepup(const PValueVector& pv, const CriticalSequence& crit);
RejectionOutcome apply_stepdown(const PValueVector& pv, const CriticalSequence& crit);

// Designates which hypotheses are true nulls (simulation / evaluation only).
using TruthSet = std::unordered_set<std::string>;

// Rejected true hypotheses over total rejections; 0 when nothing is rejected.
double compute_fdp(const RejectionOutcome& outcome, const TruthSet& truth);

std::int64_t count_false_rejections(const RejectionOutcome& outcome, const TruthSet& truth);

// Holm's thresholds alpha * kfwer_template(1, s), meant for step_down.
CriticalSequence holm_values(std::int64_t s, double alpha);

// Hochberg's procedure: the same thresholds used with step_up.
CriticalSequence hochberg_values(std::int64_t s, double alpha);

// Benjamini-Yekutieli FDR thresholds q * i / (s * C_s).
CriticalSequence by_fdr_values(std::int64_t s, double q);

// FDP-tail control derived from BY via Markov: gamma * alpha * i / (s * C_s).
CriticalSequence by_derived_fdp_values(std::int64_t s, const Rational& gamma, double alpha);

// FDR control at level gamma, gamma * i / (s * C_s); the comparator against
// median-FDP thresholds.
CriticalSequence fdr_median_values(std::int64_t s, const Rational& gamma);

// Two-sided bracket on P{FDP > gamma} from E[FDP] = e:
//   max(0, (e-gamma)/(1-gamma)) <= P{FDP > gamma} <= min(1, e/gamma).
std::pair<double, double> fdp_fdr_conversion(double e, double gamma);

// FDR level implied by P{FDP > gamma} <= alpha.
inline double fdp_to_fdr_level(double gamma, double alpha) { return gamma * (1.0 - alpha) + alpha; }

}  // namespace stepup

#endif
