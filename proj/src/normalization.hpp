#ifndef STEPUP_NORMALIZATION_HPP
#define STEPUP_NORMALIZATION_HPP

#include <cstdint>
#include <vector>

#include "rational.hpp"
#include "sequences.hpp"

namespace stepup {

// Scan of the worst-case bound S over the unknown number of true hypotheses.
// d_value = max of s_values, attained at argmax_card (smallest on ties).
struct NormalizationReport {
    std::int64_t s = 0;
    std::int64_t first_card = 0;          // cardinality of the first scan entry
    std::vector<double> s_values;         // S at |I| = first_card, first_card+1, ...
    double d_value = 0.0;
    std::int64_t argmax_card = 0;
};

// Worst-case probability that a stepup procedure with the given thresholds
// rejects >= k true hypotheses when card_i of s hypotheses are true:
//   |I| a_{s-|I|+k}/k + |I| sum_{k<j<=|I|} (a_{s-|I|+j} - a_{s-|I|+j-1})/j.
double s1(std::int64_t k, std::int64_t s, std::int64_t card_i, const CriticalSequence& seq);

// D1(k, s) = max over k <= |I| <= s of s1.
NormalizationReport d1(std::int64_t k, std::int64_t s, const CriticalSequence& seq);

// FDP analogue with m(j) = floor(gamma*j) + 1:
//   |I| a_1 + |I| sum (a_{s-|I|+k} - a_{s-|I|+k-1}) / max(k, m(s-|I|+k)),
// the sum over integers k in (|I|-s+1, |I|] with |I| >= m(s-|I|+k).
double s2(const Rational& gamma, std::int64_t s, std::int64_t card_i, const CriticalSequence& seq);

// D2(gamma, s) = max over 1 <= |I| <= s of s2.
NormalizationReport d2(const Rational& gamma, std::int64_t s, const CriticalSequence& seq);

// alpha * a_i / D1(k, s): stepup critical values controlling the k-FWER at
// level alpha for every joint p-value distribution.
CriticalSequence kfwer_stepup_values(std::int64_t k, std::int64_t s, double alpha,
                                     const CriticalSequence& seq);

// alpha * a_i / D2(gamma, s): stepup critical values with P{FDP > gamma} <= alpha.
CriticalSequence fdp_stepup_values(const Rational& gamma, std::int64_t s, double alpha,
                                   const CriticalSequence& seq);

// Attainable k-FWER factor when all s hypotheses are true and the unscaled
// thresholds alpha * kfwer_template are used:
//   2 - k/s + k sum_{k<=i<s} (i-k) / ((s+k-i) i (i+1)).
// Approaches 2 from above as s grows.
double weak_control_factor(std::int64_t k, std::int64_t s);

// Same factor for a configuration with card_i true hypotheses:
//   1 + |I| sum_{k<j<=|I|} (a_{s-|I|+j} - a_{s-|I|+j-1})/j
// with a from kfwer_template(k, s); equals s1 on that template.
double strong_control_factor_exact(std::int64_t k, std::int64_t s, std::int64_t card_i);

}  // namespace stepup

#endif
