#ifndef STEPUP_BOUNDS_HPP
#define STEPUP_BOUNDS_HPP

#include <cstdint>
#include <vector>

#include "rational.hpp"
#include "sequences.hpp"

namespace stepup {

// Thresholds for the order statistics of t valid p-values:
// 0 <= betas[0] <= ... <= betas[m-1] <= 1 with m <= t.
struct BetaSequence {
    std::vector<double> betas;
    std::int64_t t = 0;

    BetaSequence(std::vector<double> b, std::int64_t t_count);
};

struct BoundValue {
    double value = 0.0;
    bool exceeds_one = false;  // sharpness only holds when the bound is <= 1
};

// Worst-case probability of { p_(1) <= b_1 } u ... u { p_(m) <= b_m }:
//   t * sum_i (b_i - b_{i-1}) / i.
// Returned uncapped; it is a valid probability bound only when <= 1.
BoundValue lemma32_bound(const BetaSequence& bs);

// Order-statistic thresholds realizing the k-FWER union for card_i true
// hypotheses: beta_j = 0 below k, crit_{s-|I|+j} from k upward.
BetaSequence kfwer_beta_sequence(std::int64_t k, std::int64_t s, std::int64_t card_i,
                                 const CriticalSequence& crit);

// FDP analogue. Each qualifying rejection count j maps to order statistic
// max(|I|-s+j, m(j)); per order statistic the largest threshold wins and
// untouched slots carry the previous value forward (zero-width increment).
BetaSequence fdp_beta_sequence(const Rational& gamma, std::int64_t s, std::int64_t card_i,
                               const CriticalSequence& crit);

// Same envelope plus, per order statistic, the rejection count j whose
// threshold was kept (0 for carried-forward slots). The adversarial sampler
// uses source_rank to size its cascade tiers.
struct FdpEnvelope {
    BetaSequence bs;
    std::vector<std::int64_t> source_rank;

    FdpEnvelope(BetaSequence b, std::vector<std::int64_t> ranks)
        : bs(std::move(b)), source_rank(std::move(ranks)) {}
};

FdpEnvelope fdp_beta_envelope(const Rational& gamma, std::int64_t s, std::int64_t card_i,
                              const CriticalSequence& crit);

}  // namespace stepup

#endif
