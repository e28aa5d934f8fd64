#include "bounds.hpp"

#include <algorithm>
#include <stdexcept>

namespace stepup {

BetaSequence::BetaSequence(std::vector<double> b, std::int64_t t_count)
    : betas(std::move(b)), t(t_count) {
    if (t < 1) throw std::invalid_argument("beta sequence: t must be >= 1");
    if (static_cast<std::int64_t>(betas.size()) > t)
        throw std::invalid_argument("beta sequence: m must be <= t");
    double prev = 0.0;
    for (double v : betas) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("beta sequence: entries must lie in [0, 1]");
        if (v < prev) throw std::invalid_argument("beta sequence: entries must be nondecreasing");
        prev = v;
    }
}

BoundValue lemma32_bound(const BetaSequence& bs) {
    double total = 0.0;
    double prev = 0.0;
    for (size_t i = 0; i < bs.betas.size(); ++i) {
        total += (bs.betas[i] - prev) / static_cast<double>(i + 1);
        prev = bs.betas[i];
    }
    const double value = static_cast<double>(bs.t) * total;
    return BoundValue{value, value > 1.0};
}

BetaSequence kfwer_beta_sequence(std::int64_t k, std::int64_t s, std::int64_t card_i,
                                 const CriticalSequence& crit) {
    if (crit.size() != s) throw std::invalid_argument("sequence length does not match s");
    if (k < 1 || k > card_i || card_i > s)
        throw std::domain_error("kfwer_beta_sequence: need 1 <= k <= |I| <= s");
    std::vector<double> b(static_cast<size_t>(card_i), 0.0);
    for (std::int64_t j = k; j <= card_i; ++j)
        b[static_cast<size_t>(j - 1)] = crit.at(s - card_i + j);
    return BetaSequence(std::move(b), card_i);
}

FdpEnvelope fdp_beta_envelope(const Rational& gamma, std::int64_t s, std::int64_t card_i,
                              const CriticalSequence& crit) {
    require_gamma(gamma);
    if (crit.size() != s) throw std::invalid_argument("sequence length does not match s");
    if (card_i < 1 || card_i > s)
        throw std::domain_error("fdp_beta_sequence: need 1 <= |I| <= s");

    std::vector<double> b(static_cast<size_t>(card_i), 0.0);
    std::vector<std::int64_t> rank(static_cast<size_t>(card_i), 0);
    // Rejection counts j correspond to union indices k = |I|-s+j.
    for (std::int64_t j = 1; j <= s; ++j) {
        const std::int64_t m = m_of(gamma, j);
        if (card_i < m) continue;
        const std::int64_t ell = std::max(card_i - s + j, m);
        // crit is nondecreasing in j, so the last j landing on ell keeps the max.
        b[static_cast<size_t>(ell - 1)] = crit.at(j);
        rank[static_cast<size_t>(ell - 1)] = j;
    }
    for (std::int64_t ell = 2; ell <= card_i; ++ell)
        if (rank[static_cast<size_t>(ell - 1)] == 0)
            b[static_cast<size_t>(ell - 1)] = b[static_cast<size_t>(ell - 2)];
    return FdpEnvelope(BetaSequence(std::move(b), card_i), std::move(rank));
}

BetaSequence fdp_beta_sequence(const Rational& gamma, std::int64_t s, std::int64_t card_i,
                               const CriticalSequence& crit) {
    return fdp_beta_envelope(gamma, s, card_i, crit).bs;
}

}  // namespace stepup
