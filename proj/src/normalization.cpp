#include "normalization.hpp"

#include <algorithm>
#include <stdexcept>

namespace stepup {

namespace {

void require_lengths(std::int64_t s, const CriticalSequence& seq) {
    if (seq.size() != s) throw std::invalid_argument("sequence length does not match s");
}

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0, 1)");
}

}  // namespace

double s1(std::int64_t k, std::int64_t s, std::int64_t card_i, const CriticalSequence& seq) {
    require_size(s);
    require_lengths(s, seq);
    if (k < 1 || k > card_i || card_i > s) throw std::domain_error("s1: need 1 <= k <= |I| <= s");
    const double c = static_cast<double>(card_i);
    double total = c * seq.at(s - card_i + k) / static_cast<double>(k);
    for (std::int64_t j = k + 1; j <= card_i; ++j)
        total += c * (seq.at(s - card_i + j) - seq.at(s - card_i + j - 1)) / static_cast<double>(j);
    return total;
}

NormalizationReport d1(std::int64_t k, std::int64_t s, const CriticalSequence& seq) {
    require_size(s);
    require_lengths(s, seq);
    if (k < 1 || k > s) throw std::domain_error("d1: need 1 <= k <= s");
    NormalizationReport rep;
    rep.s = s;
    rep.first_card = k;
    rep.s_values.reserve(static_cast<size_t>(s - k + 1));
    for (std::int64_t c = k; c <= s; ++c) {
        const double v = s1(k, s, c, seq);
        rep.s_values.push_back(v);
        if (c == k || v > rep.d_value) {
            rep.d_value = v;
            rep.argmax_card = c;
        }
    }
    return rep;
}

double s2(const Rational& gamma, std::int64_t s, std::int64_t card_i, const CriticalSequence& seq) {
    require_gamma(gamma);
    require_size(s);
    require_lengths(s, seq);
    if (card_i < 1 || card_i > s) throw std::domain_error("s2: need 1 <= |I| <= s");
    const double c = static_cast<double>(card_i);
    double total = c * seq.at(1);
    // k runs over (|I|-s+1, |I|], i.e. j = s-|I|+k over [2, s].
    for (std::int64_t j = 2; j <= s; ++j) {
        const std::int64_t m = m_of(gamma, j);
        if (card_i < m) continue;
        const std::int64_t k = card_i - s + j;
        total += c * (seq.at(j) - seq.at(j - 1)) / static_cast<double>(std::max(k, m));
    }
    return total;
}

NormalizationReport d2(const Rational& gamma, std::int64_t s, const CriticalSequence& seq) {
    require_gamma(gamma);
    require_size(s);
    require_lengths(s, seq);
    NormalizationReport rep;
    rep.s = s;
    rep.first_card = 1;
    rep.s_values.reserve(static_cast<size_t>(s));
    for (std::int64_t c = 1; c <= s; ++c) {
        const double v = s2(gamma, s, c, seq);
        rep.s_values.push_back(v);
        if (c == 1 || v > rep.d_value) {
            rep.d_value = v;
            rep.argmax_card = c;
        }
    }
    return rep;
}

CriticalSequence kfwer_stepup_values(std::int64_t k, std::int64_t s, double alpha,
                                     const CriticalSequence& seq) {
    require_alpha(alpha);
    const double d = d1(k, s, seq).d_value;
    return seq.scaled(alpha / d);
}

CriticalSequence fdp_stepup_values(const Rational& gamma, std::int64_t s, double alpha,
                                   const CriticalSequence& seq) {
    require_alpha(alpha);
    const double d = d2(gamma, s, seq).d_value;
    return seq.scaled(alpha / d);
}

double weak_control_factor(std::int64_t k, std::int64_t s) {
    require_size(s);
    if (k < 1 || k > s) throw std::domain_error("weak_control_factor: need 1 <= k <= s");
    double total = 2.0 - static_cast<double>(k) / static_cast<double>(s);
    for (std::int64_t i = k; i < s; ++i)
        total += static_cast<double>(k) * static_cast<double>(i - k) /
                 (static_cast<double>(s + k - i) * static_cast<double>(i) * static_cast<double>(i + 1));
    return total;
}

double strong_control_factor_exact(std::int64_t k, std::int64_t s, std::int64_t card_i) {
    require_size(s);
    if (k < 1 || k > card_i || card_i > s)
        throw std::domain_error("strong_control_factor_exact: need 1 <= k <= |I| <= s");
    // Thresholds from kfwer_template(k, s); a_{s-|I|+j} = k/(|I|+k-j) for j > k.
    const double c = static_cast<double>(card_i);
    double total = 1.0;
    double prev = static_cast<double>(k) / static_cast<double>(card_i);  // j = k entry
    for (std::int64_t j = k + 1; j <= card_i; ++j) {
        const double cur = static_cast<double>(k) / static_cast<double>(card_i + k - j);
        total += c * (cur - prev) / static_cast<double>(j);
        prev = cur;
    }
    return total;
}

}  // namespace stepup
