#include "sequences.hpp"

#include <stdexcept>

namespace stepup {

CriticalSequence::CriticalSequence(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("critical sequence: empty");
    double prev = 0.0;
    for (double v : values_) {
        if (!(v > 0.0 && v <= 1.0))
            throw std::invalid_argument("critical sequence: entries must lie in (0, 1]");
        if (v < prev) throw std::invalid_argument("critical sequence: entries must be nondecreasing");
        prev = v;
    }
}

CriticalSequence CriticalSequence::scaled(double factor) const {
    if (!(factor > 0.0)) throw std::invalid_argument("critical sequence: scale factor must be positive");
    std::vector<double> out(values_);
    for (double& v : out) v *= factor;
    return CriticalSequence(std::move(out));
}

double harmonic(std::int64_t j) {
    if (j < 1) throw std::domain_error("harmonic: j must be >= 1");
    double sum = 0.0;
    for (std::int64_t i = 1; i <= j; ++i) sum += 1.0 / static_cast<double>(i);
    return sum;
}

void require_gamma(const Rational& gamma) {
    if (gamma.num >= gamma.den)
        throw std::domain_error("gamma must lie in [0, 1)");
}

void require_size(std::int64_t s) {
    if (s < 1) throw std::domain_error("s must be >= 1");
}

std::int64_t m_of(const Rational& gamma, std::int64_t j) {
    require_gamma(gamma);
    if (j < 1) throw std::domain_error("m_of: j must be >= 1");
    return gamma.floor_mul(j) + 1;
}

CriticalSequence kfwer_template(std::int64_t k, std::int64_t s) {
    require_size(s);
    if (k < 1 || k > s) throw std::domain_error("kfwer template: need 1 <= k <= s");
    std::vector<double> v(static_cast<size_t>(s));
    const double kd = static_cast<double>(k);
    for (std::int64_t i = 1; i <= s; ++i)
        v[static_cast<size_t>(i - 1)] =
            i <= k ? kd / static_cast<double>(s) : kd / static_cast<double>(s + k - i);
    return CriticalSequence(std::move(v));
}

CriticalSequence linear_template(std::int64_t s) {
    require_size(s);
    std::vector<double> v(static_cast<size_t>(s));
    for (std::int64_t i = 1; i <= s; ++i)
        v[static_cast<size_t>(i - 1)] = static_cast<double>(i) / static_cast<double>(s);
    return CriticalSequence(std::move(v));
}

CriticalSequence fdp_template(const Rational& gamma, std::int64_t s) {
    require_gamma(gamma);
    require_size(s);
    std::vector<double> v(static_cast<size_t>(s));
    for (std::int64_t i = 1; i <= s; ++i) {
        const std::int64_t m = m_of(gamma, i);
        v[static_cast<size_t>(i - 1)] = static_cast<double>(m) / static_cast<double>(s + m - i);
    }
    return CriticalSequence(std::move(v));
}

}  // namespace stepup
