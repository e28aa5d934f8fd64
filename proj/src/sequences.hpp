#ifndef STEPUP_SEQUENCES_HPP
#define STEPUP_SEQUENCES_HPP

#include <cstdint>
#include <vector>

#include "rational.hpp"

namespace stepup {

// Nondecreasing rejection thresholds a_1 <= ... <= a_s, each in (0, 1].
// Step procedures compare the i-th smallest p-value against values[i-1].
class CriticalSequence {
  public:
    explicit CriticalSequence(std::vector<double> values);

    std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }

    // ordinal is 1-based to match the usual subscript convention.
    double at(std::int64_t ordinal) const { return values_[static_cast<size_t>(ordinal - 1)]; }

    const std::vector<double>& values() const { return values_; }

    // Entrywise multiple; the result must still be a valid sequence.
    CriticalSequence scaled(double factor) const;

  private:
    std::vector<double> values_;
};

// C_j = 1 + 1/2 + ... + 1/j.
double harmonic(std::int64_t j);

// floor(gamma * j) + 1, evaluated exactly; the smallest number of false
// rejections that pushes the false discovery proportion above gamma when
// j hypotheses are rejected. Requires gamma in [0, 1) and j >= 1.
std::int64_t m_of(const Rational& gamma, std::int64_t j);

// Thresholds k/s for i <= k and k/(s+k-i) above, the classical shape for
// tolerating up to k false rejections. Requires 1 <= k <= s.
CriticalSequence kfwer_template(std::int64_t k, std::int64_t s);

// Thresholds i/s.
CriticalSequence linear_template(std::int64_t s);

// Thresholds m(i)/(s + m(i) - i) with m(i) = floor(gamma*i) + 1; reduces to
// kfwer_template(1, s) at gamma = 0.
CriticalSequence fdp_template(const Rational& gamma, std::int64_t s);

// Shared precondition checks.
void require_gamma(const Rational& gamma);
void require_size(std::int64_t s);

}  // namespace stepup

#endif
