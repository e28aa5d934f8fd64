#ifndef STEPUP_RATIONAL_HPP
#define STEPUP_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stepup {

// Exact nonnegative rational, stored in lowest terms with positive
// denominator. Carries proportions such as gamma so that floor
// computations never hit floating-point boundaries (e.g. 0.1 * 10).
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;

    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den <= 0) throw std::invalid_argument("rational: denominator must be positive");
        if (num < 0) throw std::invalid_argument("rational: negative value not supported");
        const std::int64_t g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    bool is_zero() const { return num == 0; }

    // floor(this * j) in exact integer arithmetic.
    std::int64_t floor_mul(std::int64_t j) const {
        const __int128 p = static_cast<__int128>(num) * j;
        return static_cast<std::int64_t>(p / den);
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }

    // a < b as exact fractions.
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

// Parses "p/q", an integer, or a decimal string ("0.05" -> 1/20) exactly.
Rational parse_rational(std::string_view text);

}  // namespace stepup

#endif
