#include "rational.hpp"

#include <cctype>
#include <cstdlib>

namespace stepup {

namespace {

std::int64_t parse_digits(std::string_view s, const char* what) {
    if (s.empty()) throw std::invalid_argument(std::string("rational: missing ") + what);
    std::int64_t v = 0;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument(std::string("rational: bad character in ") + what);
        if (v > (INT64_MAX - 9) / 10) throw std::invalid_argument("rational: value too large");
        v = v * 10 + (c - '0');
    }
    return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw std::invalid_argument("rational: empty string");

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        const std::int64_t n = parse_digits(text.substr(0, slash), "numerator");
        const std::int64_t d = parse_digits(text.substr(slash + 1), "denominator");
        if (d == 0) throw std::invalid_argument("rational: zero denominator");
        return Rational(n, d);
    }

    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        const std::string_view whole = text.substr(0, dot);
        const std::string_view frac = text.substr(dot + 1);
        if (whole.empty() && frac.empty()) throw std::invalid_argument("rational: bad decimal");
        if (frac.size() > 15) throw std::invalid_argument("rational: too many decimal digits");
        const std::int64_t w = whole.empty() ? 0 : parse_digits(whole, "integer part");
        const std::int64_t f = frac.empty() ? 0 : parse_digits(frac, "fraction part");
        std::int64_t scale = 1;
        for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
        if (w > (INT64_MAX - f) / scale) throw std::invalid_argument("rational: value too large");
        return Rational(w * scale + f, scale);
    }

    return Rational(parse_digits(text, "value"), 1);
}

}  // namespace stepup
