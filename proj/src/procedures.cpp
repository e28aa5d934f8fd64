#include "procedures.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace stepup {

namespace {

void require_pvalues(std::span<const double> p, const CriticalSequence& crit) {
    if (static_cast<std::int64_t>(p.size()) != crit.size())
        throw std::domain_error("p-value count does not match the critical sequence length");
    for (double v : p)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("p-values must lie in [0, 1]");
}

std::vector<std::uint32_t> sort_order(std::span<const double> p) {
    std::vector<std::uint32_t> order(p.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return p[a] < p[b]; });
    return order;
}

StepResult finish(std::span<const double> p, const std::vector<std::uint32_t>& order,
                  std::int64_t r) {
    StepResult res;
    res.num_rejected = r;
    res.rejected.assign(p.size(), 0);
    for (std::int64_t i = 0; i < r; ++i) res.rejected[order[static_cast<size_t>(i)]] = 1;
    return res;
}

const PValueVector& require_unique_ids(const PValueVector& pv) {
    std::unordered_set<std::string> seen;
    seen.reserve(pv.ids.size());
    for (const auto& id : pv.ids)
        if (!seen.insert(id).second)
            throw std::invalid_argument("duplicate hypothesis id: " + id);
    if (pv.ids.size() != pv.p.size())
        throw std::invalid_argument("id/p length mismatch");
    return pv;
}

RejectionOutcome to_outcome(const PValueVector& pv, const StepResult& res) {
    const auto order = sort_order(pv.p);
    RejectionOutcome out;
    out.num_rejected = res.num_rejected;
    out.sorted_pairs.reserve(order.size());
    for (auto idx : order) {
        const bool rej = res.rejected[idx] != 0;
        out.sorted_pairs.push_back({pv.ids[idx], pv.p[idx], rej});
        if (rej) out.rejected_ids.push_back(pv.ids[idx]);
    }
    return out;
}

// scale * i / (s * C_s) for i = 1..s.
CriticalSequence by_base(std::int64_t s, double scale) {
    require_size(s);
    const double cs = harmonic(s);
    std::vector<double> v(static_cast<size_t>(s));
    for (std::int64_t i = 1; i <= s; ++i)
        v[static_cast<size_t>(i - 1)] = scale * static_cast<double>(i) / (static_cast<double>(s) * cs);
    return CriticalSequence(std::move(v));
}

}  // namespace

StepResult step_up(std::span<const double> p, const CriticalSequence& crit) {
    require_pvalues(p, crit);
    const auto order = sort_order(p);
    const std::int64_t s = crit.size();
    std::int64_t r = 0;
    for (std::int64_t j = s; j >= 1; --j) {
        if (p[order[static_cast<size_t>(j - 1)]] <= crit.at(j)) {
            r = j;
            break;
        }
    }
    return finish(p, order, r);
}

StepResult step_down(std::span<const double> p, const CriticalSequence& crit) {
    require_pvalues(p, crit);
    const auto order = sort_order(p);
    const std::int64_t s = crit.size();
    std::int64_t r = 0;
    for (std::int64_t j = 1; j <= s; ++j) {
        if (p[order[static_cast<size_t>(j - 1)]] > crit.at(j)) break;
        r = j;
    }
    return finish(p, order, r);
}

RejectionOutcome apply_stepup(const PValueVector& pv, const CriticalSequence& crit) {
    require_unique_ids(pv);
    return to_outcome(pv, step_up(pv.p, crit));
}

RejectionOutcome apply_stepdown(const PValueVector& pv, const CriticalSequence& crit) {
    require_unique_ids(pv);
    return to_outcome(pv, step_down(pv.p, crit));
}

std::int64_t count_false_rejections(const RejectionOutcome& outcome, const TruthSet& truth) {
    std::unordered_set<std::string> known;
    known.reserve(outcome.sorted_pairs.size());
    for (const auto& d : outcome.sorted_pairs) known.insert(d.id);
    for (const auto& id : truth)
        if (!known.count(id)) throw std::invalid_argument("truth id not present in outcome: " + id);
    std::int64_t n = 0;
    for (const auto& id : outcome.rejected_ids) n += truth.count(id) ? 1 : 0;
    return n;
}

double compute_fdp(const RejectionOutcome& outcome, const TruthSet& truth) {
    const std::int64_t falses = count_false_rejections(outcome, truth);
    if (outcome.num_rejected == 0) return 0.0;
    return static_cast<double>(falses) / static_cast<double>(outcome.num_rejected);
}

CriticalSequence holm_values(std::int64_t s, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0, 1)");
    return kfwer_template(1, s).scaled(alpha);
}

CriticalSequence hochberg_values(std::int64_t s, double alpha) { return holm_values(s, alpha); }

CriticalSequence by_fdr_values(std::int64_t s, double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("q must lie in (0, 1)");
    return by_base(s, q);
}

CriticalSequence by_derived_fdp_values(std::int64_t s, const Rational& gamma, double alpha) {
    require_gamma(gamma);
    if (gamma.is_zero()) throw std::domain_error("gamma must lie in (0, 1)");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0, 1)");
    return by_base(s, gamma.to_double() * alpha);
}

CriticalSequence fdr_median_values(std::int64_t s, const Rational& gamma) {
    require_gamma(gamma);
    if (gamma.is_zero()) throw std::domain_error("gamma must lie in (0, 1)");
    return by_base(s, gamma.to_double());
}

std::pair<double, double> fdp_fdr_conversion(double e, double gamma) {
    if (!(e >= 0.0 && e <= 1.0)) throw std::domain_error("expected FDP must lie in [0, 1]");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::domain_error("gamma must lie in (0, 1)");
    const double lower = std::max(0.0, (e - gamma) / (1.0 - gamma));
    const double upper = std::min(1.0, e / gamma);
    return {lower, upper};
}

}  // namespace stepup
