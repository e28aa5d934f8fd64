#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "normalization.hpp"
#include "procedures.hpp"
#include "rng.hpp"
#include "sequences.hpp"

using namespace stepup;

namespace {

// Literal scan oracles: stepup looks for the smallest r with every ordered
// p-value above rank r exceeding its threshold; stepdown for the largest r
// whose whole prefix meets its thresholds.
std::int64_t stepup_oracle(std::vector<double> p, const CriticalSequence& crit) {
    std::sort(p.begin(), p.end());
    const auto s = static_cast<std::int64_t>(p.size());
    if (p[static_cast<size_t>(s - 1)] <= crit.at(s)) return s;
    for (std::int64_t r = 0; r < s; ++r) {
        bool all_above = true;
        for (std::int64_t j = r + 1; j <= s; ++j)
            if (!(p[static_cast<size_t>(j - 1)] > crit.at(j))) {
                all_above = false;
                break;
            }
        if (all_above) return r;
    }
    return 0;
}

std::int64_t stepdown_oracle(std::vector<double> p, const CriticalSequence& crit) {
    std::sort(p.begin(), p.end());
    const auto s = static_cast<std::int64_t>(p.size());
    if (p[0] > crit.at(1)) return 0;
    std::int64_t best = 0;
    for (std::int64_t r = 1; r <= s; ++r) {
        bool prefix_ok = true;
        for (std::int64_t j = 1; j <= r; ++j)
            if (!(p[static_cast<size_t>(j - 1)] <= crit.at(j))) {
                prefix_ok = false;
                break;
            }
        if (prefix_ok) best = r;
    }
    return best;
}

std::vector<double> random_pvalues(Rng& rng, std::int64_t s, bool with_ties) {
    std::vector<double> p(static_cast<size_t>(s));
    for (auto& v : p) {
        if (with_ties) {
            // coarse grid forces duplicates
            v = static_cast<double>(rng.next_below(12)) / 11.0;
        } else {
            v = rng.next_double();
        }
    }
    return p;
}

CriticalSequence random_crit(Rng& rng, std::int64_t s) {
    std::vector<double> c(static_cast<size_t>(s));
    double acc = 0.0;
    for (auto& v : c) {
        acc += 1e-6 + rng.next_double();
        v = acc;
    }
    const double top = c.back() / (0.05 + 0.95 * rng.next_double());
    for (auto& v : c) v /= top;
    return CriticalSequence(std::move(c));
}

}  // namespace

TEST_CASE("stepup engine on the worked examples") {
    {
        const StepResult r = step_up(std::vector<double>{0.01, 0.04, 0.03},
                                     CriticalSequence({0.02, 0.03, 0.05}));
        CHECK(r.num_rejected == 3);
    }
    {
        const StepResult r = step_up(std::vector<double>{1.0, 1.0, 1.0},
                                     CriticalSequence({0.1, 0.2, 0.9}));
        CHECK(r.num_rejected == 0);
    }
    {
        const StepResult r = step_up(std::vector<double>{0.5, 0.021, 0.9, 0.6},
                                     CriticalSequence({0.01, 0.02, 0.03, 0.04}));
        CHECK(r.num_rejected == 0);
    }
    CHECK_THROWS_AS(step_up(std::vector<double>{0.5}, CriticalSequence({0.1, 0.2})),
                    std::domain_error);
    CHECK_THROWS_AS(step_up(std::vector<double>{1.5, 0.2}, CriticalSequence({0.1, 0.2})),
                    std::invalid_argument);
    CHECK_THROWS_AS(step_up(std::vector<double>{-0.1, 0.2}, CriticalSequence({0.1, 0.2})),
                    std::invalid_argument);
}

TEST_CASE("stepdown engine on the worked examples") {
    {
        const StepResult r = step_down(std::vector<double>{0.01, 0.04, 0.03},
                                       CriticalSequence({0.02, 0.03, 0.05}));
        CHECK(r.num_rejected == 3);
    }
    {
        const StepResult r = step_down(std::vector<double>{0.05, 0.5, 0.6},
                                       CriticalSequence({0.01, 0.2, 0.3}));
        CHECK(r.num_rejected == 0);
    }
}

TEST_CASE("engines agree with the literal scan oracles") {
    Rng rng(1234, 0);
    int checked = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const auto s = static_cast<std::int64_t>(1 + rng.next_below(50));
        const auto crit = random_crit(rng, s);
        const auto p = random_pvalues(rng, s, trial % 3 == 0);
        const auto up = step_up(p, crit);
        const auto down = step_down(p, crit);
        REQUIRE(up.num_rejected == stepup_oracle(p, crit));
        REQUIRE(down.num_rejected == stepdown_oracle(p, crit));

        // stepdown rejections are a subset of stepup rejections
        REQUIRE(down.num_rejected <= up.num_rejected);
        for (size_t i = 0; i < p.size(); ++i)
            if (down.rejected[i]) REQUIRE(up.rejected[i]);
        ++checked;
    }
    CHECK(checked == 10000);
}

TEST_CASE("permutation invariance") {
    Rng rng(99, 1);
    for (int trial = 0; trial < 300; ++trial) {
        const auto s = static_cast<std::int64_t>(2 + rng.next_below(20));
        const auto crit = random_crit(rng, s);
        auto p = random_pvalues(rng, s, trial % 2 == 0);
        PValueVector pv;
        for (std::int64_t i = 0; i < s; ++i) {
            pv.ids.push_back("h" + std::to_string(i));
            pv.p.push_back(p[static_cast<size_t>(i)]);
        }
        const auto base = apply_stepup(pv, crit);

        // shuffle
        PValueVector shuffled = pv;
        std::vector<std::uint32_t> scratch;
        const auto perm =
            sample_indices(rng, static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s),
                           scratch);
        for (std::int64_t i = 0; i < s; ++i) {
            shuffled.ids[static_cast<size_t>(i)] = pv.ids[perm[static_cast<size_t>(i)]];
            shuffled.p[static_cast<size_t>(i)] = pv.p[perm[static_cast<size_t>(i)]];
        }
        const auto after = apply_stepup(shuffled, crit);
        CHECK(after.num_rejected == base.num_rejected);
        CHECK(std::set<std::string>(after.rejected_ids.begin(), after.rejected_ids.end()) ==
              std::set<std::string>(base.rejected_ids.begin(), base.rejected_ids.end()));
    }
}

TEST_CASE("threshold monotonicity") {
    Rng rng(55, 2);
    for (int trial = 0; trial < 300; ++trial) {
        const auto s = static_cast<std::int64_t>(1 + rng.next_below(25));
        const auto crit = random_crit(rng, s);
        std::vector<double> larger(crit.values());
        for (auto& v : larger) v = std::min(1.0, v * 1.25);
        const CriticalSequence crit2(std::move(larger));
        const auto p = random_pvalues(rng, s, trial % 2 == 0);
        CHECK(step_up(p, crit2).num_rejected >= step_up(p, crit).num_rejected);
        CHECK(step_down(p, crit2).num_rejected >= step_down(p, crit).num_rejected);
    }
}

TEST_CASE("tied p-values cross thresholds together") {
    // rejection is by rank, so equal values are either all in or all out
    Rng rng(7, 3);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto s = static_cast<std::int64_t>(2 + rng.next_below(20));
        const auto crit = random_crit(rng, s);
        auto p = random_pvalues(rng, s, true);
        for (const auto& res : {step_up(p, crit), step_down(p, crit)}) {
            const auto r = res.num_rejected;
            if (r == 0 || r == s) continue;
            std::vector<double> sorted(p);
            std::sort(sorted.begin(), sorted.end());
            REQUIRE(sorted[static_cast<size_t>(r - 1)] < sorted[static_cast<size_t>(r)]);
        }
    }
    // and the rejected *set of values* is stable under tie reordering
    const CriticalSequence crit({0.01, 0.02, 0.03});
    const std::vector<double> a{0.02, 0.02, 0.9};
    const std::vector<double> b{0.02, 0.9, 0.02};
    CHECK(step_up(a, crit).num_rejected == 2);
    CHECK(step_up(b, crit).num_rejected == 2);
    CHECK(step_up(b, crit).rejected[0]);
    CHECK_FALSE(step_up(b, crit).rejected[1]);
    CHECK(step_up(b, crit).rejected[2]);
}

TEST_CASE("id-level outcomes") {
    PValueVector pv;
    pv.ids = {"d", "a", "c", "b"};
    pv.p = {0.9, 0.001, 0.5, 0.01};
    const auto out = apply_stepup(pv, CriticalSequence({0.01, 0.02, 0.03, 0.04}));
    CHECK(out.num_rejected == 2);
    CHECK(out.rejected_ids == std::vector<std::string>{"a", "b"});
    CHECK(out.sorted_pairs.size() == 4);
    CHECK(out.sorted_pairs[0].id == "a");
    CHECK(out.sorted_pairs[0].rejected);
    CHECK(out.sorted_pairs[3].id == "d");
    CHECK_FALSE(out.sorted_pairs[3].rejected);

    PValueVector dup;
    dup.ids = {"x", "x"};
    dup.p = {0.1, 0.2};
    CHECK_THROWS_AS(apply_stepup(dup, CriticalSequence({0.1, 0.2})), std::invalid_argument);
}

TEST_CASE("comparator constant sequences") {
    SUBCASE("holm / hochberg") {
        const auto h = holm_values(3, 0.05);
        CHECK(h.at(1) == doctest::Approx(0.05 / 3).epsilon(1e-15));
        CHECK(h.at(2) == doctest::Approx(0.05 / 2).epsilon(1e-15));
        CHECK(h.at(3) == doctest::Approx(0.05).epsilon(1e-15));
        CHECK(holm_values(1, 0.07).at(1) == doctest::Approx(0.07).epsilon(1e-15));
        const auto g = hochberg_values(3, 0.05);
        for (std::int64_t i = 1; i <= 3; ++i) CHECK(g.at(i) == h.at(i));
        CHECK_THROWS_AS(holm_values(3, 0.0), std::domain_error);
    }

    SUBCASE("Benjamini-Yekutieli") {
        CHECK(by_fdr_values(1, 0.05).at(1) == doctest::Approx(0.05).epsilon(1e-15));
        const auto v = by_fdr_values(10, 0.05);
        CHECK(v.at(1) == doctest::Approx(0.05 / (10.0 * harmonic(10))).epsilon(1e-14));
        for (std::int64_t i = 2; i <= 10; ++i)
            CHECK(v.at(i) == doctest::Approx(static_cast<double>(i) * v.at(1)).epsilon(1e-12));
    }

    SUBCASE("BY-derived FDP constants and the closed-form ratio") {
        const Rational g(1, 20);
        const std::int64_t s = 10;
        const auto lin = linear_template(s);
        const auto ours = fdp_stepup_values(g, s, 0.3, lin);
        const auto derived = by_derived_fdp_values(s, g, 0.3);
        const double expected =
            harmonic(s) / (g.to_double() * d2(g, s, lin).d_value);
        for (std::int64_t i = 1; i <= s; ++i)
            CHECK(ours.at(i) / derived.at(i) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(expected == doctest::Approx(14.96).epsilon(1e-3));
        CHECK(by_derived_fdp_values(1, Rational(1, 10), 0.5).at(1) ==
              doctest::Approx(0.05).epsilon(1e-14));
    }

    SUBCASE("FDR median comparators") {
        const Rational g(1, 10);
        const auto a = fdr_median_values(10, g);
        const auto b = by_fdr_values(10, 0.1);
        for (std::int64_t i = 1; i <= 10; ++i)
            CHECK(a.at(i) == doctest::Approx(b.at(i)).epsilon(1e-15));

        // ratio of median-FDP values to the FDR values, s = 10 and s = 5000
        {
            const std::int64_t s = 10;
            const auto med = fdp_stepup_values(g, s, 0.5, linear_template(s));
            const double ratio = med.at(1) / fdr_median_values(s, g).at(1);
            CHECK(ratio == doctest::Approx(3.74).epsilon(3e-3));
        }
        {
            const std::int64_t s = 5000;
            const auto med = fdp_stepup_values(g, s, 0.5, linear_template(s));
            const double ratio = med.at(1) / fdr_median_values(s, g).at(1);
            CHECK(ratio == doctest::Approx(1.01).epsilon(5e-3));
        }
    }
}

TEST_CASE("FDP accounting") {
    PValueVector pv;
    pv.ids = {"a", "b", "c", "d", "e"};
    pv.p = {0.001, 0.002, 0.003, 0.004, 0.9};
    const auto out = apply_stepup(pv, CriticalSequence({0.01, 0.02, 0.03, 0.04, 0.05}));
    REQUIRE(out.num_rejected == 4);

    CHECK(compute_fdp(out, TruthSet{"b", "d"}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(compute_fdp(out, TruthSet{}) == 0.0);
    CHECK(compute_fdp(out, TruthSet{"e"}) == 0.0);  // only false hypotheses rejected
    CHECK(count_false_rejections(out, TruthSet{"b"}) == 1);
    CHECK(count_false_rejections(out, TruthSet{"a", "b", "c", "d", "e"}) == 4);
    CHECK_THROWS_AS(compute_fdp(out, TruthSet{"zz"}), std::invalid_argument);

    // no rejections: FDP defined as 0
    const auto none = apply_stepup(pv, CriticalSequence({1e-9, 2e-9, 3e-9, 4e-9, 5e-9}));
    REQUIRE(none.num_rejected == 0);
    CHECK(compute_fdp(none, TruthSet{"a"}) == 0.0);
}

TEST_CASE("FDP / FDR conversion bracket") {
    const auto [lo, hi] = fdp_fdr_conversion(0.05, 0.1);
    CHECK(lo == 0.0);
    CHECK(hi == doctest::Approx(0.5).epsilon(1e-15));

    const auto [lo2, hi2] = fdp_fdr_conversion(0.1, 0.1);
    CHECK(lo2 == 0.0);
    CHECK(hi2 == 1.0);

    CHECK(fdp_to_fdr_level(0.1, 0.05) == doctest::Approx(0.145).epsilon(1e-15));

    CHECK_THROWS_AS(fdp_fdr_conversion(0.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(fdp_fdr_conversion(0.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(fdp_fdr_conversion(1.5, 0.5), std::domain_error);
}
