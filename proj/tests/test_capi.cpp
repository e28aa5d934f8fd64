#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "stepup.h"

TEST_CASE("version and error reporting") {
    CHECK(std::string(stepup_version()) == "1.0.0");

    stepup_seq* seq = nullptr;
    CHECK(stepup_seq_kfwer(5, 4, &seq) == STEPUP_EDOM);
    CHECK(std::strlen(stepup_last_error()) > 0);
    CHECK(stepup_seq_kfwer(1, 4, nullptr) == STEPUP_EINVAL);
}

TEST_CASE("sequence construction and accessors") {
    stepup_seq* seq = nullptr;
    REQUIRE(stepup_seq_kfwer(1, 4, &seq) == STEPUP_OK);
    REQUIRE(stepup_seq_len(seq) == 4);
    std::vector<double> v(4);
    REQUIRE(stepup_seq_values(seq, v.data(), 4) == STEPUP_OK);
    CHECK(v[0] == 0.25);
    CHECK(v[3] == 1.0);
    CHECK(stepup_seq_values(seq, v.data(), 3) == STEPUP_EINVAL);

    stepup_seq* scaled = nullptr;
    REQUIRE(stepup_seq_scale(seq, 0.5, &scaled) == STEPUP_OK);
    REQUIRE(stepup_seq_values(scaled, v.data(), 4) == STEPUP_OK);
    CHECK(v[3] == 0.5);
    CHECK(stepup_seq_scale(seq, 3.0, &scaled) == STEPUP_EINVAL);

    stepup_seq* fdp = nullptr;
    REQUIRE(stepup_seq_fdp("1/10", 20, &fdp) == STEPUP_OK);
    std::vector<double> f(20);
    REQUIRE(stepup_seq_values(fdp, f.data(), 20) == STEPUP_OK);
    CHECK(f[9] == doctest::Approx(2.0 / 12.0).epsilon(1e-15));
    stepup_seq* bad = nullptr;
    CHECK(stepup_seq_fdp("nonsense", 20, &bad) == STEPUP_EINVAL);
    CHECK(stepup_seq_fdp("1", 20, &bad) == STEPUP_EDOM);
    CHECK(stepup_seq_fdp(nullptr, 20, &bad) == STEPUP_EINVAL);

    const double raw[] = {0.2, 0.1};
    CHECK(stepup_seq_from_values(raw, 2, &bad) == STEPUP_EINVAL);

    stepup_seq_free(seq);
    stepup_seq_free(scaled);
    stepup_seq_free(fdp);
    stepup_seq_free(nullptr);  // harmless
}

TEST_CASE("normalizing constants through the C surface") {
    stepup_seq* tmpl = nullptr;
    REQUIRE(stepup_seq_kfwer(1, 10, &tmpl) == STEPUP_OK);
    stepup_report* rep = nullptr;
    REQUIRE(stepup_d1(1, 10, tmpl, &rep) == STEPUP_OK);
    CHECK(stepup_report_d(rep) == doctest::Approx(2.1104497354497354).epsilon(1e-12));
    CHECK(stepup_report_len(rep) == 10);

    int64_t card = 0;
    double sv = 0.0;
    REQUIRE(stepup_report_entry(rep, 0, &card, &sv) == STEPUP_OK);
    CHECK(card == 1);
    CHECK(stepup_report_entry(rep, 10, &card, &sv) == STEPUP_EINVAL);

    double direct = 0.0;
    REQUIRE(stepup_s1(1, 10, stepup_report_argmax(rep), tmpl, &direct) == STEPUP_OK);
    CHECK(direct == doctest::Approx(stepup_report_d(rep)).epsilon(1e-14));
    stepup_report_free(rep);

    stepup_seq* ftmpl = nullptr;
    REQUIRE(stepup_seq_fdp("1/10", 100, &ftmpl) == STEPUP_OK);
    stepup_report* rep2 = nullptr;
    REQUIRE(stepup_d2("1/10", 100, ftmpl, &rep2) == STEPUP_OK);
    CHECK(stepup_report_d(rep2) == doctest::Approx(3.366061274557064).epsilon(1e-12));
    CHECK(stepup_report_argmax(rep2) == 65);
    stepup_report_free(rep2);

    double h = 0.0;
    REQUIRE(stepup_harmonic(10, &h) == STEPUP_OK);
    CHECK(h == doctest::Approx(2.9289682539682538).epsilon(1e-14));
    CHECK(stepup_harmonic(0, &h) == STEPUP_EDOM);

    double w = 0.0;
    REQUIRE(stepup_weak_control_factor(1, 2, &w) == STEPUP_OK);
    CHECK(w == doctest::Approx(1.5).epsilon(1e-15));
    double sf = 0.0;
    REQUIRE(stepup_strong_control_factor(1, 10, 5, &sf) == STEPUP_OK);
    double s1v = 0.0;
    REQUIRE(stepup_s1(1, 10, 5, tmpl, &s1v) == STEPUP_OK);
    CHECK(sf == doctest::Approx(s1v).epsilon(1e-13));

    double lo = 0.0, hi = 0.0;
    REQUIRE(stepup_fdp_fdr_bounds(0.05, 0.1, &lo, &hi) == STEPUP_OK);
    CHECK(lo == 0.0);
    CHECK(hi == doctest::Approx(0.5).epsilon(1e-15));

    stepup_seq_free(tmpl);
    stepup_seq_free(ftmpl);
}

TEST_CASE("control values and procedure application") {
    stepup_seq* tmpl = nullptr;
    REQUIRE(stepup_seq_kfwer(1, 4, &tmpl) == STEPUP_OK);
    stepup_seq* crit = nullptr;
    REQUIRE(stepup_seq_kfwer_control(1, 4, 0.05, tmpl, &crit) == STEPUP_OK);

    const double p[] = {0.9, 0.0001, 0.5, 0.001};
    stepup_result* res = nullptr;
    REQUIRE(stepup_apply(p, 4, crit, 0, &res) == STEPUP_OK);
    CHECK(stepup_result_num_rejected(res) == 2);
    int dec[4] = {0, 0, 0, 0};
    REQUIRE(stepup_result_decisions(res, dec, 4) == STEPUP_OK);
    CHECK(dec[0] == 0);
    CHECK(dec[1] == 1);
    CHECK(dec[2] == 0);
    CHECK(dec[3] == 1);
    stepup_result_free(res);

    const double bad_p[] = {0.5, 1.5, 0.1, 0.2};
    CHECK(stepup_apply(bad_p, 4, crit, 0, &res) == STEPUP_EINVAL);
    CHECK(stepup_apply(p, 3, crit, 0, &res) == STEPUP_EDOM);

    stepup_seq* holm = nullptr;
    REQUIRE(stepup_seq_holm(3, 0.05, &holm) == STEPUP_OK);
    std::vector<double> hv(3);
    REQUIRE(stepup_seq_values(holm, hv.data(), 3) == STEPUP_OK);
    CHECK(hv[0] == doctest::Approx(0.05 / 3).epsilon(1e-15));

    stepup_seq* byv = nullptr;
    REQUIRE(stepup_seq_by_fdr(10, 0.05, &byv) == STEPUP_OK);
    stepup_seq* byfdp = nullptr;
    REQUIRE(stepup_seq_by_fdp(10, "1/20", 0.5, &byfdp) == STEPUP_OK);
    stepup_seq* med = nullptr;
    REQUIRE(stepup_seq_fdr_median(10, "1/10", &med) == STEPUP_OK);

    stepup_seq_free(tmpl);
    stepup_seq_free(crit);
    stepup_seq_free(holm);
    stepup_seq_free(byv);
    stepup_seq_free(byfdp);
    stepup_seq_free(med);
}

TEST_CASE("simulation through the C surface") {
    stepup_seq* tmpl = nullptr;
    REQUIRE(stepup_seq_kfwer(1, 10, &tmpl) == STEPUP_OK);
    stepup_seq* crit = nullptr;
    REQUIRE(stepup_seq_kfwer_control(1, 10, 0.1, tmpl, &crit) == STEPUP_OK);

    stepup_model* model = nullptr;
    REQUIRE(stepup_model_kfwer_adversary(1, 10, crit, &model) == STEPUP_OK);
    CHECK(stepup_model_size(model) == 10);
    CHECK(stepup_model_num_true(model) >= 1);

    stepup_estimate est{};
    REQUIRE(stepup_simulate(model, crit, 0, STEPUP_METRIC_KFWER, 1, nullptr, 20000, 9, 2,
                            &est) == STEPUP_OK);
    CHECK(std::fabs(est.estimate - 0.1) <= 4.0 * est.std_error);
    CHECK(est.replications == 20000);
    CHECK(est.seed == 9);

    stepup_estimate est2{};
    REQUIRE(stepup_simulate(model, crit, 0, STEPUP_METRIC_KFWER, 1, nullptr, 20000, 9, 1,
                            &est2) == STEPUP_OK);
    CHECK(est.estimate == est2.estimate);  // worker count does not matter

    CHECK(stepup_simulate(model, crit, 0, STEPUP_METRIC_KFWER, 1, nullptr, 0, 9, 1, &est) ==
          STEPUP_EDOM);
    CHECK(stepup_simulate(model, crit, 0, STEPUP_METRIC_FDP_TAIL, 1, "bogus", 10, 9, 1, &est) ==
          STEPUP_EINVAL);
    stepup_model_free(model);

    // infeasible sharp construction: bound above 1
    const double betas[] = {0.5};
    stepup_model* bad = nullptr;
    CHECK(stepup_model_lemma32(betas, 1, 3, &bad) == STEPUP_ERANGE);

    const double small[] = {0.02};
    stepup_model* lemma = nullptr;
    REQUIRE(stepup_model_lemma32(small, 1, 10, &lemma) == STEPUP_OK);
    CHECK(stepup_model_size(lemma) == 10);
    stepup_model_free(lemma);

    stepup_model* indep = nullptr;
    REQUIRE(stepup_model_independent_uniform(10, 5, STEPUP_FALSE_UNIFORM, 0.0, &indep) ==
            STEPUP_OK);
    REQUIRE(stepup_simulate(indep, crit, 0, STEPUP_METRIC_FDP_TAIL, 1, "1/10", 5000, 11, 0,
                            &est) == STEPUP_OK);
    CHECK(est.estimate <= 0.1 + 3.0 * est.std_error);
    stepup_model_free(indep);

    stepup_model* bymodel = nullptr;
    CHECK(stepup_model_by_counterexample(11, &bymodel) == STEPUP_EDOM);
    REQUIRE(stepup_model_by_counterexample(10, &bymodel) == STEPUP_OK);
    CHECK(stepup_model_num_true(bymodel) == 6);
    stepup_model_free(bymodel);

    double bound = 0.0;
    REQUIRE(stepup_by_counterexample_bound(1000, 0.05, &bound) == STEPUP_OK);
    CHECK(bound == doctest::Approx(0.812887).epsilon(1e-5));

    stepup_model* fdpmodel = nullptr;
    stepup_seq* ftmpl = nullptr;
    REQUIRE(stepup_seq_fdp("1/10", 10, &ftmpl) == STEPUP_OK);
    stepup_seq* fcrit = nullptr;
    REQUIRE(stepup_seq_fdp_control("1/10", 10, 0.1, ftmpl, &fcrit) == STEPUP_OK);
    REQUIRE(stepup_model_fdp_adversary("1/10", 10, fcrit, &fdpmodel) == STEPUP_OK);
    REQUIRE(stepup_simulate(fdpmodel, fcrit, 0, STEPUP_METRIC_FDP_TAIL, 1, "1/10", 20000, 13, 0,
                            &est) == STEPUP_OK);
    CHECK(std::fabs(est.estimate - 0.1) <= 4.0 * est.std_error);
    stepup_model_free(fdpmodel);
    stepup_seq_free(ftmpl);
    stepup_seq_free(fcrit);

    stepup_seq_free(tmpl);
    stepup_seq_free(crit);
}
