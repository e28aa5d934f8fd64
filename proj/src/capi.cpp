#include "stepup.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "bounds.hpp"
#include "normalization.hpp"
#include "procedures.hpp"
#include "rational.hpp"
#include "sequences.hpp"
#include "simulation.hpp"

namespace {

thread_local std::string g_last_error;

stepup_status fail(stepup_status code, const char* msg) {
    g_last_error = msg;
    return code;
}

// Runs fn, translating the core's exception idiom into status codes.
template <typename Fn>
stepup_status guarded(Fn&& fn) {
    try {
        fn();
        return STEPUP_OK;
    } catch (const std::domain_error& e) {
        return fail(STEPUP_EDOM, e.what());
    } catch (const std::range_error& e) {
        return fail(STEPUP_ERANGE, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(STEPUP_EINVAL, e.what());
    } catch (const std::bad_alloc&) {
        return fail(STEPUP_ENOMEM, "out of memory");
    } catch (const std::exception& e) {
        return fail(STEPUP_EINVAL, e.what());
    }
}

stepup::Rational parse_gamma(const char* text) {
    if (text == nullptr) throw std::invalid_argument("gamma string is null");
    return stepup::parse_rational(text);
}

}  // namespace

struct stepup_seq {
    stepup::CriticalSequence seq;
};

struct stepup_report {
    stepup::NormalizationReport rep;
};

struct stepup_result {
    stepup::StepResult res;
};

struct stepup_model {
    std::unique_ptr<stepup::JointModel> model;
};

namespace {

stepup_status make_seq(stepup_seq** out, stepup::CriticalSequence seq) {
    *out = new stepup_seq{std::move(seq)};
    return STEPUP_OK;
}

stepup_status make_model(stepup_model** out, std::unique_ptr<stepup::JointModel> m) {
    *out = new stepup_model{std::move(m)};
    return STEPUP_OK;
}

}  // namespace

extern "C" {

const char* stepup_last_error(void) { return g_last_error.c_str(); }

const char* stepup_version(void) { return "1.0.0"; }

/* ---- sequences ---- */

stepup_status stepup_seq_kfwer(int64_t k, int64_t s, stepup_seq** out) {
    if (out == nullptr) return fail(STEPUP_EINVAL, "out is null");
    return guarded([&] { make_seq(out, stepup::kfwer_template(k, s)); });
}

stepup_status stepup_seq_linear(int64_t s, stepup_seq** out) {
    if (out == nullptr) return fail(STEPUP_EINVAL, "out is null");
    return guarded([&] { make_seq(out, stepup::linear_template(s)); });
}

stepup_status stepup_seq_fdp(const char* gamma, int64_t s, stepup_seq** out) {
    if (out == nullptr) return fail(STEPUP_EINVAL, "out is null");
    return guarded([&] { make_seq(out, stepup::fdp_template(parse_gamma(gamma), s)); });
}

stepup_status stepup_seq_from_values(const double* values, size_t n, stepup_seq** out) {
    if (out == nullptr || values == nullptr) return fail(STEPUP_EINVAL, "null argument");
    return guarded([&] {
        make_seq(out, stepup::CriticalSequence(std::vector<double>(values, values + n)));
    });
}

stepup_status stepup_seq_holm(int64_t s, double alpha, stepup_seq** out) {
    if (out == nullptr) return fail(STEPUP_EINVAL, "out is null");
    return guarded([&] { make_seq(out, stepup::holm_values(s, alpha)); });
}

stepup_status stepup_seq_hochberg(int64_t s, double alpha, stepup_seq** out) {
    if (out == nullptr) return fail(STEPUP_EINVAL, "out is null");
    return guarded([&] { make_seq(out, stepup::hochberg_values(s, alpha)); });
}

stepup_status stepup_seq_by_fdr(int64_t s, double q, stepup_seq** out) {
    if (out == nullptr) return fail(STEPUP_EINVAL, "out is null");
    return guarded([&] { make_seq(out, stepup::by_fdr_values(s, q)); });
}

stepup_status stepup_seq_by_fdp(int64_t s, const char* gamma, double alpha, stepup_seq** out) {
    if (out == nullptr) return fail(STEPUP_EINVAL, "out is null");
    return guarded(
        [&] { make_seq(out, stepup::by_derived_fdp_values(s, parse_gamma(gamma), alpha)); });
}

stepup_status stepup_seq_fdr_median(int64_t s, const char* gamma, stepup_seq** out) {
    if (out == nullptr) return fail(STEPUP_EINVAL, "out is null");
    return guarded([&] { make_seq(out, stepup::fdr_median_values(s, parse_gamma(gamma))); });
}

stepup_status stepup_seq_kfwer_control(int64_t k, int64_t s, double alpha, const stepup_seq* base,
                                       stepup_seq** out) {
    if (out == nullptr || base == nullptr) return fail(STEPUP_EINVAL, "null argument");
    return guarded([&] { make_seq(out, stepup::kfwer_stepup_values(k, s, alpha, base->seq)); });
}

stepup_status stepup_seq_fdp_control(const char* gamma, int64_t s, double alpha,
                                     const stepup_seq* base, stepup_seq** out) {
    if (out == nullptr || base == nullptr) return fail(STEPUP_EINVAL, "null argument");
    return guarded([&] {
        make_seq(out, stepup::fdp_stepup_values(parse_gamma(gamma), s, alpha, base->seq));
    });
}

stepup_status stepup_seq_scale(const stepup_seq* seq, double factor, stepup_seq** out) {
    if (out == nullptr || seq == nullptr) return fail(STEPUP_EINVAL, "null argument");
    return guarded([&] { make_seq(out, seq->seq.scaled(factor)); });
}

size_t stepup_seq_len(const stepup_seq* seq) {
    return seq == nullptr ? 0 : static_cast<size_t>(seq->seq.size());
}

stepup_status stepup_seq_values(const stepup_seq* seq, double* values, size_t n) {
    if (seq == nullptr || values == nullptr) return fail(STEPUP_EINVAL, "null argument");
    if (n != static_cast<size_t>(seq->seq.size()))
        return fail(STEPUP_EINVAL, "buffer length does not match sequence length");
    std::memcpy(values, seq->seq.values().data(), n * sizeof(double));
    return STEPUP_OK;
}

void stepup_seq_free(stepup_seq* seq) { delete seq; }

/* ---- normalizing constants ---- */

stepup_status stepup_d1(int64_t k, int64_t s, const stepup_seq* seq, stepup_report** out) {
    if (out == nullptr || seq == nullptr) return fail(STEPUP_EINVAL, "null argument");
    return guarded([&] { *out = new stepup_report{stepup::d1(k, s, seq->seq)}; });
}

stepup_status stepup_d2(const char* gamma, int64_t s, const stepup_seq* seq,
                        stepup_report** out) {
    if (out == nullptr || seq == nullptr) return fail(STEPUP_EINVAL, "null argument");
    return guarded([&] { *out = new stepup_report{stepup::d2(parse_gamma(gamma), s, seq->seq)}; });
}

double stepup_report_d(const stepup_report* rep) { return rep == nullptr ? 0.0 : rep->rep.d_value; }

int64_t stepup_report_argmax(const stepup_report* rep) {
    return rep == nullptr ? 0 : rep->rep.argmax_card;
}

size_t stepup_report_len(const stepup_report* rep) {
    return rep == nullptr ? 0 : rep->rep.s_values.size();
}

stepup_status stepup_report_entry(const stepup_report* rep, size_t i, int64_t* card,
                                  double* s_value) {
    if (rep == nullptr || card == nullptr || s_value == nullptr)
        return fail(STEPUP_EINVAL, "null argument");
    if (i >= rep->rep.s_values.size()) return fail(STEPUP_EINVAL, "scan index out of range");
    *card = rep->rep.first_card + static_cast<int64_t>(i);
    *s_value = rep->rep.s_values[i];
    return STEPUP_OK;
}

void stepup_report_free(stepup_report* rep) { delete rep; }

stepup_status stepup_s1(int64_t k, int64_t s, int64_t card, const stepup_seq* seq, double* out) {
    if (out == nullptr || seq == nullptr) return fail(STEPUP_EINVAL, "null argument");
    return guarded([&] { *out = stepup::s1(k, s, card, seq->seq); });
}

stepup_status stepup_s2(const char* gamma, int64_t s, int64_t card, const stepup_seq* seq,
                        double* out) {
    if (out == nullptr || seq == nullptr) return fail(STEPUP_EINVAL, "null argument");
    return guarded([&] { *out = stepup::s2(parse_gamma(gamma), s, card, seq->seq); });
}

stepup_status stepup_harmonic(int64_t j, double* out) {
    if (out == nullptr) return fail(STEPUP_EINVAL, "out is null");
    return guarded([&] { *out = stepup::harmonic(j); });
}

stepup_status stepup_weak_control_factor(int64_t k, int64_t s, double* out) {
    if (out == nullptr) return fail(STEPUP_EINVAL, "out is null");
    return guarded([&] { *out = stepup::weak_control_factor(k, s); });
}

stepup_status stepup_strong_control_factor(int64_t k, int64_t s, int64_t card, double* out) {
    if (out == nullptr) return fail(STEPUP_EINVAL, "out is null");
    return guarded([&] { *out = stepup::strong_control_factor_exact(k, s, card); });
}

stepup_status stepup_fdp_fdr_bounds(double e, double gamma, double* lower, double* upper) {
    if (lower == nullptr || upper == nullptr) return fail(STEPUP_EINVAL, "null argument");
    return guarded([&] {
        const auto [lo, hi] = stepup::fdp_fdr_conversion(e, gamma);
        *lower = lo;
        *upper = hi;
    });
}

/* ---- applying procedures ---- */

stepup_status stepup_apply(const double* p, size_t n, const stepup_seq* crit, int step_down,
                           stepup_result** out) {
    if (out == nullptr || p == nullptr || crit == nullptr)
        return fail(STEPUP_EINVAL, "null argument");
    return guarded([&] {
        const std::span<const double> view(p, n);
        *out = new stepup_result{step_down ? stepup::step_down(view, crit->seq)
                                           : stepup::step_up(view, crit->seq)};
    });
}

int64_t stepup_result_num_rejected(const stepup_result* res) {
    return res == nullptr ? 0 : res->res.num_rejected;
}

stepup_status stepup_result_decisions(const stepup_result* res, int* decisions, size_t n) {
    if (res == nullptr || decisions == nullptr) return fail(STEPUP_EINVAL, "null argument");
    if (n != res->res.rejected.size())
        return fail(STEPUP_EINVAL, "buffer length does not match result length");
    for (size_t i = 0; i < n; ++i) decisions[i] = res->res.rejected[i] ? 1 : 0;
    return STEPUP_OK;
}

void stepup_result_free(stepup_result* res) { delete res; }

/* ---- simulation ---- */

stepup_status stepup_model_independent_uniform(int64_t s, int64_t num_true,
                                               stepup_false_policy policy, double fixed_value,
                                               stepup_model** out) {
    if (out == nullptr) return fail(STEPUP_EINVAL, "out is null");
    return guarded([&] {
        stepup::FalsePolicy fp;
        switch (policy) {
            case STEPUP_FALSE_ZERO: fp = stepup::FalsePolicy::Zero; break;
            case STEPUP_FALSE_FIXED: fp = stepup::FalsePolicy::FixedValue; break;
            case STEPUP_FALSE_UNIFORM: fp = stepup::FalsePolicy::IndependentUniform; break;
            default: throw std::invalid_argument("unknown false-p policy");
        }
        make_model(out,
                   std::make_unique<stepup::IndependentUniformModel>(s, num_true, fp, fixed_value));
    });
}

stepup_status stepup_model_lemma32(const double* betas, size_t m, int64_t t, stepup_model** out) {
    if (out == nullptr || (betas == nullptr && m > 0)) return fail(STEPUP_EINVAL, "null argument");
    return guarded([&] {
        stepup::BetaSequence bs(std::vector<double>(betas, betas + m), t);
        make_model(out, std::make_unique<stepup::Lemma32Model>(std::move(bs)));
    });
}

stepup_status stepup_model_kfwer_adversary(int64_t k, int64_t s, const stepup_seq* crit,
                                           stepup_model** out) {
    if (out == nullptr || crit == nullptr) return fail(STEPUP_EINVAL, "null argument");
    return guarded(
        [&] { make_model(out, std::make_unique<stepup::KfwerAdversaryModel>(k, s, crit->seq)); });
}

stepup_status stepup_model_fdp_adversary(const char* gamma, int64_t s, const stepup_seq* crit,
                                         stepup_model** out) {
    if (out == nullptr || crit == nullptr) return fail(STEPUP_EINVAL, "null argument");
    return guarded([&] {
        make_model(out,
                   std::make_unique<stepup::FdpAdversaryModel>(parse_gamma(gamma), s, crit->seq));
    });
}

stepup_status stepup_model_by_counterexample(int64_t s, stepup_model** out) {
    if (out == nullptr) return fail(STEPUP_EINVAL, "out is null");
    return guarded([&] { make_model(out, std::make_unique<stepup::ByCounterexampleModel>(s)); });
}

int64_t stepup_model_size(const stepup_model* model) {
    return model == nullptr ? 0 : model->model->size();
}

int64_t stepup_model_num_true(const stepup_model* model) {
    return model == nullptr ? 0 : model->model->num_true();
}

void stepup_model_free(stepup_model* model) { delete model; }

stepup_status stepup_by_counterexample_bound(int64_t s, double alpha, double* out) {
    if (out == nullptr) return fail(STEPUP_EINVAL, "out is null");
    return guarded([&] { *out = stepup::by_counterexample_fwer_bound(s, alpha); });
}

stepup_status stepup_simulate(const stepup_model* model, const stepup_seq* crit, int step_down,
                              stepup_metric_kind metric, int64_t metric_k,
                              const char* metric_gamma, int64_t reps, uint64_t seed,
                              int num_threads, stepup_estimate* out) {
    if (out == nullptr || model == nullptr || crit == nullptr)
        return fail(STEPUP_EINVAL, "null argument");
    return guarded([&] {
        stepup::ErrorMetric em;
        switch (metric) {
            case STEPUP_METRIC_KFWER:
                em.kind = stepup::MetricKind::KFwer;
                em.k = metric_k;
                break;
            case STEPUP_METRIC_FDP_TAIL:
                em.kind = stepup::MetricKind::FdpTail;
                em.gamma = parse_gamma(metric_gamma);
                break;
            case STEPUP_METRIC_FDR:
                em.kind = stepup::MetricKind::Fdr;
                break;
            default:
                throw std::invalid_argument("unknown metric kind");
        }
        stepup::Procedure proc{step_down ? stepup::Engine::StepDown : stepup::Engine::StepUp,
                               crit->seq};
        const auto est =
            stepup::estimate_error_rate(*model->model, proc, em, reps, seed, num_threads);
        out->estimate = est.estimate;
        out->std_error = est.std_error;
        out->replications = est.replications;
        out->seed = est.seed;
    });
}

}  // extern "C"
