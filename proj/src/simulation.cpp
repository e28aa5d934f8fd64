#include "simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "normalization.hpp"

namespace stepup {

Lemma32Sampler::Lemma32Sampler(BetaSequence bs) : bs_(std::move(bs)) {
    const auto b = lemma32_bound(bs_);
    if (b.exceeds_one)
        throw std::range_error("lemma32 sampler: bound exceeds 1, sharp construction infeasible");
    bound_ = b.value;
    cum_.reserve(bs_.betas.size());
    double prev = 0.0;
    double acc = 0.0;
    const double t = static_cast<double>(bs_.t);
    for (size_t i = 0; i < bs_.betas.size(); ++i) {
        acc += t * (bs_.betas[i] - prev) / static_cast<double>(i + 1);
        cum_.push_back(acc);
        prev = bs_.betas[i];
    }
}

std::int64_t Lemma32Sampler::sample(Rng& rng, std::vector<double>& p,
                                    std::vector<std::uint32_t>& scratch) const {
    p.assign(static_cast<size_t>(bs_.t), 1.0);
    const double u = rng.next_double();
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    if (it == cum_.end()) return 0;
    const auto seg = static_cast<std::int64_t>(it - cum_.begin()) + 1;
    const double lo = seg == 1 ? 0.0 : bs_.betas[static_cast<size_t>(seg - 2)];
    const double hi = bs_.betas[static_cast<size_t>(seg - 1)];
    const double value = rng.next_in(lo, hi);
    const auto chosen = sample_indices(rng, static_cast<std::uint32_t>(bs_.t),
                                       static_cast<std::uint32_t>(seg), scratch);
    for (auto idx : chosen) p[idx] = value;
    return seg;
}

std::vector<double> sample_lemma32_worst_case(const BetaSequence& bs, Rng& rng) {
    Lemma32Sampler sampler(bs);
    std::vector<double> p;
    std::vector<std::uint32_t> scratch;
    sampler.sample(rng, p, scratch);
    return p;
}

void JointModel::set_truth(std::int64_t s, std::int64_t num_true) {
    if (s < 1) throw std::domain_error("model: s must be >= 1");
    if (num_true < 0 || num_true > s) throw std::domain_error("model: need 0 <= num_true <= s");
    truth_.assign(static_cast<size_t>(s), 0);
    for (std::int64_t i = 0; i < num_true; ++i) truth_[static_cast<size_t>(i)] = 1;
    num_true_ = num_true;
}

IndependentUniformModel::IndependentUniformModel(std::int64_t s, std::int64_t num_true,
                                                 FalsePolicy policy, double fixed_value)
    : policy_(policy), fixed_value_(fixed_value) {
    set_truth(s, num_true);
    if (policy == FalsePolicy::FixedValue && !(fixed_value >= 0.0 && fixed_value <= 1.0))
        throw std::domain_error("model: fixed false p-value must lie in [0, 1]");
}

bool IndependentUniformModel::sample(Rng& rng, std::vector<double>& p,
                                     std::vector<std::uint32_t>&) const {
    p.resize(truth_.size());
    for (size_t i = 0; i < truth_.size(); ++i) {
        if (truth_[i]) {
            p[i] = rng.next_double();
        } else {
            switch (policy_) {
                case FalsePolicy::Zero: p[i] = 0.0; break;
                case FalsePolicy::FixedValue: p[i] = fixed_value_; break;
                case FalsePolicy::IndependentUniform: p[i] = rng.next_double(); break;
            }
        }
    }
    return false;
}

Lemma32Model::Lemma32Model(BetaSequence bs) : sampler_(std::move(bs)) {
    set_truth(sampler_.t(), sampler_.t());
}

bool Lemma32Model::sample(Rng& rng, std::vector<double>& p,
                          std::vector<std::uint32_t>& scratch) const {
    return sampler_.sample(rng, p, scratch) > 0;
}

namespace {

BetaSequence kfwer_adversary_betas(std::int64_t k, std::int64_t s, const CriticalSequence& crit) {
    const auto report = d1(k, s, crit);
    return kfwer_beta_sequence(k, s, report.argmax_card, crit);
}

}  // namespace

KfwerAdversaryModel::KfwerAdversaryModel(std::int64_t k, std::int64_t s,
                                         const CriticalSequence& crit)
    : sampler_(kfwer_adversary_betas(k, s, crit)) {
    set_truth(s, sampler_.t());
}

bool KfwerAdversaryModel::sample(Rng& rng, std::vector<double>& p,
                                 std::vector<std::uint32_t>& scratch) const {
    // True hypotheses occupy the front; their draw comes first so that the
    // gamma = 0 FDP adversary consumes randomness identically.
    std::vector<double>& trues = p;
    const std::int64_t seg = sampler_.sample(rng, trues, scratch);
    p.resize(truth_.size());
    std::fill(p.begin() + num_true_, p.end(), 0.0);
    return seg > 0;
}

FdpAdversaryModel::FdpAdversaryModel(const Rational& gamma, std::int64_t s,
                                     const CriticalSequence& crit)
    : gamma_(gamma),
      sampler_(BetaSequence({}, 1))  // replaced below
{
    const auto report = d2(gamma, s, crit);
    const std::int64_t card = report.argmax_card;
    auto envelope = fdp_beta_envelope(gamma, s, card, crit);
    sampler_ = Lemma32Sampler(std::move(envelope.bs));
    set_truth(s, card);

    tiers_.resize(static_cast<size_t>(card));
    const std::int64_t falses = s - card;
    for (std::int64_t ell = 1; ell <= card; ++ell) {
        Tier& tier = tiers_[static_cast<size_t>(ell - 1)];
        const std::int64_t j = envelope.source_rank[static_cast<size_t>(ell - 1)];
        if (j == 0) continue;  // carried-forward slot, zero segment width
        tier.zeros = j - ell;
        tier.parked = falses - tier.zeros;
        if (tier.parked > 0) {
            // Parked values occupy sorted ranks j+1 .. s-card+ell; they must
            // clear every threshold there, so sit strictly above the top one.
            const std::int64_t top_rank = s - card + ell;
            const double floor_value = crit.at(top_rank);
            double ceil_value = 1.0;
            for (std::int64_t r = top_rank + 1; r <= s; ++r) {
                if (crit.at(r) > floor_value) {
                    ceil_value = crit.at(r);
                    break;
                }
            }
            if (!(floor_value < ceil_value))
                throw std::range_error("fdp adversary: no admissible gap above rank thresholds");
            tier.park_value = 0.5 * (floor_value + ceil_value);
        }
    }
}

bool FdpAdversaryModel::sample(Rng& rng, std::vector<double>& p,
                               std::vector<std::uint32_t>& scratch) const {
    const std::int64_t seg = sampler_.sample(rng, p, scratch);
    p.resize(truth_.size());
    if (seg == 0) {
        std::fill(p.begin() + num_true_, p.end(), 0.0);
        return false;
    }
    const Tier& tier = tiers_[static_cast<size_t>(seg - 1)];
    auto it = p.begin() + num_true_;
    for (std::int64_t z = 0; z < tier.zeros; ++z) *it++ = 0.0;
    for (std::int64_t f = 0; f < tier.parked; ++f) *it++ = tier.park_value;
    return true;
}

ByCounterexampleModel::ByCounterexampleModel(std::int64_t s) {
    if (s < 2 || s % 2 != 0) throw std::domain_error("counterexample model: s must be even");
    set_truth(s, s / 2 + 1);
}

bool ByCounterexampleModel::sample(Rng& rng, std::vector<double>& p,
                                   std::vector<std::uint32_t>&) const {
    p.resize(truth_.size());
    for (std::int64_t i = 0; i < num_true_; ++i) p[static_cast<size_t>(i)] = rng.next_double();
    std::fill(p.begin() + num_true_, p.end(), 0.0);
    return false;
}

double by_counterexample_fwer_bound(std::int64_t s, double alpha) {
    if (s < 2 || s % 2 != 0) throw std::domain_error("counterexample bound: s must be even");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0, 1)");
    const double cs = harmonic(s);
    return 1.0 - std::pow(1.0 - alpha / (2.0 * cs), static_cast<double>(s / 2 + 1));
}

namespace {

double replication_metric(const JointModel& model, const Procedure& proc,
                          const ErrorMetric& metric, std::uint64_t seed, std::int64_t rep,
                          std::vector<double>& p, std::vector<std::uint32_t>& scratch) {
    Rng rng(seed, static_cast<std::uint64_t>(rep));
    model.sample(rng, p, scratch);
    const StepResult res = proc.engine == Engine::StepUp ? step_up(p, proc.crit)
                                                         : step_down(p, proc.crit);
    const auto& truth = model.truth();
    std::int64_t falses = 0;
    for (size_t i = 0; i < truth.size(); ++i) falses += (res.rejected[i] & truth[i]) ? 1 : 0;

    switch (metric.kind) {
        case MetricKind::KFwer:
            return falses >= metric.k ? 1.0 : 0.0;
        case MetricKind::FdpTail:
            // FDP > gamma, compared exactly: falses/total > num/den.
            return static_cast<__int128>(falses) * metric.gamma.den >
                           static_cast<__int128>(metric.gamma.num) * res.num_rejected
                       ? 1.0
                       : 0.0;
        case MetricKind::Fdr:
            return res.num_rejected == 0
                       ? 0.0
                       : static_cast<double>(falses) / static_cast<double>(res.num_rejected);
    }
    return 0.0;
}

}  // namespace

SimulationEstimate estimate_error_rate(const JointModel& model, const Procedure& proc,
                                       const ErrorMetric& metric, std::int64_t reps,
                                       std::uint64_t seed, int num_threads) {
    if (reps < 1) throw std::domain_error("estimate: reps must be >= 1");
    if (proc.crit.size() != model.size())
        throw std::invalid_argument("estimate: procedure length does not match model size");
    if (metric.kind == MetricKind::KFwer && metric.k < 1)
        throw std::domain_error("estimate: k must be >= 1");
    if (metric.kind == MetricKind::FdpTail) require_gamma(metric.gamma);

    int workers = num_threads > 0 ? num_threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (static_cast<std::int64_t>(workers) > reps) workers = static_cast<int>(reps);

    // Per-replication values are stored and reduced in index order, so the
    // estimate is bit-identical for every worker count.
    std::vector<double> values(static_cast<size_t>(reps));
    auto run_chunk = [&](std::int64_t lo, std::int64_t hi) {
        std::vector<double> p;
        std::vector<std::uint32_t> scratch;
        for (std::int64_t r = lo; r < hi; ++r)
            values[static_cast<size_t>(r)] =
                replication_metric(model, proc, metric, seed, r, p, scratch);
    };

    if (workers == 1) {
        run_chunk(0, reps);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        const std::int64_t chunk = (reps + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::int64_t lo = w * chunk;
            const std::int64_t hi = std::min(reps, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_chunk, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    double sum = 0.0;
    for (double v : values) sum += v;
    SimulationEstimate est;
    est.estimate = sum / static_cast<double>(reps);
    est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(reps));
    est.replications = reps;
    est.seed = seed;
    return est;
}

}  // namespace stepup
