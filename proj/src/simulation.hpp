#ifndef STEPUP_SIMULATION_HPP
#define STEPUP_SIMULATION_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "bounds.hpp"
#include "procedures.hpp"
#include "rational.hpp"
#include "rng.hpp"
#include "sequences.hpp"

namespace stepup {

// Joint p-value distribution attaining the lemma32_bound with equality:
// segment i is chosen with probability t*(b_i - b_{i-1})/i, a common value is
// drawn uniformly on (b_{i-1}, b_i] and assigned to a uniformly random subset
// of i coordinates, the rest sit at 1. Refuses beta sequences whose bound
// exceeds 1 (sharpness does not apply there).
class Lemma32Sampler {
  public:
    explicit Lemma32Sampler(BetaSequence bs);

    std::int64_t t() const { return bs_.t; }
    double bound() const { return bound_; }
    const BetaSequence& betas() const { return bs_; }

    // Fills p with one draw; returns the fired segment in 1..m, 0 otherwise.
    std::int64_t sample(Rng& rng, std::vector<double>& p,
                        std::vector<std::uint32_t>& scratch) const;

  private:
    BetaSequence bs_;
    std::vector<double> cum_;  // cumulative segment probabilities
    double bound_ = 0.0;
};

// Convenience form of the sampler for one-off draws.
std::vector<double> sample_lemma32_worst_case(const BetaSequence& bs, Rng& rng);

// A joint model emits p-vectors of fixed length with a fixed truth labeling.
// sample() returns true when the model's designated union event fired (always
// false for models without one).
class JointModel {
  public:
    virtual ~JointModel() = default;

    std::int64_t size() const { return static_cast<std::int64_t>(truth_.size()); }
    const std::vector<unsigned char>& truth() const { return truth_; }
    std::int64_t num_true() const { return num_true_; }

    virtual bool sample(Rng& rng, std::vector<double>& p,
                        std::vector<std::uint32_t>& scratch) const = 0;

  protected:
    void set_truth(std::int64_t s, std::int64_t num_true);

    std::vector<unsigned char> truth_;  // by index; true hypotheses first
    std::int64_t num_true_ = 0;
};

enum class FalsePolicy { Zero, FixedValue, IndependentUniform };

// True p-values i.i.d. uniform; false ones per policy.
class IndependentUniformModel final : public JointModel {
  public:
    IndependentUniformModel(std::int64_t s, std::int64_t num_true, FalsePolicy policy,
                            double fixed_value = 0.0);
    bool sample(Rng& rng, std::vector<double>& p, std::vector<std::uint32_t>& scratch) const override;

  private:
    FalsePolicy policy_;
    double fixed_value_;
};

// All hypotheses true; p-values from the sharp construction.
class Lemma32Model final : public JointModel {
  public:
    explicit Lemma32Model(BetaSequence bs);
    bool sample(Rng& rng, std::vector<double>& p, std::vector<std::uint32_t>& scratch) const override;
    const Lemma32Sampler& sampler() const { return sampler_; }

  private:
    Lemma32Sampler sampler_;
};

// Worst case for a stepup procedure with the given thresholds: the number of
// true hypotheses maximizes the k-FWER bound, false p-values are identically
// 0, true ones follow the sharp construction on the induced beta sequence.
// The union event coincides with >= k false rejections by that procedure.
class KfwerAdversaryModel final : public JointModel {
  public:
    KfwerAdversaryModel(std::int64_t k, std::int64_t s, const CriticalSequence& crit);
    bool sample(Rng& rng, std::vector<double>& p, std::vector<std::uint32_t>& scratch) const override;

    std::int64_t card_star() const { return num_true_; }
    double attained_probability() const { return sampler_.bound(); }

  private:
    Lemma32Sampler sampler_;
};

// Worst case for FDP tail control. True p-values follow the sharp
// construction on the envelope beta sequence; false ones are placed
// conditionally on the fired tier so that the union event forces FDP > gamma:
// on tier l the procedure rejects exactly the tier's source rank, with the
// required count of false zeros below and the leftover false p-values parked
// strictly above every threshold they could occupy.
class FdpAdversaryModel final : public JointModel {
  public:
    FdpAdversaryModel(const Rational& gamma, std::int64_t s, const CriticalSequence& crit);
    bool sample(Rng& rng, std::vector<double>& p, std::vector<std::uint32_t>& scratch) const override;

    std::int64_t card_star() const { return num_true_; }
    double attained_probability() const { return sampler_.bound(); }
    const Rational& gamma() const { return gamma_; }

  private:
    struct Tier {
        std::int64_t zeros = 0;   // false p-values pinned at 0
        std::int64_t parked = 0;  // false p-values above their thresholds
        double park_value = 1.0;
    };

    Rational gamma_;
    Lemma32Sampler sampler_;
    std::vector<Tier> tiers_;  // per order statistic, 1-based at index-1
};

// Even s, s/2+1 true hypotheses i.i.d. uniform, false p-values identically 0.
// Demonstrates that FDR-level thresholds can fail FWER control even under
// independence.
class ByCounterexampleModel final : public JointModel {
  public:
    explicit ByCounterexampleModel(std::int64_t s);
    bool sample(Rng& rng, std::vector<double>& p, std::vector<std::uint32_t>& scratch) const override;
};

// Closed-form lower bound on the FWER of the stepup procedure with
// by_fdr_values(s, alpha) under the counterexample model:
//   1 - (1 - alpha/(2 C_s))^(s/2+1).
double by_counterexample_fwer_bound(std::int64_t s, double alpha);

enum class MetricKind { KFwer, FdpTail, Fdr };

struct ErrorMetric {
    MetricKind kind = MetricKind::KFwer;
    std::int64_t k = 1;  // KFwer only
    Rational gamma;      // FdpTail only
};

enum class Engine { StepUp, StepDown };

struct Procedure {
    Engine engine = Engine::StepUp;
    CriticalSequence crit;
};

struct SimulationEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::int64_t replications = 0;
    std::uint64_t seed = 0;
};

// Monte-Carlo estimate of the error metric. Replication r draws from
// Rng(seed, r), so the result is identical for any worker count.
SimulationEstimate estimate_error_rate(const JointModel& model, const Procedure& proc,
                                       const ErrorMetric& metric, std::int64_t reps,
                                       std::uint64_t seed, int num_threads = 0);

}  // namespace stepup

#endif
