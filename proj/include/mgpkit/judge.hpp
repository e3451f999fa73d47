#pragma once

// A computable judge: a finite registry of agent hypotheses weighted by
// 2^-(compressed description length), resourcefulness metrics, expected
// progress and continuation prediction.

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mgpkit/mgp.hpp"

namespace mgpkit {

/// 2^-|ω|, counting every step.
double random_agent_likelihood(const Strategy& omega);

class Hypothesis {
 public:
  virtual ~Hypothesis() = default;
  virtual std::string name() const = 0;
  /// Canonical encoding used for the prior.
  virtual Bytes description() const = 0;
  /// Probability that this agent model emits ω as a prefix, starting in c.
  /// 1 for the empty strategy; never increases when ω is extended.
  virtual double likelihood(const Strategy& omega, const Problem& p, const Context& c) const = 0;
};

using HypothesisPtr = std::shared_ptr<const Hypothesis>;

HypothesisPtr random_agent_hypothesis();
/// Replans each step; with no plan in view it requests a uniformly chosen
/// extension. Follows its preference with probability 1-ε, otherwise picks
/// uniformly among legal moves.
HypothesisPtr plan_first_hypothesis(double epsilon = 0.1, Budget budget = {});
/// Like plan-first, but prefers the generators of the first minimal
/// extension set.
HypothesisPtr oracle_guided_hypothesis(double epsilon = 0.1, Budget budget = {});

class HypothesisRegistry {
 public:
  /// Throws Error(Argument) when empty.
  explicit HypothesisRegistry(std::vector<HypothesisPtr> hypotheses);
  /// random, plan-first, oracle-guided.
  static HypothesisRegistry standard(Budget budget = {});

  const std::vector<HypothesisPtr>& hypotheses() const { return hypotheses_; }
  const std::vector<double>& priors() const { return priors_; }
  const std::vector<std::size_t>& description_bits() const { return bits_; }
  std::size_t size() const { return hypotheses_.size(); }

 private:
  std::vector<HypothesisPtr> hypotheses_;
  std::vector<std::size_t> bits_;
  std::vector<double> priors_;
};

/// R(ω) in [0,1]. Throws Error(MetricUndefined) when the problem is not
/// solvable in its world (or its status is unknown within budget).
double resourcefulness_default(const Strategy& omega, const Problem& p, const Budget& budget = {});

using Metric = std::function<double(const Strategy&, const Problem&, const Context&)>;

struct ProgressOptions {
  Metric metric;              // empty: resourcefulness_default from c
  std::string metric_name = "insight-progress";
  bool paper_pure = false;    // likelihood factor fixed at 1
  std::map<std::string, Metric> per_hypothesis;  // overrides by hypothesis name
  Budget budget;
};

struct HypothesisContribution {
  std::string name;
  double prior = 0;
  double likelihood = 0;
  double r = 0;
};

struct ProgressReport {
  double m = 0;
  std::string metric;
  std::vector<HypothesisContribution> hypotheses;
};

/// M = Σ prior × likelihood × R. Throws ExecutionError when ω cannot run
/// from c.
ProgressReport expected_progress(const Strategy& omega, const Problem& p, const Context& c,
                                 const HypothesisRegistry& reg, const ProgressOptions& options = {});

/// Σ prior × likelihood: the metric-free mixture.
double mixture_mass(const Strategy& omega, const Problem& p, const Context& c, const HypothesisRegistry& reg);

struct RankedContinuation {
  std::size_t candidate = 0;  // index into the candidate list
  double score = 0;
};

/// score(ω⁺) = mixture(ω⌢ω⁺) / mixture(ω), ranked descending (ties by
/// index). Throws Error(UndefinedConditional) when mixture(ω) = 0 and
/// Error(Argument) for a candidate longer than k.
std::vector<RankedContinuation> predict_continuation(const Strategy& omega, std::size_t k,
                                                     const std::vector<Strategy>& candidates, const Problem& p,
                                                     const Context& c, const HypothesisRegistry& reg);

}  // namespace mgpkit
