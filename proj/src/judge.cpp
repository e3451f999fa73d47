#include "mgpkit/judge.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mgpkit/compress.hpp"

namespace mgpkit {

double random_agent_likelihood(const Strategy& omega) {
  return std::ldexp(1.0, -static_cast<int>(omega.size()));
}

namespace {

Bytes describe(const std::string& text) {
  Bytes b{'M', 'G', 'H'};
  b.insert(b.end(), text.begin(), text.end());
  return b;
}

class RandomAgent final : public Hypothesis {
 public:
  std::string name() const override { return "random"; }
  // Every step is one of two equally likely choices.
  Bytes description() const override { return describe("random"); }
  double likelihood(const Strategy& omega, const Problem&, const Context&) const override {
    return random_agent_likelihood(omega);
  }
};

class GuidedAgent final : public Hypothesis {
 public:
  GuidedAgent(bool oracle, double epsilon, Budget budget) : oracle_(oracle), epsilon_(epsilon), budget_(budget) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw Error(ErrorKind::Argument, "epsilon must be in (0, 1]");
  }

  std::string name() const override { return oracle_ ? "oracle-guided" : "plan-first"; }

  // Behaviour: with probability 1-epsilon follow the preference, otherwise
  // pick uniformly among applicable actions and single-generator extensions.
  // Preference: first action of the lex-least shortest plan in view; with no
  // plan, a uniformly chosen extension (oracle: a missing generator of the
  // first minimal extension set, if any).
  Bytes description() const override {
    std::ostringstream os;
    os << name() << " eps=" << epsilon_;
    return describe(os.str());
  }

  double likelihood(const Strategy& omega, const Problem& p, const Context& c) const override {
    if (omega.empty()) return 1.0;
    std::vector<GeneratorRef> target;
    if (oracle_) {
      Problem here = p;
      here.subdomain = c.subdomain;
      here.init = c.state;
      const auto ext = minimal_extensions(here, budget_);
      if (!ext.sets.empty()) target = ext.sets.front();
    }
    Context cur = c;
    double prob = 1.0;
    for (const auto& step : omega.steps) {
      const World& w = cur.subdomain.world();
      std::vector<GroundActionId> acts;
      for (GroundActionId a : cur.subdomain.ground_actions())
        if (applicable(cur.state, w.action(a))) acts.push_back(a);
      const auto exts = cur.subdomain.mask().complement().members();
      const double legal = static_cast<double>(acts.size() + exts.size());

      bool is_legal = false;
      std::optional<GeneratorRef> ext_step;
      if (const auto* act = std::get_if<ActStep>(&step)) {
        is_legal = std::binary_search(acts.begin(), acts.end(), act->action);
      } else {
        const auto& m = std::get<ModifyStep>(step).modification;
        if (m.kind == ModificationKind::Extension && m.payload.size() == 1 &&
            !cur.subdomain.mask().contains(m.payload[0])) {
          is_legal = true;
          ext_step = m.payload[0];
        }
      }
      if (!is_legal || legal == 0) return 0.0;

      double pref = 0.0;
      const auto plan = search(cur.subdomain, cur.state, p.goal, p.never, budget_.state_cap).plan;
      if (plan) {
        if (!plan->empty())
          if (const auto* act = std::get_if<ActStep>(&step)) pref = act->action == plan->actions.front() ? 1.0 : 0.0;
      } else if (ext_step) {
        std::vector<GeneratorRef> wanted;
        for (const auto& g : target)
          if (!cur.subdomain.mask().contains(g)) wanted.push_back(g);
        if (wanted.empty()) wanted = exts;
        if (std::find(wanted.begin(), wanted.end(), *ext_step) != wanted.end())
          pref = 1.0 / static_cast<double>(wanted.size());
      }
      prob *= (1.0 - epsilon_) * pref + epsilon_ / legal;

      try {
        cur = execute_strategy(cur, Strategy{{step}}, p.never).back();
      } catch (const ExecutionError&) {
        return 0.0;
      }
    }
    return prob;
  }

 private:
  bool oracle_;
  double epsilon_;
  Budget budget_;
};

}  // namespace

HypothesisPtr random_agent_hypothesis() { return std::make_shared<RandomAgent>(); }
HypothesisPtr plan_first_hypothesis(double epsilon, Budget budget) {
  return std::make_shared<GuidedAgent>(false, epsilon, budget);
}
HypothesisPtr oracle_guided_hypothesis(double epsilon, Budget budget) {
  return std::make_shared<GuidedAgent>(true, epsilon, budget);
}

HypothesisRegistry::HypothesisRegistry(std::vector<HypothesisPtr> hypotheses) : hypotheses_(std::move(hypotheses)) {
  if (hypotheses_.empty()) throw Error(ErrorKind::Argument, "a registry needs at least one hypothesis");
  for (const auto& h : hypotheses_) bits_.push_back(compress_bits(h->description()));
  // Work relative to the shortest description so no weight underflows.
  const std::size_t kmin = *std::min_element(bits_.begin(), bits_.end());
  std::vector<double> w;
  for (std::size_t b : bits_) w.push_back(std::ldexp(1.0, -static_cast<int>(b - kmin)));
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double x : w) priors_.push_back(x / total);
}

HypothesisRegistry HypothesisRegistry::standard(Budget budget) {
  return HypothesisRegistry({random_agent_hypothesis(), plan_first_hypothesis(0.1, budget),
                             oracle_guided_hypothesis(0.1, budget)});
}

double resourcefulness_default(const Strategy& omega, const Problem& p, const Budget& budget) {
  const auto verdict = classify_problem(p, budget);
  if (verdict.status == MgpStatus::UnsolvableInWorld || verdict.status == MgpStatus::UnknownBudget)
    throw Error(ErrorKind::MetricUndefined,
                std::string("resourcefulness is undefined for status ") + to_string(verdict.status));
  const auto contexts = execute_strategy(p.initial_context(), omega, p.never);
  const Context& last = contexts.back();
  const bool reachable_now = search(last.subdomain, last.state, p.goal, p.never, budget.state_cap).plan.has_value();
  if (verdict.status == MgpStatus::SolvableInSubdomain) return reachable_now ? 1.0 : 0.0;

  // Generators the strategy added that are still in the final view.
  std::vector<GeneratorRef> added;
  for (const auto& g : last.subdomain.mask().members())
    if (!p.subdomain.mask().contains(g)) added.push_back(g);
  const auto ext = minimal_extensions(p, budget);
  double best = 0.0;
  for (const auto& set : ext.sets) {
    std::size_t hit = 0;
    for (const auto& g : set) hit += std::binary_search(added.begin(), added.end(), g);
    // Full credit also needs the goal to be reachable from where ω ended.
    if (hit == set.size() && !reachable_now) --hit;
    best = std::max(best, static_cast<double>(hit) / static_cast<double>(set.size()));
  }
  return best;
}

ProgressReport expected_progress(const Strategy& omega, const Problem& p, const Context& c,
                                 const HypothesisRegistry& reg, const ProgressOptions& options) {
  const auto contexts = execute_strategy(c, omega, p.never);
  (void)contexts;
  ProgressReport report;
  report.metric = options.metric_name + (options.paper_pure ? " (prior x R)" : " (prior x likelihood x R)");
  auto default_metric = [&](const Strategy& w, const Problem& prob, const Context& ctx) {
    Problem here = prob;
    here.subdomain = ctx.subdomain;
    here.init = ctx.state;
    return resourcefulness_default(w, here, options.budget);
  };
  for (std::size_t i = 0; i < reg.size(); ++i) {
    const auto& h = *reg.hypotheses()[i];
    HypothesisContribution hc;
    hc.name = h.name();
    hc.prior = reg.priors()[i];
    hc.likelihood = options.paper_pure ? 1.0 : h.likelihood(omega, p, c);
    auto it = options.per_hypothesis.find(hc.name);
    if (it != options.per_hypothesis.end()) hc.r = it->second(omega, p, c);
    else if (options.metric) hc.r = options.metric(omega, p, c);
    else hc.r = default_metric(omega, p, c);
    hc.r = std::clamp(hc.r, 0.0, 1.0);
    report.m += hc.prior * hc.likelihood * hc.r;
    report.hypotheses.push_back(std::move(hc));
  }
  return report;
}

double mixture_mass(const Strategy& omega, const Problem& p, const Context& c, const HypothesisRegistry& reg) {
  double m = 0.0;
  for (std::size_t i = 0; i < reg.size(); ++i) m += reg.priors()[i] * reg.hypotheses()[i]->likelihood(omega, p, c);
  return m;
}

std::vector<RankedContinuation> predict_continuation(const Strategy& omega, std::size_t k,
                                                     const std::vector<Strategy>& candidates, const Problem& p,
                                                     const Context& c, const HypothesisRegistry& reg) {
  for (const auto& cand : candidates)
    if (cand.size() > k) throw Error(ErrorKind::Argument, "candidate continuation longer than k");
  const double base = mixture_mass(omega, p, c, reg);
  if (!(base > 0.0)) throw Error(ErrorKind::UndefinedConditional, "M(omega) is zero; the conditional is undefined");
  std::vector<RankedContinuation> out;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    out.push_back({i, mixture_mass(omega.concat(candidates[i]), p, c, reg) / base});
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
  return out;
}

}  // namespace mgpkit
