#pragma once

// Command dispatch for the mgpkit tool, separated from argument parsing so
// it can be driven from tests.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mgpkit/bench.hpp"

namespace mgpkit::cli {

enum ExitCode : int { kOk = 0, kDomainError = 1, kBudgetUnknown = 2, kIoError = 3 };

struct RunConfig {
  std::string command;  // validate | plan | check-mgp | solve | judge | mnumber | gen
  std::vector<std::string> inputs;
  std::optional<std::string> world_path;  // default: <problem dir>/<world name>.world
  std::uint64_t seed = 0;
  std::optional<std::size_t> state_cap;   // default: MGPKIT_BUDGET, then the built-in cap
  std::size_t subset_cap = 4096;
  std::optional<std::string> report_path;
  bool strict = false;      // also evaluate the universal reading
  bool paper_pure = false;  // judge without the likelihood factor
  std::string policy = "plan-first";
  std::size_t relaxation_depth = 1;
  std::size_t exploration_budget = 32;
  std::optional<std::string> trace_path;  // solve: output, judge: input
  std::optional<std::string> corpus_dir;  // gen: write the built-in corpus here
  std::optional<std::string> random_dir;  // gen: write one random case here
  RandomSizes sizes;
};

/// Effective state cap for a config (flag, then MGPKIT_BUDGET, then default).
std::size_t effective_state_cap(const RunConfig& config);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace mgpkit::cli
