// mgpkit: classify, solve and score MacGyver problems from the command line.

#include <CLI11.hpp>

#include <iostream>

#include "mgpkit/cli.hpp"
#include "mgpkit/report.hpp"

int main(int argc, char** argv) {
  using mgpkit::cli::RunConfig;
  CLI::App app{"mgpkit: MacGyver problem toolkit"};
  app.set_version_flag("--version", mgpkit::kToolVersion);
  app.require_subcommand(1);

  RunConfig cfg;
  std::size_t state_cap = 0;

  auto common = [&](CLI::App* sub, bool needs_files) {
    auto* files = sub->add_option("files", cfg.inputs, "input files");
    if (needs_files) files->required();
    sub->add_option("--world", cfg.world_path, "world file (default: <problem dir>/<world name>.world)");
    sub->add_option("--seed", cfg.seed, "random seed")->default_val(0);
    sub->add_option("--state-cap", state_cap, "states per search (overrides MGPKIT_BUDGET)");
    sub->add_option("--subset-cap", cfg.subset_cap, "extension subsets to try")->default_val(4096);
    sub->add_option("--report", cfg.report_path, "write a JSON report here");
  };

  auto* validate = app.add_subcommand("validate", "check world and problem files");
  common(validate, true);
  auto* plan = app.add_subcommand("plan", "shortest plan inside the agent's subdomain");
  common(plan, true);
  auto* check = app.add_subcommand("check-mgp", "classify a problem");
  common(check, true);
  check->add_flag("--strict", cfg.strict, "also evaluate the universal reading of reachability");
  auto* solve = app.add_subcommand("solve", "run a simulated agent");
  common(solve, true);
  solve->add_option("--policy", cfg.policy, "random | plan-first | oracle")->default_val("plan-first");
  solve->add_option("--relaxation-depth", cfg.relaxation_depth)->default_val(1);
  solve->add_option("--exploration-budget", cfg.exploration_budget)->default_val(32);
  solve->add_option("--trace", cfg.trace_path, "write the JSONL trace here instead of stdout");
  auto* judge = app.add_subcommand("judge", "expected progress of a trace");
  common(judge, true);
  judge->add_option("--trace", cfg.trace_path, "JSONL trace to score");
  judge->add_flag("--paper-pure", cfg.paper_pure, "leave the likelihood factor out of M");
  auto* mnumber = app.add_subcommand("mnumber", "M-number of a problem, in bits");
  common(mnumber, true);
  auto* gen = app.add_subcommand("gen", "write the built-in corpus or a random problem");
  common(gen, false);
  gen->add_option("--corpus", cfg.corpus_dir, "directory for the built-in corpus");
  gen->add_option("--random", cfg.random_dir, "directory for a random problem (uses --seed)");
  gen->add_option("--objects", cfg.sizes.objects)->default_val(4);
  gen->add_option("--predicates", cfg.sizes.predicates)->default_val(3);
  gen->add_option("--schemas", cfg.sizes.schemas)->default_val(5);
  gen->add_option("--hidden-fraction", cfg.sizes.hidden_fraction)->default_val(0.4);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : mgpkit::cli::kDomainError;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  if (state_cap > 0) cfg.state_cap = state_cap;
  return mgpkit::cli::run(cfg, std::cout, std::cerr);
}
