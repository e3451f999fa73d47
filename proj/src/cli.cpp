#include "mgpkit/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mgpkit/agent.hpp"
#include "mgpkit/report.hpp"

namespace mgpkit::cli {

namespace fs = std::filesystem;

std::size_t effective_state_cap(const RunConfig& config) {
  if (config.state_cap) return *config.state_cap;
  if (const char* env = std::getenv("MGPKIT_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultStateCap;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, "read error on " + path);
  return ss.str();
}

bool looks_like_problem(const std::string& path, const std::string& text) {
  const auto ext = fs::path(path).extension().string();
  if (ext == ".problem") return true;
  if (ext == ".world") return false;
  return text.find("(:problem") != std::string::npos;
}

template <typename T>
void print_diagnostics(std::ostream& err, const ParseResult<T>& r, const std::string& origin) {
  for (const auto& d : r.diagnostics) err << d.format(origin) << '\n';
}

struct Loaded {
  WorldPtr world;
  Problem problem;
};

// nullopt after printing diagnostics.
std::optional<Loaded> load_problem(const RunConfig& cfg, const std::string& path, std::ostream& err) {
  const SourceDoc pdoc{read_file(path), path};
  std::string world_path;
  if (cfg.world_path) {
    world_path = *cfg.world_path;
  } else {
    auto name = referenced_world(pdoc);
    if (!name) {
      err << path << ":1:1: error: problem does not name its world [no-world]\n";
      return std::nullopt;
    }
    world_path = (fs::path(path).parent_path() / (*name + ".world")).string();
  }
  const SourceDoc wdoc{read_file(world_path), world_path};
  auto w = parse_world(wdoc);
  print_diagnostics(err, w, world_path);
  if (!w.ok()) return std::nullopt;
  auto p = parse_problem(pdoc, *w.value);
  print_diagnostics(err, p, path);
  if (!p.ok()) return std::nullopt;
  return Loaded{*w.value, std::move(*p.value)};
}

Json generator_list(const World& w, const std::vector<GeneratorRef>& gs) {
  Json a = Json::array();
  for (const auto& g : gs) a.push_back(w.generator_string(g));
  return a;
}

class Runner {
 public:
  Runner(const RunConfig& cfg, std::ostream& out, std::ostream& err)
      : cfg_(cfg), out_(out), err_(err), budget_{effective_state_cap(cfg), cfg.subset_cap} {}

  int dispatch() {
    const std::string& c = cfg_.command;
    if (c == "validate") return validate();
    if (c == "gen") return gen();
    if (c == "plan" || c == "check-mgp" || c == "solve" || c == "judge" || c == "mnumber") {
      if (cfg_.inputs.empty()) return usage(c + " needs a problem file");
      auto loaded = load_problem(cfg_, cfg_.inputs.front(), err_);
      if (!loaded) return kDomainError;
      if (c == "plan") return plan(*loaded);
      if (c == "check-mgp") return check(*loaded);
      if (c == "solve") return solve(*loaded);
      if (c == "judge") return judge(*loaded);
      return mnumber(*loaded);
    }
    return usage("unknown command '" + c + "'");
  }

 private:
  int usage(const std::string& msg) {
    err_ << "mgpkit: " << msg << '\n';
    return kDomainError;
  }

  Json header() const {
    Json j = report_header(cfg_.command, cfg_.seed, budget_);
    j["inputs"] = cfg_.inputs;
    return j;
  }

  void emit(const Json& report) {
    if (cfg_.report_path) write_report(*cfg_.report_path, report);
  }

  int validate() {
    if (cfg_.inputs.empty()) return usage("validate needs at least one file");
    Json report = header();
    Json files = Json::array();
    bool any_error = false;
    for (const auto& path : cfg_.inputs) {
      const SourceDoc doc{read_file(path), path};
      std::vector<Diagnostic> diags;
      if (looks_like_problem(path, doc.text)) {
        if (auto name = referenced_world(doc); name && !cfg_.world_path) {
          const std::string wp = (fs::path(path).parent_path() / (*name + ".world")).string();
          auto w = parse_world(SourceDoc{read_file(wp), wp});
          if (!w.ok()) {
            diags.push_back({Severity::Error, DiagCode::NoWorld, 1, 1, "world file " + wp + " does not parse"});
          } else {
            diags = parse_problem(doc, *w.value).diagnostics;
          }
        } else if (cfg_.world_path) {
          auto w = parse_world(SourceDoc{read_file(*cfg_.world_path), *cfg_.world_path});
          if (!w.ok()) diags.push_back({Severity::Error, DiagCode::NoWorld, 1, 1, "world file does not parse"});
          else diags = parse_problem(doc, *w.value).diagnostics;
        } else {
          // No readable world reference: report the problem's own defects.
          auto empty = make_world("", "", PlanningDomain{}, GeneratorMask{0, 0, 0, false});
          diags = parse_problem(doc, empty).diagnostics;
          if (diags.empty()) diags.push_back({Severity::Error, DiagCode::NoWorld, 1, 1, "problem does not name its world"});
        }
      } else {
        diags = parse_world(doc).diagnostics;
      }
      Json entry{{"path", path}};
      Json dj = Json::array();
      std::size_t errors = 0;
      for (const auto& d : diags) {
        err_ << d.format(path) << '\n';
        errors += d.severity == Severity::Error;
        dj.push_back({{"severity", d.severity == Severity::Error ? "error" : "warning"},
                      {"code", to_string(d.code)},
                      {"line", d.line},
                      {"column", d.column},
                      {"message", d.message}});
      }
      entry["errors"] = errors;
      entry["diagnostics"] = dj;
      files.push_back(entry);
      out_ << path << ": " << (errors ? "invalid" : "ok") << '\n';
      any_error |= errors > 0;
    }
    report["files"] = files;
    emit(report);
    return any_error ? kDomainError : kOk;
  }

  int plan(const Loaded& l) {
    const auto r = search(l.problem.subdomain, l.problem.init, l.problem.goal, l.problem.never, budget_.state_cap);
    Json report = header();
    report["plan"] = r.plan ? plan_json(*l.world, *r.plan) : Json(nullptr);
    report["truncated"] = r.truncated;
    report["states"] = r.states;
    emit(report);
    if (r.plan) {
      for (GroundActionId a : r.plan->actions) out_ << l.world->action_string(a) << '\n';
      return kOk;
    }
    out_ << (r.truncated ? "unknown: state cap reached\n" : "no plan\n");
    return r.truncated ? kBudgetUnknown : kOk;
  }

  int check(const Loaded& l) {
    const auto v = classify_problem(l.problem, budget_, cfg_.strict ? Quantifier::Universal : Quantifier::Existential);
    Json report = header();
    Json vj = verdict_json(*l.world, v);
    for (auto it = vj.begin(); it != vj.end(); ++it) report[it.key()] = it.value();
    Json deltas = Json::array();
    Json bits = nullptr;
    if (v.status == MgpStatus::Mgp) {
      const auto ext = minimal_extensions(l.problem, budget_);
      for (const auto& s : ext.sets) deltas.push_back(generator_list(*l.world, s));
      const auto opt = optimal_strategies(l.problem, budget_);
      bits = m_number(opt.insightful);
      report["extension_search_partial"] = ext.partial;
    }
    report["minimal_deltas"] = deltas;
    report["m_number_bits"] = bits;
    emit(report);
    out_ << "status: " << to_string(v.status) << '\n';
    if (v.universal_mgp) out_ << "universal reading: " << (*v.universal_mgp ? "MGP" : "not MGP") << '\n';
    for (const auto& d : deltas) out_ << "minimal extension: " << d.dump() << '\n';
    if (!bits.is_null()) out_ << "m-number bits: " << bits.get<std::size_t>() << '\n';
    return v.status == MgpStatus::UnknownBudget ? kBudgetUnknown : kOk;
  }

  int solve(const Loaded& l) {
    auto kind = parse_policy_kind(cfg_.policy);
    if (!kind) return usage("unknown policy '" + cfg_.policy + "' (random, plan-first, oracle)");
    const Policy policy{*kind, cfg_.seed, cfg_.exploration_budget, cfg_.relaxation_depth};
    const auto trace = solve_mgp(l.problem, policy, budget_);
    const std::string jsonl = trace_jsonl(*l.world, trace);
    if (cfg_.trace_path) write_file_atomic(*cfg_.trace_path, jsonl);
    else out_ << jsonl;
    Json report = header();
    report["policy"] = {{"kind", to_string(policy.kind)},
                        {"exploration_budget", policy.exploration_budget},
                        {"relaxation_depth", policy.relaxation_depth}};
    report["outcome"] = to_string(trace.outcome);
    report["strategy"] = strategy_json(*l.world, trace.steps);
    report["requests"] = trace.requests;
    emit(report);
    if (cfg_.trace_path) out_ << "outcome: " << to_string(trace.outcome) << '\n';
    return trace.outcome == Outcome::BudgetExhausted ? kBudgetUnknown : kOk;
  }

  int judge(const Loaded& l) {
    std::string trace_file;
    if (cfg_.trace_path) trace_file = *cfg_.trace_path;
    else if (cfg_.inputs.size() > 1) trace_file = cfg_.inputs[1];
    else return usage("judge needs a trace (--trace FILE)");
    std::istringstream in(read_file(trace_file));
    const auto parsed = read_trace_jsonl(in, *l.world);
    const auto reg = HypothesisRegistry::standard(budget_);
    ProgressOptions opts;
    opts.paper_pure = cfg_.paper_pure;
    opts.budget = budget_;
    const auto pr = expected_progress(parsed.steps, l.problem, l.problem.initial_context(), reg, opts);
    Json report = header();
    report["trace"] = trace_file;
    report["progress"] = progress_json(pr);
    emit(report);
    out_ << "M = " << pr.m << '\n';
    for (const auto& h : pr.hypotheses)
      out_ << "  " << h.name << ": prior " << h.prior << ", likelihood " << h.likelihood << ", R " << h.r << '\n';
    return kOk;
  }

  int mnumber(const Loaded& l) {
    const auto opt = optimal_strategies(l.problem, budget_);
    const std::size_t bits = m_number(opt.insightful);
    Json report = header();
    report["m_number_bits"] = bits;
    report["strategies"] = opt.optimal.size();
    report["partial"] = opt.partial;
    emit(report);
    out_ << bits << '\n';
    return kOk;
  }

  int gen() {
    if (!cfg_.corpus_dir && !cfg_.random_dir) return usage("gen needs --corpus DIR or --random DIR");
    Json report = header();
    Json written = Json::array();
    auto put = [&](const fs::path& dir, const std::string& name, const std::string& text) {
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string());
      write_file_atomic((dir / name).string(), text);
      written.push_back((dir / name).string());
    };
    if (cfg_.corpus_dir)
      for (const auto& [name, text] : corpus_files()) put(*cfg_.corpus_dir, name, text);
    if (cfg_.random_dir) {
      const auto c = gen_random_mgp(cfg_.seed, cfg_.sizes);
      put(*cfg_.random_dir, c.world_file, c.world_doc.text);
      put(*cfg_.random_dir, c.problem_file, c.problem_doc.text);
    }
    report["written"] = written;
    emit(report);
    for (const auto& w : written) out_ << w.get<std::string>() << '\n';
    return kOk;
  }

  const RunConfig& cfg_;
  std::ostream& out_;
  std::ostream& err_;
  Budget budget_;
};

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    return Runner(config, out, err).dispatch();
  } catch (const Error& e) {
    err << "mgpkit: " << to_string(e.kind()) << " error: " << e.what() << '\n';
    return e.kind() == ErrorKind::Io ? kIoError : kDomainError;
  } catch (const std::exception& e) {
    err << "mgpkit: " << e.what() << '\n';
    return kDomainError;
  }
}

}  // namespace mgpkit::cli
