#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "mgpkit/bench.hpp"
#include "mgpkit/cli.hpp"

using namespace mgpkit;
namespace fs = std::filesystem;

namespace {

struct Run {
  int rc;
  std::string out, err;
};

Run run(cli::RunConfig cfg) {
  std::ostringstream out, err;
  const int rc = cli::run(cfg, out, err);
  return {rc, out.str(), err.str()};
}

cli::RunConfig cmd(const std::string& name, std::vector<std::string> inputs = {}) {
  cli::RunConfig c;
  c.command = name;
  c.inputs = std::move(inputs);
  return c;
}

std::string corpus(const std::string& file) { return (fs::path(MGPKIT_CORPUS_DIR) / file).string(); }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("mgpkit_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

std::size_t count_lines(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) n += line.find(needle) != std::string::npos;
  return n;
}

}  // namespace

TEST_CASE("validate: empty file is one diagnostic and exit 1") {
  const auto p = scratch("empty.problem");
  std::ofstream(p).close();
  const auto r = run(cmd("validate", {p.string()}));
  CHECK(r.rc == cli::kDomainError);
  CHECK(count_lines(r.err, ": error: ") == 1);
}

TEST_CASE("validate accepts the corpus") {
  for (const auto& f : {"block_towel.world", "block_towel_notouch.problem", "screwdriver_recessed.problem"})
    CHECK(run(cmd("validate", {corpus(f)})).rc == cli::kOk);
}

TEST_CASE("missing files are IO errors") {
  CHECK(run(cmd("validate", {"/nonexistent/x.problem"})).rc == cli::kIoError);
  CHECK(run(cmd("plan", {"/nonexistent/x.problem"})).rc == cli::kIoError);
}

TEST_CASE("plan prints one action per line") {
  const auto r = run(cmd("plan", {corpus("block_towel_baseline.problem")}));
  CHECK(r.rc == cli::kOk);
  CHECK(r.out == "(reach B L2)\n(grasp B L2)\n(lift B L2)\n(carryTo B L3)\n(release B L3)\n");
}

TEST_CASE("check-mgp and mnumber") {
  const auto r = run(cmd("check-mgp", {corpus("block_towel_notouch.problem")}));
  CHECK(r.rc == cli::kOk);
  CHECK(r.out.find("status: MGP") != std::string::npos);
  CHECK(r.out.find("action push") != std::string::npos);

  const auto m = run(cmd("mnumber", {corpus("block_towel_notouch.problem")}));
  CHECK(m.rc == cli::kOk);
  CHECK(m.out == "808\n");
  CHECK(run(cmd("mnumber", {corpus("block_towel_baseline.problem")})).rc == cli::kDomainError);
}

TEST_CASE("the state budget comes from the flag, then the environment") {
  auto c = cmd("check-mgp", {corpus("screwdriver_missing.problem")});
  ::setenv("MGPKIT_BUDGET", "5", 1);
  CHECK(cli::effective_state_cap(c) == 5);
  CHECK(run(c).rc == cli::kBudgetUnknown);
  c.state_cap = 1'000'000;
  CHECK(cli::effective_state_cap(c) == 1'000'000);
  CHECK(run(c).rc == cli::kOk);
  ::unsetenv("MGPKIT_BUDGET");
  CHECK(cli::effective_state_cap(cmd("plan")) == kDefaultStateCap);
}

TEST_CASE("reports are written whole, with a sidecar") {
  const auto report = scratch("notouch.json");
  auto c = cmd("check-mgp", {corpus("block_towel_notouch.problem")});
  c.report_path = report.string();
  REQUIRE(run(c).rc == cli::kOk);
  std::ifstream in(report);
  const auto j = nlohmann::json::parse(in);
  CHECK(j.at("tool") == "mgpkit");
  CHECK(j.at("command") == "check-mgp");
  CHECK(j.at("status") == "MGP");
  CHECK(j.at("m_number_bits") == 808);
  CHECK(fs::exists(report.string() + ".meta.json"));
  CHECK_FALSE(fs::exists(report.string() + ".tmp"));
}

TEST_CASE("solve then judge a trace") {
  const auto trace = scratch("coin.jsonl");
  auto s = cmd("solve", {corpus("screwdriver_missing.problem")});
  s.seed = 1;
  s.trace_path = trace.string();
  REQUIRE(run(s).rc == cli::kOk);
  std::ifstream in(trace);
  std::string first;
  std::getline(in, first);
  CHECK(first.find("reachAndEngage~0") != std::string::npos);

  auto j = cmd("judge", {corpus("screwdriver_missing.problem")});
  j.trace_path = trace.string();
  const auto r = run(j);
  CHECK(r.rc == cli::kOk);
  CHECK(r.out.rfind("M = ", 0) == 0);

  auto bad = cmd("solve", {corpus("screwdriver_missing.problem")});
  bad.policy = "telepathy";
  CHECK(run(bad).rc == cli::kDomainError);
}

TEST_CASE("gen writes the corpus and random cases") {
  const auto dir = scratch("corpus_copy");
  auto g = cmd("gen");
  g.corpus_dir = dir.string();
  REQUIRE(run(g).rc == cli::kOk);
  for (const auto& [name, text] : corpus_files()) {
    std::ifstream in(dir / name, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    CHECK(os.str() == text);
  }

  const auto rdir = scratch("random");
  auto r = cmd("gen");
  r.random_dir = rdir.string();
  r.seed = 9;
  REQUIRE(run(r).rc == cli::kOk);
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(rdir)) {
    ++n;
    if (e.path().extension() == ".problem") CHECK(run(cmd("validate", {e.path().string()})).rc == cli::kOk);
  }
  CHECK(n >= 2);
  fs::remove_all(scratch("").parent_path());
}
