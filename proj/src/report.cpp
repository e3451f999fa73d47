#include "mgpkit/report.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include "mgpkit/compress.hpp"

namespace mgpkit {

Json report_header(const std::string& command, std::uint64_t seed, const Budget& budget) {
  Json j;
  j["format"] = kReportFormat;
  j["tool"] = "mgpkit";
  j["version"] = kToolVersion;
  j["compressor"] = compressor_identity();
  j["command"] = command;
  j["seed"] = seed;
  j["budget"] = {{"state_cap", budget.state_cap}, {"subset_cap", budget.subset_cap}};
  return j;
}

Json plan_json(const World& world, const Plan& plan) {
  Json a = Json::array();
  for (GroundActionId id : plan.actions) a.push_back(world.action_string(id));
  return a;
}

Json strategy_json(const World& world, const Strategy& strategy) {
  Json a = Json::array();
  for (const auto& step : strategy.steps) {
    if (const auto* act = std::get_if<ActStep>(&step)) {
      a.push_back({{"act", world.action_string(act->action)}});
    } else {
      const auto& m = std::get<ModifyStep>(step).modification;
      Json gens = Json::array();
      for (const auto& g : m.payload) gens.push_back(world.generator_string(g));
      a.push_back({{m.kind == ModificationKind::Extension ? "extend" : "contract", gens}});
    }
  }
  return a;
}

namespace {
Json reach_json(const ReachSummary& r) {
  return {{"states", r.states}, {"explored", r.explored}, {"truncated", r.truncated},
          {"goal_reachable", r.goal_reachable}, {"pruned", r.pruned}};
}
}  // namespace

Json verdict_json(const World& world, const MgpVerdict& v) {
  Json j;
  j["status"] = to_string(v.status);
  j["witness"] = v.witness ? plan_json(world, *v.witness) : Json(nullptr);
  j["subdomain_search"] = reach_json(v.subdomain);
  j["world_search"] = reach_json(v.world);
  if (v.universal_mgp) j["universal_reading_mgp"] = *v.universal_mgp;
  return j;
}

Json progress_json(const ProgressReport& r) {
  Json j;
  j["M"] = r.m;
  j["metric"] = r.metric;
  Json hs = Json::array();
  for (const auto& h : r.hypotheses)
    hs.push_back({{"name", h.name}, {"prior", h.prior}, {"likelihood", h.likelihood}, {"R", h.r}});
  j["hypotheses"] = hs;
  return j;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + tmp + " for writing");
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write to " + tmp + " failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error(ErrorKind::Io, "cannot move report into place at " + path);
  }
}

void write_report(const std::string& path, const Json& report) {
  write_file_atomic(path, report.dump(2) + "\n");
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  Json meta{{"report", path}, {"written_unix_seconds", secs}};
  write_file_atomic(path + ".meta.json", meta.dump(2) + "\n");
}

}  // namespace mgpkit
