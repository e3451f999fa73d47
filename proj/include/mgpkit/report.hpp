#pragma once

// JSON reports and atomic file output.

#include <json.hpp>

#include <string>

#include "mgpkit/judge.hpp"

namespace mgpkit {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportFormat = 1;

using Json = nlohmann::ordered_json;

/// Fields every report starts with: format, tool, version, compressor,
/// command, seed, budget.
Json report_header(const std::string& command, std::uint64_t seed, const Budget& budget);

Json plan_json(const World& world, const Plan& plan);
Json strategy_json(const World& world, const Strategy& strategy);
Json verdict_json(const World& world, const MgpVerdict& v);
Json progress_json(const ProgressReport& r);

/// Writes to a temporary sibling, then renames over `path`. Throws
/// Error(Io).
void write_file_atomic(const std::string& path, const std::string& contents);

/// Report at `path` (deterministic bytes) and `path`.meta.json holding the
/// wall-clock time.
void write_report(const std::string& path, const Json& report);

}  // namespace mgpkit
