#pragma once

// Built-in benchmark cases: Block-and-Towel, the makeshift screwdriver, and
// seeded random problems.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mgpkit/mgp.hpp"

namespace mgpkit {

struct GoldenValue {
  long long value = 0;
  std::string basis;  // how the number was obtained
};

struct BenchCase {
  std::string name;
  std::string world_file;    // file name inside the corpus directory
  std::string problem_file;
  SourceDoc world_doc;
  SourceDoc problem_doc;
  std::optional<MgpStatus> expected;
  std::map<std::string, GoldenValue> golden;
  std::vector<std::string> notes;
};

enum class BlockTowelVariant { Baseline, NoTouch };
enum class ScrewdriverVariant { MissingTool, ToolAvailable, Recessed };

BenchCase build_block_towel(BlockTowelVariant v);
BenchCase build_screwdriver(ScrewdriverVariant v);

/// Every built-in case, in manifest order.
std::vector<BenchCase> corpus_cases();

struct LoadedCase {
  WorldPtr world;
  Problem problem;
};

/// Parses both documents. Throws Error(Input) with the first diagnostic.
LoadedCase load_case(const BenchCase& c);

/// Files of the corpus directory (name -> contents), manifest.json included.
std::map<std::string, std::string> corpus_files();

struct RandomSizes {
  std::size_t objects = 4;
  std::size_t predicates = 3;
  std::size_t schemas = 5;
  double hidden_fraction = 0.4;
};

/// Ground atoms allowed in a random world; larger requests throw
/// Error(Budget).
inline constexpr std::size_t kMaxRandomAtoms = 16;

using VerdictOracle = std::function<MgpStatus(const Problem&)>;

/// Reproducible from (seed, sizes). One sort, schemas of arity <= 2, random
/// preconditions and effects; round(hidden_fraction * schemas) schemas are
/// hidden. `oracle`, when given, fills `expected`.
BenchCase gen_random_mgp(std::uint64_t seed, const RandomSizes& sizes, const VerdictOracle& oracle = {});

}  // namespace mgpkit
