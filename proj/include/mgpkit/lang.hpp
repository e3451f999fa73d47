#pragma once

// Text format for worlds and problems, plus the canonical byte encoding.
//
// Worlds:
//   (:world NAME
//     (:species TAG)
//     (:sorts tool item - object screwdriver-like - tool)
//     (:objects L1 L2 - location B - item)
//     (:predicates (at ?o - item ?l - location))
//     (:action NAME :parameters (?o - item) :precondition (and ...) :effect (and ...))
//     (:hidden (:objects ...) (:predicates ...) (:action ...)))
//
// Problems:
//   (:problem NAME
//     (:world WORLD-NAME)
//     (:subdomain (:predicates ...) (:objects ...) (:actions ...))   ; optional
//     (:init (at B L2) (not (holding B)))
//     (:goal (at B L3))
//     (:never (touching B)))

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mgpkit/problem.hpp"

namespace mgpkit {

struct SourceDoc {
  std::string text;
  std::string origin = "<stdin>";
};

enum class Severity { Error, Warning };

enum class DiagCode {
  Encoding,
  Syntax,
  NoWorld,
  NoProblem,
  UnknownSort,
  UnknownPredicate,
  UnknownObject,
  UnknownVariable,
  UnknownAction,
  ArityMismatch,
  DuplicateName,
  SortMismatch,
  Inconsistent,
  WorldMismatch,
  GoalOutsideSubdomain,
  Renamed,
  Semantic,
};

const char* to_string(DiagCode code);

struct Diagnostic {
  Severity severity = Severity::Error;
  DiagCode code = DiagCode::Syntax;
  int line = 1;
  int column = 1;
  std::string message;

  /// `path:line:col: severity: message`
  std::string format(const std::string& origin) const;
};

template <typename T>
struct ParseResult {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return value.has_value(); }
  std::size_t error_count() const {
    std::size_t n = 0;
    for (const auto& d : diagnostics) n += d.severity == Severity::Error;
    return n;
  }
  std::size_t warning_count() const { return diagnostics.size() - error_count(); }
};

ParseResult<WorldPtr> parse_world(const SourceDoc& doc);
ParseResult<Problem> parse_problem(const SourceDoc& doc, const WorldPtr& world);

/// Name given in a problem's (:world ...) clause, if it can be read.
std::optional<std::string> referenced_world(const SourceDoc& problem_doc);

std::string print_world(const World& world);
std::string print_problem(const Problem& problem);
std::string print_schema(const PlanningDomain& domain, const ActionSchema& schema);

/// Canonical bytes. Every encoding starts with the two-byte header "MG";
/// fields are length-prefixed and sets are emitted in id order, so equal
/// values give identical bytes and distinct values distinct bytes.
using Bytes = std::vector<std::uint8_t>;
Bytes canonical_serialize(const World& world);
Bytes canonical_serialize(const Problem& problem);
Bytes canonical_serialize(const Strategy& strategy, const World& world);
Bytes canonical_serialize(const StrategySet& set);

}  // namespace mgpkit
