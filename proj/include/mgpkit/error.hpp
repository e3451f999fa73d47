#pragma once

#include <stdexcept>
#include <string>

namespace mgpkit {

enum class ErrorKind {
  Schema,            // malformed schema or unknown sort during grounding
  Precondition,      // action applied where it is not applicable
  Modification,      // extension overlaps the view / contraction not in the view
  World,             // payload or reference outside the world
  Argument,          // bad argument to an operation (cap < 1, empty input, ...)
  Execution,         // strategy cannot be executed; carries the step index
  Relaxation,        // relax_schema would not widen the sort
  Budget,            // size limits exceeded before any work was done
  NotMgp,            // operation requires an MGP
  MetricUndefined,   // resourcefulness on a problem unsolvable in the world
  UndefinedConditional,
  Input,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ExecutionError : public Error {
 public:
  ExecutionError(std::size_t step, const std::string& message)
      : Error(ErrorKind::Execution, message), step_(step) {}

  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace mgpkit
