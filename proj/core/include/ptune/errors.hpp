#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ptune {

// A precondition on an argument was not met by the caller.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Invalid user-supplied settings: scenario keys, operator parameters, grids.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (DIMACS, landscape CSV, raw record CSV).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A target-algorithm run failed; carries the instance it was run on.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, std::size_t instance)
      : std::runtime_error("instance " + std::to_string(instance) + ": " + what),
        instance_(instance) {}

  std::size_t instance() const noexcept { return instance_; }

 private:
  std::size_t instance_;
};

}  // namespace ptune
