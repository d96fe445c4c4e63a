#pragma once

#include <stdexcept>
#include <string>

namespace vh {

/// Inputs outside a documented precondition (bad dimension, non-positive
/// radius, flat point set, unbounded halfspace system, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A construction loop (halving, densification) hit its cap, or a
/// constructed object failed its own verification.
class ConstructionError : public std::runtime_error {
 public:
  ConstructionError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// The cutting-plane solver failed to converge. Carries a compact
/// per-iteration trace for diagnosis.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::string trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}

  const std::string& trace() const noexcept { return trace_; }

 private:
  std::string trace_;
};

/// A file could not be read, written or parsed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vh
