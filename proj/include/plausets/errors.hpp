#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace plausets {

// Invalid argument or data outside the supported domain. CLI exit code 2.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Model-level failure: e.g. the inverse association map is undefined at (t, theta).
class ModelError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A 2-D level set touches the edge of the evaluation grid.
class BoundsError : public DomainError {
 public:
  using DomainError::DomainError;
};

// The plausibility maximum does not exceed alpha, so the region is empty.
class EmptyRegionError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Bracket endpoints for interval inversion are not below alpha.
class BracketError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Input file could not be parsed. Carries the 1-based line number.
class ParseError : public DomainError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : DomainError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Iterative solver did not converge. CLI exit code 3.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A coverage replicate failed; carries what is needed to replay it.
class ReplicateError : public std::runtime_error {
 public:
  ReplicateError(const std::string& cause, std::uint64_t replicate, std::uint64_t master_seed,
                 bool convergence)
      : std::runtime_error("replicate " + std::to_string(replicate) + " (master seed " +
                           std::to_string(master_seed) + "): " + cause),
        replicate_(replicate),
        master_seed_(master_seed),
        convergence_(convergence) {}

  std::uint64_t replicate() const noexcept { return replicate_; }
  std::uint64_t master_seed() const noexcept { return master_seed_; }
  bool is_convergence_failure() const noexcept { return convergence_; }

 private:
  std::uint64_t replicate_;
  std::uint64_t master_seed_;
  bool convergence_;
};

}  // namespace plausets
