#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qkdbudget {

// An argument lies outside the domain of the formula it feeds.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A parameter bundle violates one of its type invariants. `field` is the
// dotted parameter path (e.g. "channel.alpha").
class ValidationError : public DomainError {
 public:
  ValidationError(std::string field, const std::string& message)
      : DomainError(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// The requested security level cannot be met at any finite cost
// (e.g. epsilon = 0 makes the single-photon margin diverge).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Request exceeds a hard resource limit.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qkdbudget
