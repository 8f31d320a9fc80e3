#pragma once

#include <stdexcept>
#include <string>

namespace xprod {

// Input that violates a type invariant (duplicate labels, zero rows, bad spec).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation called outside its precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Argument outside the domain of a partial map (gamma_tilde and friends).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A size guard tripped (word counts, degree cap, term counts).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace tol {
inline constexpr double kFloat = 1e-9;
inline constexpr double kStar = 1e-6;
inline constexpr double kNullRelative = 1e-12;
}  // namespace tol

}  // namespace xprod
