#pragma once

#include <stdexcept>
#include <string>

namespace isochron {

// Input violates an operation's precondition (bad series, bad parameters...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// The engine contradicted one of its own identities. Always a bug.
struct InternalConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

// Elimination hit an identically vanishing resultant or an infinite fiber.
struct DegenerateEliminationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace isochron
