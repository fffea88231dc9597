#ifndef MPMO_ERROR_HPP
#define MPMO_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mpmo {

/// Raised when a caller breaks a documented precondition (shape mismatch,
/// infeasible tree, invalid instance parameters, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by exhaustive oracles when the requested enumeration exceeds the
/// configured guard.
class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}

}  // namespace mpmo

#endif  // MPMO_ERROR_HPP
