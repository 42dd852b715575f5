#pragma once

#include <stdexcept>
#include <string>

namespace gridlab {

// Thrown when a caller breaks an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Thrown for failures of the environment or its inputs at runtime
// (unparseable files, dead agent channels, exhausted generation attempts).
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ContractViolation(what);
}

}  // namespace gridlab
