#pragma once

#include <stdexcept>
#include <string>

namespace bptn {

/// Bad arguments or configuration (shape mismatch, infeasible parameters, size guards).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not produce a valid result (zero norm, failed factorization, ...).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes a diagnostic line to stderr unless warnings are silenced.
void warn(const std::string& message);
void set_warnings_enabled(bool enabled);

}  // namespace bptn
