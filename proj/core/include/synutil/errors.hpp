#pragma once

#include <stdexcept>
#include <string>

namespace synutil {

// Violated preconditions, malformed inputs, schema mismatches. The CLI maps
// these to exit code 2.
class ContractError : public std::runtime_error {
 public:
  explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

// Unrecoverable numerical failure (no fallback value exists). Exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace synutil
