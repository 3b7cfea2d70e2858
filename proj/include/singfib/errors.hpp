#pragma once

#include <stdexcept>
#include <string>

namespace singfib {

// Malformed or inconsistent user input (CLI exit code 2).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// An enumeration would exceed its configured budget (CLI exit code 3).
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// A required invariant is not known for some input (CLI exit code 4).
class MissingInvariant : public std::runtime_error {
 public:
  explicit MissingInvariant(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace singfib
