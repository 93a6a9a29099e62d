#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace phasekit {

// Domain error: invalid input data or a violated mathematical precondition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an enumeration would exceed its configured budget. Carries the
// exact size of the space so callers can switch strategy.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t required, std::uint64_t budget)
      : Error(what + " (requires " + std::to_string(required) + ", budget " +
              std::to_string(budget) + ")"),
        required_(required),
        budget_(budget) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

}  // namespace phasekit
