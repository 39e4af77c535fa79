#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nilmag {

/// Machine-readable failure classes surfaced by the library and the CLI.
enum class ErrorCategory {
  parse,
  validation,
  divergence,
  unsupported_step,
};

std::string_view category_name(ErrorCategory category);

/// Process exit code used by the CLI for each category.
int exit_code(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

/// Thrown when a numerical trajectory leaves the finite doubles.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& message, double last_valid_time)
      : Error(ErrorCategory::divergence, message),
        last_valid_time_(last_valid_time) {}

  double last_valid_time() const { return last_valid_time_; }

 private:
  double last_valid_time_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& message) {
  throw Error(category, message);
}

}  // namespace nilmag
