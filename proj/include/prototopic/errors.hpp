#pragma once

#include <stdexcept>
#include <string>

namespace prototopic {

// Bad configuration, malformed input files, violated preconditions. Exit code 2.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A required input artifact does not exist. Exit code 3.
struct MissingInputError : std::runtime_error {
  explicit MissingInputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values or other numeric breakdown. Exit code 4.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace prototopic
