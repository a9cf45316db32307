#pragma once

#include <stdexcept>
#include <string>

namespace tokeval {

// Caller misuse: bad arguments, unmet preconditions, contradictory flags.
// The CLI maps this to exit code 1.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent input data (files, model documents, protocol
// responses). The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tokeval
