#pragma once

#include <stdexcept>
#include <string>

namespace freqcube {

/// Bad parameters or malformed input. Maps to a usage error in the CLI.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A search or enumeration hit its configured cap before reaching a verdict.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Partial data that is not the restriction of any array with the requested parameters.
class Inconsistent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidArgument(what);
}

}  // namespace detail
}  // namespace freqcube
