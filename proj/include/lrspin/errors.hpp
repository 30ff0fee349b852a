#pragma once

#include <stdexcept>
#include <string>

namespace lrspin {

/// Invalid user input: bad parameters, malformed files, out-of-domain arguments.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation would exceed a hard resource limit (enumeration or search cap).
class ResourceCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lrspin
