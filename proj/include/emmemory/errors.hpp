#pragma once

#include <stdexcept>
#include <string>

namespace emm {

// Categories map one-to-one onto the CLI exit codes.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A physical or structural invariant was violated by the input data
// (e.g. a wave train whose test masses do not return to rest).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical residual exceeded its pinned tolerance.
class ResidualError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace emm
