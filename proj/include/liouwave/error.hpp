#pragma once

#include <stdexcept>
#include <string>

namespace liouwave {

/// Raised when exponentials of the state leave the representable range.
class DynamicRangeError : public std::runtime_error {
 public:
  DynamicRangeError() : std::runtime_error("state out of dynamic range") {}
  explicit DynamicRangeError(const std::string& what)
      : std::runtime_error("state out of dynamic range: " + what) {}
};

/// Raised by energy routines when the coupling matrix has no inverse or
/// no symmetrizer.
class SingularCouplingError : public std::runtime_error {
 public:
  SingularCouplingError()
      : std::runtime_error("energy undefined for singular coupling") {}
};

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace liouwave
