#pragma once

#include <stdexcept>

namespace nij {

/// Shape, dimension or precondition failure. Law violations are reported, not thrown.
class StructureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A construction produced output that failed its own verification.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace nij
