#pragma once

#include <stdexcept>

namespace msglance {

/// Malformed or inconsistent input: unreadable files, shape mismatches,
/// parameters outside their documented domain.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation produced non-finite values that no fallback could repair.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace msglance
