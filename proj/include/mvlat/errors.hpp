#pragma once

#include <stdexcept>
#include <string>

namespace mvlat {

/// Malformed or out-of-contract input (bad JSON, values off the grid, a
/// non-closed carrier, ...). The CLI maps this to exit code 2.
class input_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A theorem-backed invariant did not hold. Seeing one means a bug, not bad
/// input.
class invariant_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An exhaustive enumeration would exceed its configured size limit.
class size_guard_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mvlat
