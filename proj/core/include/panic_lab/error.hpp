#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace panic_lab {

// Bad input data or configuration. The CLI maps this to exit status 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem / stream failure. The CLI maps this to exit status 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Statistics that are undefined at a timestamp (zero dispersion, empty
// trailing window) are carried as quiet NaN and serialized as empty fields.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

}  // namespace panic_lab
