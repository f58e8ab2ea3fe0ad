#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace kickent {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Invalid experiment or model configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated an operation's preconditions (mismatched dimensions, out-of-domain argument).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Output could not be written (CLI exit code 4).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-negative weights indexed by heavy-momentum basis state / Planck cell.
struct ProbabilityVector {
  std::vector<double> values;

  [[nodiscard]] std::size_t size() const { return values.size(); }
  [[nodiscard]] double total() const;
  [[nodiscard]] bool is_normalized(double tol = 1e-10) const;
};

/// Reduces an angle into [0, 2π).
double wrap_angle(double x);

}  // namespace kickent
