#include "kickent/correspondence/scaling.hpp"

#include "kickent/common.hpp"

namespace kickent {

double detail::scaling_map(double omega, double hbar_ratio) {
  // Written so that a ratio of exactly 1 returns omega bit for bit.
  return omega + (1.0 - hbar_ratio) * (1.0 - omega);
}

double scaling_predict(double omega, double hbar_ratio) {
  if (!(hbar_ratio > 0.0) || hbar_ratio > 1.0) {
    throw UsageError("scaling_predict: hbar ratio must lie in (0, 1]");
  }
  if (!(omega >= 0.0) || omega > 1.0) throw UsageError("scaling_predict: omega must lie in [0, 1]");
  return detail::scaling_map(omega, hbar_ratio);
}

}  // namespace kickent
