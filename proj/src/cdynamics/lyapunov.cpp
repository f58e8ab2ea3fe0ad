#include "kickent/cdynamics/lyapunov.hpp"

#include <algorithm>
#include <cmath>

#include "kickent/common.hpp"

namespace kickent {

double lyapunov_estimate(const FloquetSpec& spec, const PhasePoint& p0, int steps,
                         const Eigen::Vector4d& tangent0) {
  if (steps < 1000) throw UsageError("lyapunov_estimate needs at least 1000 steps");
  if (!(tangent0.norm() > 0.0)) throw UsageError("tangent vector must be non-zero");
  PhasePoint p = p0;
  Eigen::Vector4d v = tangent0.normalized();
  double log_growth = 0.0;
  for (int s = 0; s < steps; ++s) {
    v = map_jacobian(p, spec) * v;
    const double norm = v.norm();
    log_growth += std::log(norm);
    v /= norm;
    p = map_step(p, spec);
  }
  return std::max(0.0, log_growth / steps);
}

Regime classify_regime(double lyapunov, const ChaosThresholds& thresholds) {
  if (lyapunov <= thresholds.regular_max) return Regime::regular;
  if (lyapunov >= thresholds.chaotic_min) return Regime::chaotic;
  return Regime::mixed;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::regular: return "regular";
    case Regime::mixed: return "mixed";
    case Regime::chaotic: return "chaotic";
  }
  return "unknown";
}

}  // namespace kickent
