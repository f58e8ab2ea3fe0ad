#pragma once

#include <Eigen/Dense>
#include <string_view>

#include "kickent/cdynamics/kick_map.hpp"

namespace kickent {

/// Largest Lyapunov exponent per kick from the tangent map, renormalizing the
/// tangent vector every step. Clamped at zero. Throws UsageError for steps < 1000.
double lyapunov_estimate(const FloquetSpec& spec, const PhasePoint& p0, int steps,
                         const Eigen::Vector4d& tangent0 = Eigen::Vector4d(1.0, 0.5, -0.25, 0.125));

enum class Regime { regular, mixed, chaotic };

struct ChaosThresholds {
  double regular_max = 0.01;
  double chaotic_min = 0.1;
};

Regime classify_regime(double lyapunov, const ChaosThresholds& thresholds = {});
std::string_view to_string(Regime r);

}  // namespace kickent
