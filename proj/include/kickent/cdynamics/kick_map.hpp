#pragma once

#include <Eigen/Dense>

#include "kickent/qdynamics/hilbert.hpp"

namespace kickent {

/// Classical two-rotor phase point; n and l are angular momenta in action units.
struct PhasePoint {
  double theta = 0.0;
  double n = 0.0;
  double phi = 0.0;
  double l = 0.0;
};

/// One kick period of the classical map: free flight for tau, then
/// n += k sin(theta - phi), l -= k sin(theta - phi). Angles are reduced mod 2π.
PhasePoint map_step(const PhasePoint& p, const FloquetSpec& spec);

/// Exact inverse of map_step (undo the kick, then fly backwards).
PhasePoint map_step_inverse(const PhasePoint& p, const FloquetSpec& spec);

/// Jacobian d(theta', n', phi', l') / d(theta, n, phi, l) of map_step at p.
Eigen::Matrix4d map_jacobian(const PhasePoint& p, const FloquetSpec& spec);

}  // namespace kickent
