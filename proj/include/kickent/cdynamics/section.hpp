#pragma once

#include <vector>

#include "kickent/cdynamics/kick_map.hpp"

namespace kickent {

enum class SectionCoordinates {
  absolute,  ///< (theta mod 2π, n)
  relative,  ///< (theta - phi mod 2π, (n - l) / 2)
};

struct SectionPoint {
  double x = 0.0;
  double y = 0.0;
  int trajectory = 0;
};

/// Stroboscopic section recorded immediately after each kick, n_iterations
/// records per initial point, grouped by trajectory.
std::vector<SectionPoint> surface_of_section(const FloquetSpec& spec,
                                             const std::vector<PhasePoint>& initial,
                                             int n_iterations,
                                             SectionCoordinates coords = SectionCoordinates::absolute);

}  // namespace kickent
