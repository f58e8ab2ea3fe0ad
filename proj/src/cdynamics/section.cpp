#include "kickent/cdynamics/section.hpp"

#include "kickent/common.hpp"

namespace kickent {

std::vector<SectionPoint> surface_of_section(const FloquetSpec& spec,
                                             const std::vector<PhasePoint>& initial,
                                             int n_iterations, SectionCoordinates coords) {
  if (n_iterations < 0) throw UsageError("n_iterations must be non-negative");
  std::vector<SectionPoint> cloud;
  cloud.reserve(initial.size() * static_cast<std::size_t>(n_iterations));
  for (std::size_t t = 0; t < initial.size(); ++t) {
    PhasePoint p = initial[t];
    for (int it = 0; it < n_iterations; ++it) {
      p = map_step(p, spec);
      SectionPoint s;
      s.trajectory = static_cast<int>(t);
      if (coords == SectionCoordinates::absolute) {
        s.x = p.theta;
        s.y = p.n;
      } else {
        s.x = wrap_angle(p.theta - p.phi);
        s.y = 0.5 * (p.n - p.l);
      }
      cloud.push_back(s);
    }
  }
  return cloud;
}

}  // namespace kickent
