#include "kickent/cdynamics/kick_map.hpp"

#include <cmath>

#include "kickent/common.hpp"

namespace kickent {

PhasePoint map_step(const PhasePoint& p, const FloquetSpec& spec) {
  PhasePoint q;
  q.theta = wrap_angle(p.theta + spec.tau * p.n / spec.inertia_heavy);
  q.phi = wrap_angle(p.phi + spec.tau * p.l / spec.inertia_light);
  const double impulse = spec.k * std::sin(q.theta - q.phi);
  q.n = p.n + impulse;
  q.l = p.l - impulse;
  return q;
}

PhasePoint map_step_inverse(const PhasePoint& p, const FloquetSpec& spec) {
  const double impulse = spec.k * std::sin(p.theta - p.phi);
  PhasePoint q;
  q.n = p.n - impulse;
  q.l = p.l + impulse;
  q.theta = wrap_angle(p.theta - spec.tau * q.n / spec.inertia_heavy);
  q.phi = wrap_angle(p.phi - spec.tau * q.l / spec.inertia_light);
  return q;
}

Eigen::Matrix4d map_jacobian(const PhasePoint& p, const FloquetSpec& spec) {
  const double a = spec.tau / spec.inertia_heavy;
  const double b = spec.tau / spec.inertia_light;
  const double theta = p.theta + a * p.n;
  const double phi = p.phi + b * p.l;
  const double c = spec.k * std::cos(theta - phi);

  Eigen::Matrix4d flight = Eigen::Matrix4d::Identity();
  flight(0, 1) = a;
  flight(2, 3) = b;
  Eigen::Matrix4d kick = Eigen::Matrix4d::Identity();
  kick(1, 0) = c;
  kick(1, 2) = -c;
  kick(3, 0) = -c;
  kick(3, 2) = c;
  return kick * flight;
}

}  // namespace kickent
