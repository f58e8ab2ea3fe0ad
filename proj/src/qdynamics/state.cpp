#include "kickent/qdynamics/state.hpp"

#include <cmath>
#include <sstream>

namespace kickent {

BipartiteState::BipartiteState(HilbertConfig hilbert, AmplitudeGrid amplitudes, long time_step)
    : hilbert_(hilbert), amplitudes_(std::move(amplitudes)), time_step_(time_step) {
  if (amplitudes_.rows() != hilbert_.d_heavy || amplitudes_.cols() != hilbert_.d_light) {
    throw UsageError("amplitude grid does not match the basis dimensions");
  }
}

double BipartiteState::edge_probability() const {
  const int dh = hilbert_.d_heavy;
  const int dl = hilbert_.d_light;
  double sum = 0.0;
  for (int j = 0; j < dh; ++j) {
    const bool edge_row = j < 2 || j >= dh - 2;
    for (int i = 0; i < dl; ++i) {
      if (edge_row || i < 2 || i >= dl - 2) sum += std::norm(amplitudes_(j, i));
    }
  }
  return sum;
}

double BipartiteState::off_block_probability(int total_m) const {
  double sum = 0.0;
  for (int j = 0; j < hilbert_.d_heavy; ++j) {
    for (int i = 0; i < hilbert_.d_light; ++i) {
      const int m = hilbert_.m_offset_heavy + j + hilbert_.m_offset_light + i;
      if (m != total_m) sum += std::norm(amplitudes_(j, i));
    }
  }
  return sum;
}

Eigen::VectorXcd gaussian_amplitudes(int d, int m_offset, double center_m, double width_m,
                                     double angle) {
  Eigen::VectorXcd a(d);
  for (int j = 0; j < d; ++j) {
    const double m = m_offset + j;
    const double x = (m - center_m) / width_m;
    a(j) = std::exp(-0.25 * x * x) * std::polar(1.0, -m * angle);
  }
  return a / a.norm();
}

namespace {

Eigen::VectorXcd basis_vector(int d, int index) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
  v(index) = 1.0;
  return v;
}

int checked_index(int m, int m_offset, int d, const char* rotor) {
  const int index = m - m_offset;
  if (index < 0 || index >= d) {
    std::ostringstream msg;
    msg << rotor << " quantum number " << m << " lies outside the basis window";
    throw ConfigError(msg.str());
  }
  return index;
}

Eigen::VectorXcd packet(int d, int m_offset, double hbar, double center, double width,
                        double angle, const char* rotor) {
  const double width_m = width / hbar;
  if (!(width_m >= 1.0)) {
    std::ostringstream msg;
    msg << rotor << " wavepacket width " << width << " is below one momentum quantum";
    throw ConfigError(msg.str());
  }
  const double center_m = center / hbar;
  if (center_m < m_offset || center_m > m_offset + d - 1) {
    std::ostringstream msg;
    msg << rotor << " wavepacket centre lies outside the basis window";
    throw ConfigError(msg.str());
  }
  return gaussian_amplitudes(d, m_offset, center_m, width_m, angle);
}

}  // namespace

BipartiteState init_product_state(const FloquetSpec& spec, const InitialStateSpec& init) {
  const HilbertConfig& h = spec.hilbert;
  h.validate();
  Eigen::VectorXcd heavy;
  Eigen::VectorXcd light;
  if (const auto* e = std::get_if<MomentumEigenstate>(&init)) {
    const int mh = quantum_number(e->n, h.hbar_eff, "initial heavy momentum");
    const int ml = quantum_number(e->l, h.hbar_eff, "initial light momentum");
    heavy = basis_vector(h.d_heavy, checked_index(mh, h.m_offset_heavy, h.d_heavy, "heavy"));
    light = basis_vector(h.d_light, checked_index(ml, h.m_offset_light, h.d_light, "light"));
  } else {
    const auto& w = std::get<Wavepacket>(init);
    heavy = packet(h.d_heavy, h.m_offset_heavy, h.hbar_eff, w.n, w.width_n, w.theta, "heavy");
    light = packet(h.d_light, h.m_offset_light, h.hbar_eff, w.l, w.width_l, w.phi, "light");
  }
  AmplitudeGrid grid = heavy * light.transpose();
  return BipartiteState(h, std::move(grid), 0);
}

}  // namespace kickent
