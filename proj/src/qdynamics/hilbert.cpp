#include "kickent/qdynamics/hilbert.hpp"

#include <cmath>
#include <sstream>

#include "kickent/common.hpp"

namespace kickent {

double ProbabilityVector::total() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

bool ProbabilityVector::is_normalized(double tol) const {
  for (double v : values) {
    if (v < 0.0) return false;
  }
  return std::abs(total() - 1.0) <= tol;
}

double wrap_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

int quantum_number(double p, double hbar, const char* what) {
  const double m = p / hbar;
  const double rounded = std::round(m);
  if (std::abs(m - rounded) > 1e-9 * std::max(1.0, std::abs(m))) {
    std::ostringstream msg;
    msg << what << " = " << p << " is not an integer multiple of hbar_eff = " << hbar;
    throw ConfigError(msg.str());
  }
  return static_cast<int>(rounded);
}

HilbertConfig HilbertConfig::from_window(double hbar, double window_min, double window_max) {
  if (!(hbar > 0.0)) throw ConfigError("hbar_eff must be positive");
  if (!(window_max > window_min)) throw ConfigError("action window must have positive width");
  HilbertConfig h;
  h.hbar_eff = hbar;
  h.m_offset_heavy = quantum_number(window_min, hbar, "window_min");
  h.m_offset_light = h.m_offset_heavy;
  h.d_heavy = quantum_number(window_max - window_min, hbar, "window width");
  h.d_light = h.d_heavy;
  h.validate();
  return h;
}

void HilbertConfig::validate() const {
  if (d_heavy < 2 || d_light < 2) throw ConfigError("basis dimensions must be at least 2");
  if (!(hbar_eff > 0.0)) throw ConfigError("hbar_eff must be positive");
}

void FloquetSpec::validate_classical() const {
  if (!(k >= 0.0)) throw ConfigError("kick strength k must be non-negative");
  if (!(tau >= 0.0)) throw ConfigError("tau must be non-negative");
  if (!(inertia_heavy > 0.0) || !(inertia_light > 0.0)) {
    throw ConfigError("inertias must be positive");
  }
}

void FloquetSpec::validate() const {
  validate_classical();
  hilbert.validate();
}

std::string describe(const InitialStateSpec& init) {
  std::ostringstream out;
  out.precision(17);
  if (const auto* e = std::get_if<MomentumEigenstate>(&init)) {
    out << "eigenstate(n=" << e->n << ",l=" << e->l << ")";
  } else {
    const auto& w = std::get<Wavepacket>(init);
    out << "wavepacket(n=" << w.n << ",l=" << w.l << ",theta=" << w.theta << ",phi=" << w.phi
        << ",width_n=" << w.width_n << ",width_l=" << w.width_l << ")";
  }
  return out.str();
}

}  // namespace kickent
