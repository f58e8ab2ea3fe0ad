#pragma once

#include <string>
#include <variant>

namespace kickent {

/// Truncated two-rotor momentum basis. Basis index j of a rotor carries momentum
/// hbar_eff * (m_offset + j).
struct HilbertConfig {
  int d_heavy = 0;
  int d_light = 0;
  double hbar_eff = 0.0;
  int m_offset_heavy = 0;
  int m_offset_light = 0;

  /// Both rotors cover the action window [window_min, window_max). Throws
  /// ConfigError unless the window edges and width are integer multiples of hbar.
  static HilbertConfig from_window(double hbar, double window_min, double window_max);

  void validate() const;

  [[nodiscard]] double momentum_heavy(int j) const { return hbar_eff * (m_offset_heavy + j); }
  [[nodiscard]] double momentum_light(int i) const { return hbar_eff * (m_offset_light + i); }
  [[nodiscard]] int index_heavy(int m) const { return m - m_offset_heavy; }
  [[nodiscard]] int index_light(int m) const { return m - m_offset_light; }
};

/// One kick period: free rotation for `tau`, then the contact kick k cos(theta - phi).
struct FloquetSpec {
  double k = 0.0;
  double tau = 1.0;
  double inertia_heavy = 1.0;
  double inertia_light = 1.0;
  HilbertConfig hilbert;

  /// Checks the classical parameters only (the classical map ignores `hilbert`).
  void validate_classical() const;
  void validate() const;
};

/// Product of momentum eigenstates; momenta in action units.
struct MomentumEigenstate {
  double n = 0.0;
  double l = 0.0;
};

/// Product of Gaussian wavepackets. Widths are momentum standard deviations in
/// action units; theta/phi are the angle centres.
struct Wavepacket {
  double n = 0.0;
  double l = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  double width_n = 0.0;
  double width_l = 0.0;
};

using InitialStateSpec = std::variant<MomentumEigenstate, Wavepacket>;

std::string describe(const InitialStateSpec& init);

/// Rounds action `p` to a quantum number, throwing ConfigError if `p` is not an
/// integer multiple of hbar (relative tolerance 1e-9).
int quantum_number(double p, double hbar, const char* what);

}  // namespace kickent
