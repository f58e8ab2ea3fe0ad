#pragma once

#include <memory>

#include "kickent/qdynamics/state.hpp"

namespace kickent {

/// Floquet evolution for a fixed spec. Owns the FFTW plans and the precomputed
/// free-flight and kick phases, and updates states in place.
///
/// The kick is applied in the joint angle representation on the d_heavy x d_light
/// grid theta_a = 2 pi a / d_heavy, phi_b = 2 pi b / d_light with the unitary DFT
/// pair (1/sqrt(d) in both directions). On that grid the kick is a circular
/// convolution in momentum, so m_heavy + m_light is conserved modulo d.
class FloquetPropagator {
 public:
  explicit FloquetPropagator(const FloquetSpec& spec);
  ~FloquetPropagator();
  FloquetPropagator(FloquetPropagator&&) noexcept;
  FloquetPropagator& operator=(FloquetPropagator&&) noexcept;
  FloquetPropagator(const FloquetPropagator&) = delete;
  FloquetPropagator& operator=(const FloquetPropagator&) = delete;

  [[nodiscard]] const FloquetSpec& spec() const { return spec_; }

  /// Multiplies by exp(-i tau_fraction * tau (p_h^2/2I_h + p_l^2/2I_l) / hbar).
  void free(BipartiteState& state, double tau_fraction = 1.0) const;
  void kick(BipartiteState& state) const;
  /// free then kick; increments the time step.
  void step(BipartiteState& state) const;

  /// Unitary transforms between the momentum grid and the joint angle grid.
  void to_angle(AmplitudeGrid& grid) const;
  void to_momentum(AmplitudeGrid& grid) const;

 private:
  struct Plans;

  FloquetSpec spec_;
  Eigen::VectorXcd free_heavy_;
  Eigen::VectorXcd free_light_;
  AmplitudeGrid kick_phase_;
  std::unique_ptr<Plans> plans_;
};

BipartiteState apply_free(const BipartiteState& state, const FloquetSpec& spec);
BipartiteState apply_kick(const BipartiteState& state, const FloquetSpec& spec);
BipartiteState step(const BipartiteState& state, const FloquetSpec& spec);

}  // namespace kickent
