#pragma once

#include <Eigen/Dense>

#include "kickent/common.hpp"
#include "kickent/qdynamics/hilbert.hpp"

namespace kickent {

/// Row-major so the amplitude grid can be handed to FFTW without copying.
using AmplitudeGrid = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Pure two-rotor state in the joint momentum basis: rows index the heavy rotor,
/// columns the light rotor.
class BipartiteState {
 public:
  BipartiteState(HilbertConfig hilbert, AmplitudeGrid amplitudes, long time_step = 0);

  [[nodiscard]] const HilbertConfig& hilbert() const { return hilbert_; }
  [[nodiscard]] const AmplitudeGrid& amplitudes() const { return amplitudes_; }
  AmplitudeGrid& amplitudes() { return amplitudes_; }
  [[nodiscard]] long time_step() const { return time_step_; }
  void set_time_step(long t) { time_step_ = t; }

  [[nodiscard]] double norm_squared() const { return amplitudes_.squaredNorm(); }

  /// Probability in the two outermost momentum rows or columns (union).
  [[nodiscard]] double edge_probability() const;

  /// Probability off the diagonal m_heavy + m_light = total_m.
  [[nodiscard]] double off_block_probability(int total_m) const;

 private:
  HilbertConfig hilbert_;
  AmplitudeGrid amplitudes_;
  long time_step_ = 0;
};

/// Normalized product state at time step 0. Throws ConfigError when a momentum
/// lies outside the basis window or a packet is narrower than one quantum.
BipartiteState init_product_state(const FloquetSpec& spec, const InitialStateSpec& init);

/// Normalized single-rotor Gaussian amplitudes over `d` states starting at
/// quantum number `m_offset`.
Eigen::VectorXcd gaussian_amplitudes(int d, int m_offset, double center_m, double width_m,
                                     double angle);

}  // namespace kickent
