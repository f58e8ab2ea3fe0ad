#pragma once

#include <Eigen/Dense>

#include "kickent/common.hpp"
#include "kickent/qdynamics/density.hpp"
#include "kickent/qdynamics/state.hpp"

namespace kickent {

/// rho_cl = sum_N p_N |F_N><F_N| (x) |N><N|, stored by its weights and the light
/// family (column N of `light_states` is |F_N> in the light momentum basis).
class ClassicalDensity {
 public:
  ClassicalDensity(ProbabilityVector weights, Eigen::MatrixXcd light_states);

  [[nodiscard]] const ProbabilityVector& weights() const { return weights_; }
  [[nodiscard]] const Eigen::MatrixXcd& light_states() const { return light_states_; }
  [[nodiscard]] Eigen::Index d_heavy() const { return light_states_.cols(); }
  [[nodiscard]] Eigen::Index d_light() const { return light_states_.rows(); }

  /// diag(p) on the heavy factor.
  [[nodiscard]] DensityOperator reduced_heavy() const;
  [[nodiscard]] DensityOperator reduced_light() const;
  /// Full operator on the product space, index heavy * d_light + light.
  [[nodiscard]] DensityOperator dense() const;

 private:
  ProbabilityVector weights_;
  Eigen::MatrixXcd light_states_;
};

/// Builds rho_cl. Throws UsageError when the light states of occupied cells are
/// not orthonormal within `tol` or the sizes disagree.
ClassicalDensity build_rho_cl(const ProbabilityVector& p_cl, const Eigen::MatrixXcd& light_states,
                              double tol = 1e-10);

/// Light family fixed by conservation of m_heavy + m_light = total_m: column N is
/// the light momentum eigenstate |total_m - m_N>, or zero when that state lies
/// outside the light window.
Eigen::MatrixXcd conservation_light_states(const HilbertConfig& h, int total_m);

/// Trace distance between |psi><psi| and rho_cl computed exactly in the subspace
/// spanned by psi and the occupied product states F_N (x) N.
double trace_distance(const BipartiteState& psi, const ClassicalDensity& rho_cl);

/// Global (pure state vs rho_cl) and reduced (heavy factors) trace distances.
Distinguishability state_distinguishability(const BipartiteState& psi,
                                            const ClassicalDensity& rho_cl);

}  // namespace kickent
