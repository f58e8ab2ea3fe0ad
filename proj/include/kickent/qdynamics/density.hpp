#pragma once

#include <Eigen/Dense>
#include <vector>

#include "kickent/common.hpp"
#include "kickent/qdynamics/state.hpp"

namespace kickent {

enum class Subsystem { heavy, light };

/// Hermitian, unit-trace, positive semidefinite operator.
class DensityOperator {
 public:
  explicit DensityOperator(Eigen::MatrixXcd matrix);

  [[nodiscard]] const Eigen::MatrixXcd& matrix() const { return matrix_; }
  [[nodiscard]] Eigen::Index dimension() const { return matrix_.rows(); }
  [[nodiscard]] double purity() const;

  /// Throws UsageError if hermiticity (1e-12), trace (1e-10) or positivity
  /// (eigenvalues >= -1e-10) fail.
  void check_invariants(double herm_tol = 1e-12, double trace_tol = 1e-10,
                        double eig_tol = 1e-10) const;

 private:
  Eigen::MatrixXcd matrix_;
};

DensityOperator reduced_density(const BipartiteState& state, Subsystem keep);

/// 1 - Tr(rho^2).
double linear_entropy(const DensityOperator& rho);

/// Squared singular values of the amplitude grid, descending.
std::vector<double> schmidt_weights(const BipartiteState& state);

struct QuantumWeights {
  ProbabilityVector p;
  double max_offdiag = 0.0;
};

/// Diagonal of the heavy reduced density in the momentum basis, plus the largest
/// off-diagonal magnitude.
QuantumWeights quantum_weights(const DensityOperator& rho_heavy);

/// Half the sum of absolute eigenvalues of a - b. Throws UsageError on dimension mismatch.
double trace_distance(const DensityOperator& a, const DensityOperator& b);

struct Distinguishability {
  double global_distance = 0.0;
  double reduced_distance = 0.0;
};

Distinguishability state_distinguishability(const DensityOperator& rho_full,
                                            const DensityOperator& rho_cl_full,
                                            const DensityOperator& rho_reduced,
                                            const DensityOperator& rho_cl_reduced);

/// |psi><psi| as a dense operator on the d_heavy * d_light product space, index
/// heavy * d_light + light. Only sensible for small bases.
DensityOperator dense_density(const BipartiteState& state);

}  // namespace kickent
