#include "kickent/qdynamics/density.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>

namespace kickent {

DensityOperator::DensityOperator(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw UsageError("density operator must be square");
}

double DensityOperator::purity() const {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return matrix_.squaredNorm();
}

void DensityOperator::check_invariants(double herm_tol, double trace_tol, double eig_tol) const {
  const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > herm_tol) throw UsageError("density operator is not Hermitian");
  if (std::abs(matrix_.trace() - Complex(1.0)) > trace_tol) {
    throw UsageError("density operator trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -eig_tol) {
    throw UsageError("density operator has a negative eigenvalue");
  }
}

DensityOperator reduced_density(const BipartiteState& state, Subsystem keep) {
  const AmplitudeGrid& a = state.amplitudes();
  const Eigen::Index d = keep == Subsystem::heavy ? a.rows() : a.cols();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  // rho_heavy = A A^dagger, rho_light = A^T conj(A); rankUpdate fills the lower triangle.
  if (keep == Subsystem::heavy) {
    rho.selfadjointView<Eigen::Lower>().rankUpdate(a);
  } else {
    rho.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
  }
  rho.triangularView<Eigen::StrictlyUpper>() = rho.adjoint();
  return DensityOperator(std::move(rho));
}

double linear_entropy(const DensityOperator& rho) {
  // Rounding can push the purity of a pure reduced state a few ulps above 1.
  return std::clamp(1.0 - rho.purity(), 0.0, 1.0);
}

std::vector<double> schmidt_weights(const BipartiteState& state) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(Eigen::MatrixXcd(state.amplitudes()));
  const Eigen::VectorXd& s = svd.singularValues();
  std::vector<double> w(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) w[static_cast<std::size_t>(i)] = s(i) * s(i);
  std::sort(w.begin(), w.end(), std::greater<>());
  return w;
}

QuantumWeights quantum_weights(const DensityOperator& rho_heavy) {
  const Eigen::MatrixXcd& m = rho_heavy.matrix();
  QuantumWeights out;
  out.p.values.resize(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out.p.values[static_cast<std::size_t>(i)] = m(i, i).real();
    for (Eigen::Index j = 0; j < i; ++j) out.max_offdiag = std::max(out.max_offdiag, std::abs(m(i, j)));
  }
  return out;
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  if (a.dimension() != b.dimension()) throw UsageError("trace distance: dimension mismatch");
  const Eigen::MatrixXcd diff = a.matrix() - b.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

Distinguishability state_distinguishability(const DensityOperator& rho_full,
                                            const DensityOperator& rho_cl_full,
                                            const DensityOperator& rho_reduced,
                                            const DensityOperator& rho_cl_reduced) {
  return {trace_distance(rho_full, rho_cl_full), trace_distance(rho_reduced, rho_cl_reduced)};
}

DensityOperator dense_density(const BipartiteState& state) {
  const AmplitudeGrid& a = state.amplitudes();
  // Row-major storage already flattens (heavy, light) as heavy * d_light + light.
  const Eigen::Map<const Eigen::VectorXcd> v(a.data(), a.size());
  return DensityOperator(v * v.adjoint());
}

}  // namespace kickent
