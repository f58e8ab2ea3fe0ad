#include "kickent/correspondence/classical_density.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

namespace kickent {

ClassicalDensity::ClassicalDensity(ProbabilityVector weights, Eigen::MatrixXcd light_states)
    : weights_(std::move(weights)), light_states_(std::move(light_states)) {
  if (static_cast<Eigen::Index>(weights_.size()) != light_states_.cols()) {
    throw UsageError("one light state per heavy cell is required");
  }
}

DensityOperator ClassicalDensity::reduced_heavy() const {
  Eigen::VectorXd p(static_cast<Eigen::Index>(weights_.size()));
  for (std::size_t i = 0; i < weights_.size(); ++i) p(static_cast<Eigen::Index>(i)) = weights_.values[i];
  return DensityOperator(p.cast<Complex>().asDiagonal().toDenseMatrix());
}

DensityOperator ClassicalDensity::reduced_light() const {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d_light(), d_light());
  for (Eigen::Index n = 0; n < d_heavy(); ++n) {
    const double w = weights_.values[static_cast<std::size_t>(n)];
    if (w != 0.0) rho += w * light_states_.col(n) * light_states_.col(n).adjoint();
  }
  return DensityOperator(std::move(rho));
}

DensityOperator ClassicalDensity::dense() const {
  const Eigen::Index dl = d_light();
  const Eigen::Index dim = d_heavy() * dl;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index n = 0; n < d_heavy(); ++n) {
    const double w = weights_.values[static_cast<std::size_t>(n)];
    if (w == 0.0) continue;
    rho.block(n * dl, n * dl, dl, dl) = w * light_states_.col(n) * light_states_.col(n).adjoint();
  }
  return DensityOperator(std::move(rho));
}

ClassicalDensity build_rho_cl(const ProbabilityVector& p_cl, const Eigen::MatrixXcd& light_states,
                              double tol) {
  if (static_cast<Eigen::Index>(p_cl.size()) != light_states.cols()) {
    throw UsageError("build_rho_cl: need one light state per cell");
  }
  std::vector<Eigen::Index> occupied;
  for (std::size_t n = 0; n < p_cl.size(); ++n) {
    if (p_cl.values[n] < 0.0) throw UsageError("build_rho_cl: negative weight");
    if (p_cl.values[n] > 0.0) occupied.push_back(static_cast<Eigen::Index>(n));
  }
  Eigen::MatrixXcd used(light_states.rows(), static_cast<Eigen::Index>(occupied.size()));
  for (std::size_t c = 0; c < occupied.size(); ++c) {
    used.col(static_cast<Eigen::Index>(c)) = light_states.col(occupied[c]);
  }
  const Eigen::MatrixXcd gram = used.adjoint() * used;
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(gram.rows(), gram.cols());
  if (gram.size() > 0 && (gram - eye).cwiseAbs().maxCoeff() > tol) {
    throw UsageError("build_rho_cl: light states of occupied cells are not orthonormal");
  }
  return ClassicalDensity(p_cl, light_states);
}

Eigen::MatrixXcd conservation_light_states(const HilbertConfig& h, int total_m) {
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(h.d_light, h.d_heavy);
  for (int n = 0; n < h.d_heavy; ++n) {
    const int i = h.index_light(total_m - (h.m_offset_heavy + n));
    if (i >= 0 && i < h.d_light) f(i, n) = 1.0;
  }
  return f;
}

double trace_distance(const BipartiteState& psi, const ClassicalDensity& rho_cl) {
  const AmplitudeGrid& a = psi.amplitudes();
  if (a.rows() != rho_cl.d_heavy() || a.cols() != rho_cl.d_light()) {
    throw UsageError("trace distance: dimension mismatch");
  }
  std::vector<Eigen::Index> occupied;
  for (Eigen::Index n = 0; n < rho_cl.d_heavy(); ++n) {
    if (rho_cl.weights().values[static_cast<std::size_t>(n)] > 0.0) occupied.push_back(n);
  }
  const auto m = static_cast<Eigen::Index>(occupied.size());

  // Coordinates of psi along the orthonormal product states F_N (x) N, plus the
  // norm of the remainder orthogonal to all of them.
  Eigen::VectorXcd v(m + 1);
  double captured = 0.0;
  for (Eigen::Index c = 0; c < m; ++c) {
    const Eigen::Index n = occupied[static_cast<std::size_t>(c)];
    v(c) = rho_cl.light_states().col(n).dot(a.row(n).transpose());
    captured += std::norm(v(c));
  }
  v(m) = std::sqrt(std::max(0.0, a.squaredNorm() - captured));

  Eigen::MatrixXcd diff = v * v.adjoint();
  for (Eigen::Index c = 0; c < m; ++c) {
    diff(c, c) -= rho_cl.weights().values[static_cast<std::size_t>(occupied[static_cast<std::size_t>(c)])];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

Distinguishability state_distinguishability(const BipartiteState& psi,
                                            const ClassicalDensity& rho_cl) {
  Distinguishability d;
  d.global_distance = trace_distance(psi, rho_cl);
  d.reduced_distance =
      trace_distance(reduced_density(psi, Subsystem::heavy), rho_cl.reduced_heavy());
  return d;
}

}  // namespace kickent
