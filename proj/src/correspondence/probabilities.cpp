#include "kickent/correspondence/probabilities.hpp"

#include <algorithm>
#include <cmath>

namespace kickent {

CellProbabilities classical_cell_probabilities(const Ensemble& e, const CellGrid& grid) {
  if (e.points.size() != e.weights.size()) throw UsageError("ensemble weights/points mismatch");
  CellProbabilities out;
  out.p.values.assign(static_cast<std::size_t>(grid.q), 0.0);
  if (e.points.empty()) return out;

  const bool uniform = std::all_of(e.weights.begin(), e.weights.end(),
                                   [&](double w) { return w == e.weights.front(); });
  if (uniform) {
    // Integer counts make a single occupied cell come out as exactly 1.
    std::vector<std::size_t> counts(static_cast<std::size_t>(grid.q), 0);
    std::size_t outside = 0;
    for (const PhasePoint& p : e.points) {
      const int cell = grid.cell_of(p.n);
      if (cell < 0) {
        ++outside;
      } else {
        ++counts[static_cast<std::size_t>(cell)];
      }
    }
    double w = e.weights.front() * static_cast<double>(e.points.size());
    if (std::abs(w - 1.0) <= 1e-12) w = 1.0;
    const auto total = static_cast<double>(e.points.size());
    for (std::size_t j = 0; j < counts.size(); ++j) {
      out.p.values[j] = w * (static_cast<double>(counts[j]) / total);
    }
    out.out_of_window = w * (static_cast<double>(outside) / total);
    return out;
  }

  // Serial accumulation in point order keeps the sums bitwise reproducible.
  for (std::size_t t = 0; t < e.points.size(); ++t) {
    const int cell = grid.cell_of(e.points[t].n);
    if (cell < 0) {
      out.out_of_window += e.weights[t];
    } else {
      out.p.values[static_cast<std::size_t>(cell)] += e.weights[t];
    }
  }
  return out;
}

double classical_mutual_information(const ProbabilityVector& p) {
  double sum_sq = 0.0;
  for (double v : p.values) sum_sq += v * v;
  return 1.0 - sum_sq;
}

double distribution_distance(const ProbabilityVector& p, const ProbabilityVector& q) {
  if (p.size() != q.size()) throw UsageError("distribution_distance: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p.values[i] - q.values[i]);
  return 0.5 * sum;
}

}  // namespace kickent
