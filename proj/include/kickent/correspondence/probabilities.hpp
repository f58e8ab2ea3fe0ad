#pragma once

#include "kickent/cdynamics/ensemble.hpp"
#include "kickent/common.hpp"
#include "kickent/correspondence/cell_grid.hpp"

namespace kickent {

struct CellProbabilities {
  ProbabilityVector p;       ///< weight fraction per cell (of the total ensemble weight)
  double out_of_window = 0;  ///< weight whose n lies outside every cell
};

/// Weighted fraction of ensemble points whose heavy momentum falls in each cell.
CellProbabilities classical_cell_probabilities(const Ensemble& e, const CellGrid& grid);

/// M = 1 - sum p^2.
double classical_mutual_information(const ProbabilityVector& p);

/// Total variation distance 1/2 sum |p - q|. Throws UsageError on length mismatch.
double distribution_distance(const ProbabilityVector& p, const ProbabilityVector& q);

}  // namespace kickent
