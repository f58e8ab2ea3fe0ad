#pragma once

#include "kickent/qdynamics/hilbert.hpp"

namespace kickent {

/// Partition of the heavy-momentum axis into Planck cells. Cell j covers
/// [hbar (m_j - 1/2), hbar (m_j + 1/2)) with m_j = m_offset + j, so cells map
/// one-to-one onto heavy basis states. Values on an edge belong to the upper cell.
struct CellGrid {
  double delta_n = 0.0;
  int m_offset = 0;
  int q = 0;

  static CellGrid from_hilbert(const HilbertConfig& h);

  /// Cell index of momentum n, or -1 when n falls outside the window.
  [[nodiscard]] int cell_of(double n) const;
  [[nodiscard]] double lower_edge(int j) const { return delta_n * (m_offset + j - 0.5); }
  [[nodiscard]] double upper_edge(int j) const { return delta_n * (m_offset + j + 0.5); }
};

}  // namespace kickent
