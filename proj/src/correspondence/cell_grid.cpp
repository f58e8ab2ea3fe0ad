#include "kickent/correspondence/cell_grid.hpp"

#include <cmath>

namespace kickent {

CellGrid CellGrid::from_hilbert(const HilbertConfig& h) {
  h.validate();
  return CellGrid{h.hbar_eff, h.m_offset_heavy, h.d_heavy};
}

int CellGrid::cell_of(double n) const {
  const double x = std::floor(n / delta_n + 0.5) - m_offset;
  if (!(x >= 0.0) || x >= q) return -1;
  return static_cast<int>(x);
}

}  // namespace kickent
