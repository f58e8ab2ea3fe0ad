#include "kickent/qdynamics/propagator.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace kickent {

namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(AmplitudeGrid& grid) {
  return reinterpret_cast<fftw_complex*>(grid.data());
}

Eigen::VectorXcd offset_phases(int d, int m_offset, double sign) {
  Eigen::VectorXcd v(d);
  for (int a = 0; a < d; ++a) v(a) = std::polar(1.0, sign * m_offset * kTwoPi * a / d);
  return v;
}

}  // namespace

struct FloquetPropagator::Plans {
  fftw_plan forward = nullptr;   // exp(-i ...): angle -> momentum
  fftw_plan backward = nullptr;  // exp(+i ...): momentum -> angle

  Plans(int dh, int dl) {
    AmplitudeGrid scratch(dh, dl);
    std::lock_guard<std::mutex> lock(planner_mutex());
    // FFTW_ESTIMATE keeps the algorithm choice, and hence the rounding, identical across runs.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward = fftw_plan_dft_2d(dh, dl, as_fftw(scratch), as_fftw(scratch), FFTW_FORWARD, flags);
    backward = fftw_plan_dft_2d(dh, dl, as_fftw(scratch), as_fftw(scratch), FFTW_BACKWARD, flags);
  }
  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
};

FloquetPropagator::FloquetPropagator(const FloquetSpec& spec) : spec_(spec) {
  spec_.validate();
  const HilbertConfig& h = spec_.hilbert;
  free_heavy_.resize(h.d_heavy);
  free_light_.resize(h.d_light);
  for (int j = 0; j < h.d_heavy; ++j) {
    const double m = h.m_offset_heavy + j;
    free_heavy_(j) = std::polar(1.0, -spec_.tau * h.hbar_eff * m * m / (2.0 * spec_.inertia_heavy));
  }
  for (int i = 0; i < h.d_light; ++i) {
    const double m = h.m_offset_light + i;
    free_light_(i) = std::polar(1.0, -spec_.tau * h.hbar_eff * m * m / (2.0 * spec_.inertia_light));
  }
  // The 1/(d_h d_l) of the two unnormalized transforms is folded into the kick phase.
  const double norm = 1.0 / (static_cast<double>(h.d_heavy) * h.d_light);
  kick_phase_.resize(h.d_heavy, h.d_light);
  for (int a = 0; a < h.d_heavy; ++a) {
    const double theta = kTwoPi * a / h.d_heavy;
    for (int b = 0; b < h.d_light; ++b) {
      const double phi = kTwoPi * b / h.d_light;
      kick_phase_(a, b) = norm * std::polar(1.0, -spec_.k * std::cos(theta - phi) / h.hbar_eff);
    }
  }
  plans_ = std::make_unique<Plans>(h.d_heavy, h.d_light);
}

FloquetPropagator::~FloquetPropagator() = default;
FloquetPropagator::FloquetPropagator(FloquetPropagator&&) noexcept = default;
FloquetPropagator& FloquetPropagator::operator=(FloquetPropagator&&) noexcept = default;

namespace {

void check_shape(const BipartiteState& state, const HilbertConfig& h) {
  if (state.amplitudes().rows() != h.d_heavy || state.amplitudes().cols() != h.d_light) {
    throw UsageError("state basis does not match the propagator basis");
  }
}

}  // namespace

void FloquetPropagator::free(BipartiteState& state, double tau_fraction) const {
  check_shape(state, spec_.hilbert);
  AmplitudeGrid& a = state.amplitudes();
  if (tau_fraction == 1.0) {
    for (Eigen::Index j = 0; j < a.rows(); ++j) {
      a.row(j) = (a.row(j).array() * free_heavy_(j) * free_light_.transpose().array()).matrix();
    }
    return;
  }
  const HilbertConfig& h = spec_.hilbert;
  const double scale = tau_fraction * spec_.tau * h.hbar_eff;
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    const double mh = h.m_offset_heavy + static_cast<double>(j);
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
      const double ml = h.m_offset_light + static_cast<double>(i);
      const double energy =
          mh * mh / (2.0 * spec_.inertia_heavy) + ml * ml / (2.0 * spec_.inertia_light);
      a(j, i) *= std::polar(1.0, -scale * energy);
    }
  }
}

void FloquetPropagator::kick(BipartiteState& state) const {
  check_shape(state, spec_.hilbert);
  if (spec_.k == 0.0) return;
  AmplitudeGrid& a = state.amplitudes();
  fftw_execute_dft(plans_->backward, as_fftw(a), as_fftw(a));
  a.array() *= kick_phase_.array();
  fftw_execute_dft(plans_->forward, as_fftw(a), as_fftw(a));
}

void FloquetPropagator::step(BipartiteState& state) const {
  free(state);
  kick(state);
  state.set_time_step(state.time_step() + 1);
}

void FloquetPropagator::to_angle(AmplitudeGrid& grid) const {
  const HilbertConfig& h = spec_.hilbert;
  fftw_execute_dft(plans_->backward, as_fftw(grid), as_fftw(grid));
  const Eigen::VectorXcd ph = offset_phases(h.d_heavy, h.m_offset_heavy, +1.0);
  const Eigen::VectorXcd pl = offset_phases(h.d_light, h.m_offset_light, +1.0);
  const double norm = 1.0 / std::sqrt(static_cast<double>(h.d_heavy) * h.d_light);
  grid = (norm * (ph * pl.transpose())).cwiseProduct(grid);
}

void FloquetPropagator::to_momentum(AmplitudeGrid& grid) const {
  const HilbertConfig& h = spec_.hilbert;
  const Eigen::VectorXcd ph = offset_phases(h.d_heavy, h.m_offset_heavy, -1.0);
  const Eigen::VectorXcd pl = offset_phases(h.d_light, h.m_offset_light, -1.0);
  const double norm = 1.0 / std::sqrt(static_cast<double>(h.d_heavy) * h.d_light);
  grid = (norm * (ph * pl.transpose())).cwiseProduct(grid);
  fftw_execute_dft(plans_->forward, as_fftw(grid), as_fftw(grid));
}

BipartiteState apply_free(const BipartiteState& state, const FloquetSpec& spec) {
  BipartiteState out = state;
  FloquetPropagator(spec).free(out);
  return out;
}

BipartiteState apply_kick(const BipartiteState& state, const FloquetSpec& spec) {
  BipartiteState out = state;
  FloquetPropagator(spec).kick(out);
  return out;
}

BipartiteState step(const BipartiteState& state, const FloquetSpec& spec) {
  BipartiteState out = state;
  FloquetPropagator(spec).step(out);
  return out;
}

}  // namespace kickent
