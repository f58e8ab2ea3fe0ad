#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "kickent/cdynamics/kick_map.hpp"

namespace kickent {

/// Weighted set of classical phase points.
struct Ensemble {
  std::vector<PhasePoint> points;
  std::vector<double> weights;
  std::uint64_t seed = 0;
  std::string generation_spec;

  [[nodiscard]] std::size_t size() const { return points.size(); }
};

/// Counter-based generator: trajectory `stream` of `seed` yields
/// splitmix64(key + counter * golden). Streams are independent of the order in
/// which trajectories are generated.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Classical counterpart of the initial quantum state. For momentum eigenstates
/// the momenta are fixed and both angles uniform on [0, 2π); for wavepackets the
/// momenta are Gaussian with the packet widths and each angle Gaussian with
/// standard deviation hbar / (2 width). Uniform weights. Throws ConfigError when
/// n_traj is 0.
Ensemble sample_initial(const InitialStateSpec& init, std::size_t n_traj, double hbar,
                        std::uint64_t seed);

/// Advances every point by one kick period in place.
void advance(Ensemble& e, const FloquetSpec& spec);

/// Snapshots after 0, 1, ..., steps kicks (steps + 1 ensembles).
std::vector<Ensemble> evolve_ensemble(const Ensemble& e, int steps, const FloquetSpec& spec);

}  // namespace kickent
