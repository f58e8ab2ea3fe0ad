#include "kickent/cdynamics/ensemble.hpp"

#include <random>
#include <sstream>

#include "kickent/common.hpp"

namespace kickent {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(splitmix64(seed) ^ (stream * kGolden + 0x632BE59BD9B4E019ULL))) {}

CounterRng::result_type CounterRng::operator()() {
  ++counter_;
  return splitmix64(key_ + counter_ * kGolden);
}

Ensemble sample_initial(const InitialStateSpec& init, std::size_t n_traj, double hbar,
                        std::uint64_t seed) {
  if (n_traj == 0) throw ConfigError("n_traj must be at least 1");
  Ensemble e;
  e.points.resize(n_traj);
  e.weights.assign(n_traj, 1.0 / static_cast<double>(n_traj));
  e.seed = seed;
  e.generation_spec = describe(init);

  if (const auto* eig = std::get_if<MomentumEigenstate>(&init)) {
    for (std::size_t t = 0; t < n_traj; ++t) {
      CounterRng rng(seed, t);
      std::uniform_real_distribution<double> angle(0.0, kTwoPi);
      PhasePoint& p = e.points[t];
      p.theta = angle(rng);
      p.phi = angle(rng);
      p.n = eig->n;
      p.l = eig->l;
    }
    return e;
  }

  const auto& w = std::get<Wavepacket>(init);
  if (!(hbar > 0.0) || !(w.width_n > 0.0) || !(w.width_l > 0.0)) {
    throw ConfigError("wavepacket sampling needs positive widths and hbar");
  }
  const double sigma_theta = hbar / (2.0 * w.width_n);
  const double sigma_phi = hbar / (2.0 * w.width_l);
  for (std::size_t t = 0; t < n_traj; ++t) {
    CounterRng rng(seed, t);
    std::normal_distribution<double> gauss(0.0, 1.0);
    PhasePoint& p = e.points[t];
    p.n = w.n + w.width_n * gauss(rng);
    p.l = w.l + w.width_l * gauss(rng);
    p.theta = wrap_angle(w.theta + sigma_theta * gauss(rng));
    p.phi = wrap_angle(w.phi + sigma_phi * gauss(rng));
  }
  return e;
}

void advance(Ensemble& e, const FloquetSpec& spec) {
  for (PhasePoint& p : e.points) p = map_step(p, spec);
}

std::vector<Ensemble> evolve_ensemble(const Ensemble& e, int steps, const FloquetSpec& spec) {
  if (steps < 0) throw UsageError("steps must be non-negative");
  std::vector<Ensemble> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(e);
  for (int s = 0; s < steps; ++s) {
    Ensemble next = out.back();
    advance(next, spec);
    out.push_back(std::move(next));
  }
  return out;
}

}  // namespace kickent
