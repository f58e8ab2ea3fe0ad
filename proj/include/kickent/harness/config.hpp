#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kickent/cdynamics/kick_map.hpp"
#include "kickent/cdynamics/lyapunov.hpp"
#include "kickent/cdynamics/section.hpp"
#include "kickent/qdynamics/hilbert.hpp"

namespace kickent {

enum class ExperimentKind { entropy, sos, scaling, correspond };

ExperimentKind parse_experiment_kind(std::string_view name);
std::string_view to_string(ExperimentKind kind);

/// Per-run validity monitors.
struct Tolerances {
  double norm = 1e-10;            ///< |<psi|psi> - 1|
  double symmetry = 1e-10;        ///< |Omega_heavy - Omega_light|
  double leak_quantum = 1e-6;     ///< probability in the two outermost rows/columns
  double leak_classical = 1e-3;   ///< ensemble weight outside the cell grid
};

/// Thresholds the correspondence analysis reports against.
struct Criteria {
  double pearson_min = 0.9;
  double omega_m_gap_max = 0.05;
  double scaling_rel_err_max = 0.1;
  double reduced_distance_max = 0.05;
  double global_distance_min = 0.5;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::entropy;

  std::vector<double> k_values{1.0};
  double tau = 0.45;
  double inertia_heavy = 1.0;
  double inertia_light = 1.0;

  std::vector<double> hbar_values{1.0 / 16.0};
  double window_min = -4.0;
  double window_max = 4.0;

  InitialStateSpec init = MomentumEigenstate{};

  int steps = 200;
  std::uint64_t seed = 20110;
  std::size_t n_traj = 100000;
  int threads = 1;
  std::string output_dir = "out";
  bool plots = true;

  std::vector<double> sos_seed_theta{0.1, 0.8, 1.6, 2.4, 3.1};
  std::vector<double> sos_seed_n{0.0, 0.3, 0.6, 0.9, 1.2};
  int sos_iterations = 1000;
  SectionCoordinates sos_coordinates = SectionCoordinates::absolute;
  PhasePoint lyapunov_point{0.1, 0.0, 0.0, 0.0};
  int lyapunov_steps = 10000;
  ChaosThresholds chaos;

  /// Pre-saturation comparison time (kicks).
  int reference_step = 8;
  /// Trailing fraction of the run used as the saturation window.
  double saturation_fraction = 0.25;

  Tolerances tolerances;
  Criteria criteria;

  /// Full validation, including steps >= 1. Throws ConfigError.
  void validate() const;
  /// Model-level checks only (k >= 0, integral basis dimensions, valid init).
  void validate_model() const;

  [[nodiscard]] FloquetSpec floquet(double k, double hbar) const;
};

/// Parses `dotted.key = value[, value...]` lines; `#` starts a comment. Unknown
/// keys, malformed values and duplicate keys throw ConfigError.
ExperimentConfig parse_config(std::string_view text);

/// Reads and parses a config file. Throws ConfigError if it cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

/// Canonical text of everything that determines one (k, hbar) run.
std::string canonical_run_text(const ExperimentConfig& config, double k, double hbar);

/// Hash of the whole configuration (every key, including the experiment kind).
std::string experiment_hash(const ExperimentConfig& config);

/// Exact, locale-independent 17-significant-digit rendering.
std::string format_number(double value);

}  // namespace kickent
