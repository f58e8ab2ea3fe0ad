#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kickent/cdynamics/lyapunov.hpp"
#include "kickent/cdynamics/section.hpp"
#include "kickent/common.hpp"
#include "kickent/harness/config.hpp"
#include "kickent/qdynamics/hilbert.hpp"

namespace kickent {

/// Quantities recorded after `step` kicks.
struct StepRecord {
  long step = 0;
  double omega_heavy = 0.0;
  double omega_light = 0.0;
  double mutual_info = 0.0;  ///< M = 1 - sum (p_cl)^2
  double tv_distance = 0.0;
  double max_offdiag = 0.0;
  double leak_q = 0.0;
  double leak_cl = 0.0;
  double norm_error = 0.0;
  bool valid = true;
  ProbabilityVector p;
  ProbabilityVector p_cl;
};

/// Trace distances to the classical density at one step. `global_distance` is
/// NaN when no light family is defined for the initial state.
struct DistanceRecord {
  long step = 0;
  double reduced_distance = 0.0;
  double global_distance = 0.0;
};

struct RunMetadata {
  std::string config_hash;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  bool valid = true;
  std::string invalid_reason;
  double k = 0.0;
  double hbar = 0.0;
  int d_heavy = 0;
  int d_light = 0;
  std::string init;
};

struct RunResult {
  RunMetadata meta;
  std::vector<StepRecord> records;
  std::vector<DistanceRecord> distances;
};

/// Everything one (k, hbar) run needs.
struct RunRequest {
  FloquetSpec spec;
  InitialStateSpec init = MomentumEigenstate{};
  int steps = 0;
  std::uint64_t seed = 0;
  std::size_t n_traj = 1;
  Tolerances tolerances;
  std::vector<int> distance_steps;
  std::string config_hash;
};

/// Evolves the quantum state and the classical ensemble side by side. steps may
/// be 0 (a single record for the initial state).
RunResult run_single(const RunRequest& request);

/// One run per (k, hbar), k-major in config order. Validates the model before any
/// computation; runs execute on up to `config.threads` workers.
std::vector<RunResult> run_entanglement_experiment(const ExperimentConfig& config);

struct SosResult {
  double k = 0.0;
  double lyapunov = 0.0;
  Regime regime = Regime::regular;
  std::string config_hash;
  std::vector<SectionPoint> cloud;
};

/// Initial points of the section: every (theta0, n0) pair with phi = 0, l = -n0.
std::vector<PhasePoint> section_seeds(const ExperimentConfig& config);

/// One section cloud, Lyapunov estimate and regime label per k.
std::vector<SosResult> run_sos_experiment(const ExperimentConfig& config);

struct SectionStats {
  double n_min = 0.0;
  double n_max = 0.0;
  /// Fraction of a bins x bins box grid over the trajectory's bounding box that
  /// contains at least one point: small for invariant curves, large for seas.
  double box_fill = 0.0;
};

SectionStats section_stats(const std::vector<SectionPoint>& cloud, int trajectory, int bins = 32);

struct ScalingRow {
  long step = 0;
  double omega_coarse = 0.0;
  double omega_fine_measured = 0.0;
  double omega_fine_predicted = 0.0;
  double rel_err = 0.0;  ///< |pred - measured| / (1 - measured)
};

struct ScalingTable {
  double k = 0.0;
  double hbar_coarse = 0.0;
  double hbar_fine = 0.0;
  double ratio = 1.0;
  std::vector<ScalingRow> rows;
  double sat_coarse = 0.0;
  double sat_fine_measured = 0.0;
  double sat_fine_predicted = 0.0;
  double sat_rel_err = 0.0;
  bool monotone = false;   ///< sat_fine_measured > sat_coarse
  bool in_domain = true;   ///< false for non-entangling (uncoupled) runs
  std::string coarse_hash;
  std::string fine_hash;
};

/// Index of the first record in the trailing saturation window.
std::size_t saturation_begin(std::size_t n_records, double fraction);

ScalingTable build_scaling_table(const RunResult& coarse, const RunResult& fine,
                                 double saturation_fraction);

struct ScalingSweep {
  std::vector<RunResult> runs;
  std::vector<ScalingTable> tables;
};

/// Runs every hbar (ordered coarse to fine) for each k and tabulates each
/// consecutive pair. Fewer than two hbar values is a ConfigError.
ScalingSweep run_scaling_sweep(const ExperimentConfig& config);

struct CorrespondenceRow {
  double k = 0.0;
  double hbar = 0.0;
  bool valid = true;
  double tv_reference = 0.0;
  double offdiag_reference = 0.0;
  double pearson = 0.0;
  double max_gap_saturation = 0.0;   ///< max |Omega - M| over the saturation window
  double mean_gap_saturation = 0.0;
  double reduced_distance_final = 0.0;
  double global_distance_final = 0.0;
  std::string config_hash;
};

struct CorrespondenceReport {
  int reference_step = 0;
  std::vector<CorrespondenceRow> rows;  ///< per k, hbar coarse to fine
  /// Per k (config order): strict decrease of the reference-step TV and max
  /// off-diagonal across hbar.
  std::vector<bool> tv_monotone;
  std::vector<bool> offdiag_monotone;
};

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y);

CorrespondenceReport analyze_correspondence(const std::vector<RunResult>& runs,
                                            const ExperimentConfig& config);

struct CorrespondenceRun {
  std::vector<RunResult> runs;
  CorrespondenceReport report;
};

/// Runs every (k, hbar), hbar coarse to fine, and analyzes the correspondence.
CorrespondenceRun run_correspondence(const ExperimentConfig& config);

}  // namespace kickent
