#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kickent/harness/config.hpp"
#include "kickent/harness/experiments.hpp"

namespace kickent {

/// Everything one CLI invocation produced.
struct OutputBundle {
  ExperimentConfig config;
  std::vector<RunResult> runs;
  std::vector<SosResult> sections;
  std::vector<ScalingTable> scaling;
  std::optional<CorrespondenceReport> correspondence;
};

/// Column header of the per-run time-series table.
inline constexpr const char* kTimeseriesHeader =
    "step,omega_heavy,omega_light,M,tv_distance,max_offdiag,leak_q,leak_cl,valid";
inline constexpr const char* kSectionHeader = "theta,n";
inline constexpr const char* kScalingHeader =
    "step,omega_coarse,omega_fine_measured,omega_fine_predicted,rel_err";

std::string timeseries_file_name(const RunResult& run);
std::string section_file_name(const SosResult& sos);
std::string scaling_file_name(const ScalingTable& table);

std::string timeseries_csv(const RunResult& run);
std::string section_csv(const SosResult& sos);
std::string scaling_csv(const ScalingTable& table);

/// Line plot of Omega(t) and M(t).
std::string omega_plot_svg(const RunResult& run);

/// Writes every table of the bundle into `dir` (created if missing), then
/// `manifest.json` last. Data files are byte-identical across reruns of the same
/// config; plots and the manifest's wall times are not. Returns the written
/// paths in order. Throws IoError when anything cannot be written.
std::vector<std::filesystem::path> emit_outputs(const OutputBundle& bundle,
                                                const std::filesystem::path& dir, bool plots);

}  // namespace kickent
