#include "kickent/harness/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

#include "json.hpp"

namespace kickent {

namespace {

using nlohmann::json;

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string join_row(std::initializer_list<std::string> cells) {
  std::string row;
  for (const auto& c : cells) {
    if (!row.empty()) row += ',';
    row += c;
  }
  row += '\n';
  return row;
}

std::string fmt(double v) { return format_number(v); }

/// JSON cannot carry NaN; missing values become null.
json number_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

std::string k_tag(double k) {
  std::string s = format_number(k);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

}  // namespace

std::string timeseries_file_name(const RunResult& run) {
  return "timeseries_" + run.meta.config_hash + ".csv";
}

std::string section_file_name(const SosResult& sos) {
  return "section_k" + k_tag(sos.k) + "_" + sos.config_hash + ".csv";
}

std::string scaling_file_name(const ScalingTable& t) {
  return "scaling_" + t.coarse_hash + "_" + t.fine_hash + ".csv";
}

std::string timeseries_csv(const RunResult& run) {
  std::string s = std::string(kTimeseriesHeader) + "\n";
  for (const auto& r : run.records) {
    s += join_row({std::to_string(r.step), fmt(r.omega_heavy), fmt(r.omega_light), fmt(r.mutual_info),
                   fmt(r.tv_distance), fmt(r.max_offdiag), fmt(r.leak_q), fmt(r.leak_cl),
                   r.valid ? "1" : "0"});
  }
  return s;
}

std::string section_csv(const SosResult& sos) {
  std::string s = std::string(kSectionHeader) + "\n";
  for (const auto& p : sos.cloud) s += join_row({fmt(p.x), fmt(p.y)});
  return s;
}

std::string scaling_csv(const ScalingTable& t) {
  std::string s = std::string(kScalingHeader) + "\n";
  for (const auto& r : t.rows) {
    s += join_row({std::to_string(r.step), fmt(r.omega_coarse), fmt(r.omega_fine_measured),
                   fmt(r.omega_fine_predicted), fmt(r.rel_err)});
  }
  return s;
}

std::string omega_plot_svg(const RunResult& run) {
  constexpr double W = 640, H = 400, L = 60, R = 20, T = 30, B = 50;
  const double steps = std::max<double>(1.0, static_cast<double>(run.records.size() - 1));
  auto px = [&](double step) { return L + (W - L - R) * step / steps; };
  auto py = [&](double v) { return T + (H - T - B) * (1.0 - std::clamp(v, 0.0, 1.0)); };
  auto polyline = [&](auto value, const char* colour) {
    std::string pts;
    for (const auto& r : run.records) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(static_cast<double>(r.step)), py(value(r)));
      pts += buf;
    }
    return "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"" +
           pts + "\"/>\n";
  };
  char header[512];
  std::snprintf(header, sizeof header,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\">\n"
                "<rect x=\"%.0f\" y=\"%.0f\" width=\"%.0f\" height=\"%.0f\" fill=\"white\" stroke=\"black\"/>\n",
                W, H, L, T, W - L - R, H - T - B);
  std::string svg = header;
  svg += "<text x=\"" + fmt(L) + "\" y=\"20\" font-size=\"13\">k = " + fmt(run.meta.k) +
         ", hbar = " + fmt(run.meta.hbar) + (run.meta.valid ? "" : " (invalid)") + "</text>\n";
  svg += "<text x=\"" + fmt(W / 2) + "\" y=\"" + fmt(H - 12) + "\" font-size=\"12\">kicks</text>\n";
  svg += "<text x=\"10\" y=\"" + fmt(T + 10) + "\" font-size=\"12\">1</text>\n";
  svg += "<text x=\"10\" y=\"" + fmt(H - B) + "\" font-size=\"12\">0</text>\n";
  svg += polyline([](const StepRecord& r) { return r.omega_heavy; }, "#1f77b4");
  svg += polyline([](const StepRecord& r) { return r.mutual_info; }, "#d62728");
  svg += "<text x=\"" + fmt(W - 150) + "\" y=\"" + fmt(T + 20) +
         "\" font-size=\"12\" fill=\"#1f77b4\">Omega (linear entropy)</text>\n";
  svg += "<text x=\"" + fmt(W - 150) + "\" y=\"" + fmt(T + 36) +
         "\" font-size=\"12\" fill=\"#d62728\">M (classical)</text>\n";
  svg += "</svg>\n";
  return svg;
}

std::vector<std::filesystem::path> emit_outputs(const OutputBundle& bundle,
                                                const std::filesystem::path& dir, bool plots) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }

  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    written.push_back(dir / name);
    return name;
  };

  const ExperimentConfig& config = bundle.config;
  json manifest;
  manifest["experiment"] = std::string(to_string(config.kind));
  manifest["config_hash"] = experiment_hash(config);
  manifest["seed"] = config.seed;
  manifest["runs"] = json::array();
  manifest["sections"] = json::array();
  manifest["scaling"] = json::array();

  for (const RunResult& run : bundle.runs) {
    json entry;
    entry["config_hash"] = run.meta.config_hash;
    entry["seed"] = run.meta.seed;
    entry["k"] = run.meta.k;
    entry["hbar_eff"] = run.meta.hbar;
    entry["d_heavy"] = run.meta.d_heavy;
    entry["d_light"] = run.meta.d_light;
    entry["init"] = run.meta.init;
    entry["valid"] = run.meta.valid;
    entry["invalid_reason"] = run.meta.invalid_reason;
    entry["wall_seconds"] = run.meta.wall_seconds;
    entry["steps"] = run.records.empty() ? 0 : run.records.back().step;
    entry["timeseries"] = emit(timeseries_file_name(run), timeseries_csv(run));
    json distances = json::array();
    for (const auto& d : run.distances) {
      distances.push_back({{"step", d.step},
                           {"reduced_distance", number_or_null(d.reduced_distance)},
                           {"global_distance", number_or_null(d.global_distance)}});
    }
    entry["distances"] = distances;
    if (plots) {
      const std::string name = "omega_" + run.meta.config_hash + ".svg";
      write_file(dir / name, omega_plot_svg(run));
      entry["plot"] = name;
    }
    manifest["runs"].push_back(entry);
  }

  if (!bundle.sections.empty()) {
    std::string summary = "k,lyapunov,regime,file\n";
    for (const SosResult& sos : bundle.sections) {
      const std::string name = emit(section_file_name(sos), section_csv(sos));
      summary += join_row({fmt(sos.k), fmt(sos.lyapunov), std::string(to_string(sos.regime)), name});
      manifest["sections"].push_back({{"k", sos.k},
                                      {"lyapunov", sos.lyapunov},
                                      {"regime", std::string(to_string(sos.regime))},
                                      {"file", name}});
    }
    emit("sos_summary.csv", summary);
  }

  if (!bundle.scaling.empty()) {
    std::string summary =
        "k,hbar_coarse,hbar_fine,ratio,sat_coarse,sat_fine_measured,sat_fine_predicted,sat_rel_err,"
        "monotone,in_domain,file\n";
    for (const ScalingTable& t : bundle.scaling) {
      const std::string name = emit(scaling_file_name(t), scaling_csv(t));
      summary += join_row({fmt(t.k), fmt(t.hbar_coarse), fmt(t.hbar_fine), fmt(t.ratio),
                           fmt(t.sat_coarse), fmt(t.sat_fine_measured), fmt(t.sat_fine_predicted),
                           fmt(t.sat_rel_err), t.monotone ? "1" : "0", t.in_domain ? "1" : "0", name});
      manifest["scaling"].push_back({{"k", t.k},
                                     {"hbar_coarse", t.hbar_coarse},
                                     {"hbar_fine", t.hbar_fine},
                                     {"sat_rel_err", number_or_null(t.sat_rel_err)},
                                     {"monotone", t.monotone},
                                     {"in_domain", t.in_domain},
                                     {"file", name}});
    }
    emit("scaling_summary.csv", summary);
  }

  if (bundle.correspondence) {
    const CorrespondenceReport& rep = *bundle.correspondence;
    std::string table =
        "k,hbar_eff,valid,tv_reference,offdiag_reference,pearson,max_gap_saturation,"
        "mean_gap_saturation,reduced_distance_final,global_distance_final\n";
    for (const auto& row : rep.rows) {
      table += join_row({fmt(row.k), fmt(row.hbar), row.valid ? "1" : "0", fmt(row.tv_reference),
                         fmt(row.offdiag_reference), fmt(row.pearson), fmt(row.max_gap_saturation),
                         fmt(row.mean_gap_saturation), fmt(row.reduced_distance_final),
                         fmt(row.global_distance_final)});
    }
    manifest["correspondence"] = {{"reference_step", rep.reference_step},
                                  {"file", emit("correspondence.csv", table)},
                                  {"tv_monotone", rep.tv_monotone},
                                  {"offdiag_monotone", rep.offdiag_monotone}};
  }

  manifest["files"] = json::array();
  for (const auto& p : written) manifest["files"].push_back(p.filename().string());
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  written.push_back(dir / "manifest.json");
  return written;
}

}  // namespace kickent
