// Batch driver: kickent <entropy|sos|scaling|correspond> [--config F] [--out D] [--seed N] [--quiet]
//
// Exit codes: 0 success, 2 configuration error, 3 at least one invalid run,
// 4 output could not be written.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "kickent/harness/config.hpp"
#include "kickent/harness/experiments.hpp"
#include "kickent/harness/output.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInvalid = 3;
constexpr int kExitIo = 4;

struct Options {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

void report_runs(const std::vector<kickent::RunResult>& runs) {
  for (const auto& r : runs) {
    const auto& last = r.records.back();
    std::printf("run %s k=%s hbar=%s steps=%ld omega=%s M=%s tv=%s %s%s\n", r.meta.config_hash.c_str(),
                kickent::format_number(r.meta.k).c_str(), kickent::format_number(r.meta.hbar).c_str(),
                last.step, kickent::format_number(last.omega_heavy).c_str(),
                kickent::format_number(last.mutual_info).c_str(),
                kickent::format_number(last.tv_distance).c_str(), r.meta.valid ? "valid" : "INVALID: ",
                r.meta.invalid_reason.c_str());
  }
}

int execute(kickent::ExperimentKind kind, const Options& opt) {
  kickent::ExperimentConfig config =
      opt.config_path.empty() ? kickent::ExperimentConfig{} : kickent::load_config(opt.config_path);
  config.kind = kind;
  if (opt.seed) config.seed = *opt.seed;
  if (!opt.out_dir.empty()) config.output_dir = opt.out_dir;
  config.validate();

  kickent::OutputBundle bundle;
  bundle.config = config;
  switch (kind) {
    case kickent::ExperimentKind::entropy:
      bundle.runs = kickent::run_entanglement_experiment(config);
      break;
    case kickent::ExperimentKind::sos:
      bundle.sections = kickent::run_sos_experiment(config);
      break;
    case kickent::ExperimentKind::scaling: {
      auto sweep = kickent::run_scaling_sweep(config);
      bundle.runs = std::move(sweep.runs);
      bundle.scaling = std::move(sweep.tables);
      break;
    }
    case kickent::ExperimentKind::correspond: {
      auto result = kickent::run_correspondence(config);
      bundle.runs = std::move(result.runs);
      bundle.correspondence = std::move(result.report);
      break;
    }
  }

  kickent::emit_outputs(bundle, config.output_dir, config.plots);

  if (!opt.quiet) {
    report_runs(bundle.runs);
    for (const auto& s : bundle.sections) {
      std::printf("sos k=%s lyapunov=%s regime=%s\n", kickent::format_number(s.k).c_str(),
                  kickent::format_number(s.lyapunov).c_str(),
                  std::string(kickent::to_string(s.regime)).c_str());
    }
    for (const auto& t : bundle.scaling) {
      std::printf("scaling k=%s hbar %s -> %s sat_rel_err=%s monotone=%d in_domain=%d\n",
                  kickent::format_number(t.k).c_str(), kickent::format_number(t.hbar_coarse).c_str(),
                  kickent::format_number(t.hbar_fine).c_str(),
                  kickent::format_number(t.sat_rel_err).c_str(), t.monotone, t.in_domain);
    }
    if (bundle.correspondence) {
      for (const auto& row : bundle.correspondence->rows) {
        std::printf("correspond k=%s hbar=%s tv_ref=%s offdiag_ref=%s pearson=%s max_gap=%s "
                    "reduced=%s global=%s\n",
                    kickent::format_number(row.k).c_str(), kickent::format_number(row.hbar).c_str(),
                    kickent::format_number(row.tv_reference).c_str(),
                    kickent::format_number(row.offdiag_reference).c_str(),
                    kickent::format_number(row.pearson).c_str(),
                    kickent::format_number(row.max_gap_saturation).c_str(),
                    kickent::format_number(row.reduced_distance_final).c_str(),
                    kickent::format_number(row.global_distance_final).c_str());
      }
    }
    std::printf("outputs written to %s\n", config.output_dir.c_str());
  }

  for (const auto& r : bundle.runs) {
    if (!r.meta.valid) return kExitInvalid;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-rotor kicked entanglement simulator"};
  app.require_subcommand(1);

  Options opt;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Config file (dotted key = value lines)");
    sub->add_option("--out", opt.out_dir, "Output directory (overrides output.dir)");
    sub->add_option("--seed", seed, "Ensemble seed (overrides run.seed)");
    sub->add_flag("--quiet", opt.quiet, "Suppress the summary on stdout");
  };

  struct Sub {
    const char* name;
    const char* help;
    kickent::ExperimentKind kind;
  };
  const Sub subs[] = {
      {"entropy", "Linear entropy and classical mutual information per (k, hbar)",
       kickent::ExperimentKind::entropy},
      {"sos", "Surfaces of section and Lyapunov estimates per k", kickent::ExperimentKind::sos},
      {"scaling", "Scaling-law sweep across hbar", kickent::ExperimentKind::scaling},
      {"correspond", "Quantum-classical correspondence analysis", kickent::ExperimentKind::correspond},
  };
  std::vector<std::pair<CLI::App*, kickent::ExperimentKind>> commands;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub);
    commands.emplace_back(sub, s.kind);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  for (const auto& [sub, kind] : commands) {
    if (!sub->parsed()) continue;
    if (sub->count("--seed") > 0) opt.seed = seed;
    try {
      return execute(kind, opt);
    } catch (const kickent::ConfigError& e) {
      std::cerr << "configuration error: " << e.what() << "\n";
      return kExitConfig;
    } catch (const kickent::IoError& e) {
      std::cerr << "i/o error: " << e.what() << "\n";
      return kExitIo;
    }
  }
  return kExitConfig;
}
