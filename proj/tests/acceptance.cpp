// Acceptance suite. Usage: kickent_acceptance [A1 ... A9]; with no arguments
// every criterion runs. Prints one "A<n> PASS|FAIL ..." line per criterion and
// exits nonzero if any criterion failed.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "kickent/cdynamics/ensemble.hpp"
#include "kickent/cdynamics/kick_map.hpp"
#include "kickent/cdynamics/lyapunov.hpp"
#include "kickent/correspondence/cell_grid.hpp"
#include "kickent/correspondence/probabilities.hpp"
#include "kickent/harness/config.hpp"
#include "kickent/harness/experiments.hpp"
#include "kickent/qdynamics/density.hpp"
#include "kickent/qdynamics/propagator.hpp"
#include "kickent/qdynamics/state.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace kickent;

namespace {

// Pinned thresholds.
constexpr double kProductOmegaMax = 1e-12;
constexpr double kBellOmega = 0.5;
constexpr double kBellTol = 1e-12;
constexpr double kOracleStepTol = 1e-10;
constexpr double kPartialTraceTol = 1e-12;
constexpr double kChaoticLyapunovMin = 0.1;
constexpr double kRegularLyapunovMax = 0.01;
constexpr double kSaturationFluctuationMax = 0.05;
constexpr double kUnitarityTol = 1e-10;
constexpr double kSymmetryTol = 1e-12;
constexpr double kBlockLeakMax = 1e-10;
constexpr double kSymplecticTol = 1e-12;
constexpr double kConservationTol = 1e-12;
constexpr double kNormalizationTol = 1e-12;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
  void num(const std::string& name, double value) {
    detail << " " << name << "=" << format_number(value);
  }
  void text(const std::string& name, const std::string& value) {
    detail << " " << name << "=" << value;
  }
};

ExperimentConfig config_named(const std::string& name) {
  return load_config(fs::path(KICKENT_CONFIG_DIR) / name);
}

double omega(const BipartiteState& s, Subsystem which) {
  return linear_entropy(reduced_density(s, which));
}

BipartiteState product_of(const HilbertConfig& h, const Eigen::VectorXcd& a,
                          const Eigen::VectorXcd& b) {
  AmplitudeGrid g = a * b.transpose();
  g /= g.norm();
  return BipartiteState(h, g, 0);
}

Eigen::VectorXcd random_vector(int d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXcd v(d);
  for (int i = 0; i < d; ++i) v(i) = Complex(n(gen), n(gen));
  return v;
}

void check_all_valid(Outcome& o, const std::vector<RunResult>& runs) {
  for (const auto& r : runs) {
    o.require(r.meta.valid, "run k=" + format_number(r.meta.k) + " hbar=" +
                                format_number(r.meta.hbar) + " invalid: " + r.meta.invalid_reason);
  }
}

// Product states have zero linear entropy; the two-cell Bell state has 1/2.
void a1(Outcome& o) {
  double worst = 0.0;
  for (int d : {4, 16, 64}) {
    const HilbertConfig h = oracle::small_basis(d, 1.0 / 16.0);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const BipartiteState s =
          product_of(h, random_vector(d, seed), random_vector(d, seed + 1000));
      worst = std::max({worst, std::abs(omega(s, Subsystem::heavy)),
                        std::abs(omega(s, Subsystem::light))});
    }
  }
  const FloquetSpec spec = oracle::small_spec(64, 1.0 / 16.0, 1.0);
  worst = std::max(worst, std::abs(omega(init_product_state(spec, MomentumEigenstate{0.5, -0.25}),
                                         Subsystem::heavy)));
  worst = std::max(worst, std::abs(omega(init_product_state(spec, Wavepacket{0.25, 0.0, 1.0, 2.0, 0.3, 0.2}),
                                         Subsystem::heavy)));
  o.num("max_product_omega", worst);
  o.require(worst <= kProductOmegaMax, "product-state entropy");

  const HilbertConfig h = oracle::small_basis(4, 0.25);
  AmplitudeGrid bell = AmplitudeGrid::Zero(4, 4);
  bell(0, 0) = bell(1, 1) = 1.0 / std::sqrt(2.0);
  const BipartiteState s(h, bell, 0);
  const double oh = omega(s, Subsystem::heavy);
  const double ol = omega(s, Subsystem::light);
  o.num("bell_omega", oh);
  o.require(std::abs(oh - kBellOmega) <= kBellTol && std::abs(ol - kBellOmega) <= kBellTol,
            "Bell-state entropy");
}

// Transform-based evolution against the dense Floquet matrix; Eigen partial
// trace against explicit loops.
void a2(Outcome& o) {
  double worst_step = 0.0;
  double worst_trace = 0.0;
  for (int d : {8, 16}) {
    for (double k : {0.3, 1.7}) {
      const FloquetSpec spec = oracle::small_spec(d, 0.25, k);
      const Eigen::MatrixXcd u = oracle::dense_floquet(spec);
      BipartiteState s = oracle::random_state(spec.hilbert, 17u * d + static_cast<unsigned>(10 * k));
      Eigen::VectorXcd v = oracle::flatten(s.amplitudes());
      const FloquetPropagator prop(spec);
      for (int t = 0; t < 20; ++t) {
        prop.step(s);
        v = u * v;
        worst_step = std::max(worst_step, (oracle::flatten(s.amplitudes()) - v).cwiseAbs().maxCoeff());
      }
      const Eigen::MatrixXcd rh = reduced_density(s, Subsystem::heavy).matrix();
      const Eigen::MatrixXcd rl = reduced_density(s, Subsystem::light).matrix();
      worst_trace = std::max(worst_trace, (rh - oracle::naive_rho_heavy(s.amplitudes())).cwiseAbs().maxCoeff());
      worst_trace = std::max(worst_trace, (rl - oracle::naive_rho_light(s.amplitudes())).cwiseAbs().maxCoeff());
    }
  }
  o.num("max_step_error", worst_step);
  o.num("max_partial_trace_error", worst_trace);
  o.require(worst_step <= kOracleStepTol, "Floquet step vs dense oracle");
  o.require(worst_trace <= kPartialTraceTol, "partial trace vs naive contraction");
}

// Saturated entropy follows the scaling formula under hbar halving.
void a3(Outcome& o) {
  const ExperimentConfig c = config_named("scaling.cfg");
  for (double k : c.k_values) {
    const double lambda = lyapunov_estimate(c.floquet(k, c.hbar_values.front()), c.lyapunov_point,
                                            c.lyapunov_steps);
    o.num("lyapunov_k" + format_number(k), lambda);
    o.require(lambda >= kChaoticLyapunovMin, "configuration is not chaotic");
  }
  const ScalingSweep sweep = run_scaling_sweep(c);
  check_all_valid(o, sweep.runs);
  for (const auto& t : sweep.tables) {
    const std::string tag = format_number(t.hbar_coarse) + "->" + format_number(t.hbar_fine);
    o.num("sat_rel_err[" + tag + "]", t.sat_rel_err);
    o.num("sat[" + tag + "]", t.sat_fine_measured);
    o.require(t.in_domain, "table out of domain " + tag);
    o.require(t.sat_rel_err <= c.criteria.scaling_rel_err_max, "scaling relative error " + tag);
    o.require(t.monotone, "entanglement not increasing " + tag);
  }
}

// Pre-saturation convergence of the weights and decay of the coherences.
void a4(Outcome& o) {
  const ExperimentConfig c = config_named("correspond_wavepacket.cfg");
  const CorrespondenceRun r = run_correspondence(c);
  check_all_valid(o, r.runs);
  for (const auto& row : r.report.rows) {
    const std::string h = format_number(row.hbar);
    o.num("tv[" + h + "]", row.tv_reference);
    o.num("offdiag[" + h + "]", row.offdiag_reference);
  }
  for (std::size_t i = 0; i < r.report.tv_monotone.size(); ++i) {
    o.require(r.report.tv_monotone[i], "total variation not decreasing");
    o.require(r.report.offdiag_monotone[i], "off-diagonal not decreasing");
  }
}

CorrespondenceRun finest_correspondence(ExperimentConfig c) {
  c.hbar_values = {*std::min_element(c.hbar_values.begin(), c.hbar_values.end())};
  return run_correspondence(c);
}

// Omega(t) tracks the classical mutual information at the finest resolution.
void a5(Outcome& o) {
  const ExperimentConfig c = config_named("correspond.cfg");
  const CorrespondenceRun r = finest_correspondence(c);
  check_all_valid(o, r.runs);
  for (const auto& row : r.report.rows) {
    o.num("hbar", row.hbar);
    o.num("pearson", row.pearson);
    o.num("max_gap", row.max_gap_saturation);
    o.require(row.pearson >= c.criteria.pearson_min, "Pearson correlation");
    o.require(row.max_gap_saturation <= c.criteria.omega_m_gap_max, "saturation gap");
  }
}

double window_mean(const std::vector<StepRecord>& rec, std::size_t begin) {
  double s = 0.0;
  for (std::size_t i = begin; i < rec.size(); ++i) s += rec[i].omega_heavy;
  return s / static_cast<double>(rec.size() - begin);
}

double window_relative_std(const std::vector<StepRecord>& rec, std::size_t begin) {
  const double mean = window_mean(rec, begin);
  double v = 0.0;
  for (std::size_t i = begin; i < rec.size(); ++i) {
    v += (rec[i].omega_heavy - mean) * (rec[i].omega_heavy - mean);
  }
  return std::sqrt(v / static_cast<double>(rec.size() - begin)) / mean;
}

// Regular and chaotic k found by the classical sweep; entropy curves differ in
// early growth and the chaotic one saturates.
void a6(Outcome& o) {
  const ExperimentConfig sc = config_named("sos.cfg");
  const auto sections = run_sos_experiment(sc);
  std::map<double, Regime> regime;
  bool has_regular = false;
  bool has_chaotic = false;
  for (const auto& s : sections) {
    o.num("lyapunov_k" + format_number(s.k), s.lyapunov);
    o.text("regime_k" + format_number(s.k), std::string(to_string(s.regime)));
    regime[s.k] = s.regime;
    has_regular = has_regular || s.lyapunov <= kRegularLyapunovMax;
    has_chaotic = has_chaotic || s.lyapunov >= kChaoticLyapunovMin;
  }
  o.require(has_regular, "no regular k in sweep");
  o.require(has_chaotic, "no chaotic k in sweep");

  const ExperimentConfig ec = config_named("entropy.cfg");
  const auto runs = run_entanglement_experiment(ec);
  const RunResult* regular = nullptr;
  const RunResult* chaotic = nullptr;
  for (const auto& r : runs) {
    if (!r.meta.valid || !regime.count(r.meta.k)) continue;
    if (regime[r.meta.k] == Regime::regular && !regular) regular = &r;
    if (regime[r.meta.k] == Regime::chaotic && !chaotic) chaotic = &r;
  }
  o.require(regular != nullptr, "no valid regular entropy run");
  o.require(chaotic != nullptr, "no valid chaotic entropy run");
  if (!regular || !chaotic) return;

  const std::size_t begin = saturation_begin(chaotic->records.size(), ec.saturation_fraction);
  const double early_reg = regular->records.at(2).omega_heavy;
  const double early_ch = chaotic->records.at(2).omega_heavy;
  const double sat_reg = window_mean(regular->records, begin);
  const double sat_ch = window_mean(chaotic->records, begin);
  const double fluct = window_relative_std(chaotic->records, begin);
  o.num("omega2_regular", early_reg);
  o.num("omega2_chaotic", early_ch);
  o.num("sat_regular", sat_reg);
  o.num("sat_chaotic", sat_ch);
  o.num("chaotic_sat_rel_std", fluct);
  o.require(early_ch > early_reg, "chaotic growth not faster");
  o.require(sat_ch > sat_reg, "chaotic saturation not above regular");
  o.require(fluct <= kSaturationFluctuationMax, "chaotic curve does not saturate");
}

// Reduced states indistinguishable, global states distinguishable.
void a7(Outcome& o) {
  const ExperimentConfig c = config_named("correspond.cfg");
  const CorrespondenceRun r = finest_correspondence(c);
  check_all_valid(o, r.runs);
  for (const auto& row : r.report.rows) {
    o.num("hbar", row.hbar);
    o.num("reduced_distance", row.reduced_distance_final);
    o.num("global_distance", row.global_distance_final);
    o.require(row.reduced_distance_final <= c.criteria.reduced_distance_max, "reduced distance");
    o.require(row.global_distance_final >= c.criteria.global_distance_min, "global distance");
  }
}

// Invariants of both dynamics and of the probability bookkeeping.
void a8(Outcome& o) {
  const FloquetSpec spec = ExperimentConfig{}.floquet(1.0, 1.0 / 16.0);
  const FloquetPropagator prop(spec);

  BipartiteState random = oracle::random_state(spec.hilbert, 99);
  double norm_drift = 0.0;
  double asym = 0.0;
  for (int t = 0; t < 200; ++t) {
    prop.step(random);
    norm_drift = std::max(norm_drift, std::abs(random.norm_squared() - 1.0));
    if (t % 20 == 0) {
      asym = std::max(asym, std::abs(omega(random, Subsystem::heavy) - omega(random, Subsystem::light)));
    }
  }
  o.num("norm_drift", norm_drift);
  o.num("entropy_asymmetry", asym);
  o.require(norm_drift <= kUnitarityTol, "unitarity");
  o.require(asym <= kSymmetryTol, "entropy symmetry");

  BipartiteState eig = init_product_state(spec, MomentumEigenstate{0.0, 0.0});
  double off_block = 0.0;
  double weight_err = 0.0;
  for (int t = 0; t < 100; ++t) {
    prop.step(eig);
    off_block = std::max(off_block, eig.off_block_probability(0));
    const DensityOperator rh = reduced_density(eig, Subsystem::heavy);
    rh.check_invariants();
    weight_err = std::max(weight_err, std::abs(quantum_weights(rh).p.total() - 1.0));
  }
  o.num("off_block_probability", off_block);
  o.require(off_block <= kBlockLeakMax, "block conservation");

  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  std::uniform_real_distribution<double> mom(-2.0, 2.0);
  Eigen::Matrix4d j_form = Eigen::Matrix4d::Zero();
  j_form(0, 1) = j_form(2, 3) = 1.0;
  j_form(1, 0) = j_form(3, 2) = -1.0;
  double symp = 0.0;
  for (int i = 0; i < 200; ++i) {
    const PhasePoint p{ang(gen), mom(gen), ang(gen), mom(gen)};
    const Eigen::Matrix4d m = map_jacobian(p, spec);
    symp = std::max(symp, (m.transpose() * j_form * m - j_form).cwiseAbs().maxCoeff());
  }
  o.num("symplectic_error", symp);
  o.require(symp <= kSymplecticTol, "symplecticity");

  Ensemble e = sample_initial(Wavepacket{0.0, 0.0, 0.1, 0.0, 0.25, 0.25}, 20000, 1.0 / 16.0, 7);
  std::vector<double> total(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) total[i] = e.points[i].n + e.points[i].l;
  const CellGrid grid = CellGrid::from_hilbert(spec.hilbert);
  double cons = 0.0;
  for (int t = 0; t < 100; ++t) {
    advance(e, spec);
    for (std::size_t i = 0; i < e.size(); ++i) {
      cons = std::max(cons, std::abs(e.points[i].n + e.points[i].l - total[i]));
    }
    const CellProbabilities cp = classical_cell_probabilities(e, grid);
    weight_err = std::max(weight_err, std::abs(cp.p.total() + cp.out_of_window - 1.0));
  }
  o.num("n_plus_l_drift", cons);
  o.num("normalization_error", weight_err);
  o.require(cons <= kConservationTol, "n + l conservation");
  o.require(weight_err <= kNormalizationTol, "probability normalization");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(KICKENT_BINARY) + " " + args + " --quiet > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Every data file of a rerun, serial or threaded, matches byte for byte.
void a9(Outcome& o) {
  const fs::path root = fs::temp_directory_path() / "kickent_acceptance_a9";
  fs::remove_all(root);
  fs::create_directories(root);

  std::string text = slurp(fs::path(KICKENT_CONFIG_DIR) / "entropy.cfg");
  const std::string serial = "run.threads = 1";
  const auto pos = text.find(serial);
  o.require(pos != std::string::npos, "entropy.cfg lacks run.threads");
  if (pos == std::string::npos) return;
  std::ofstream(root / "threaded.cfg") << text.replace(pos, serial.size(), "run.threads = 3");

  struct Job {
    std::string command;
    std::string config;
  };
  const std::vector<Job> jobs = {
      {"entropy", (fs::path(KICKENT_CONFIG_DIR) / "entropy.cfg").string()},
      {"sos", (fs::path(KICKENT_CONFIG_DIR) / "sos.cfg").string()},
  };
  int compared = 0;
  for (const auto& job : jobs) {
    std::vector<fs::path> dirs = {root / (job.command + "_a"), root / (job.command + "_b")};
    std::vector<std::string> configs = {job.config, job.config};
    if (job.command == "entropy") {
      dirs.push_back(root / "entropy_threaded");
      configs.push_back((root / "threaded.cfg").string());
    }
    int first_code = -1;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      const int code = run_cli(job.command + " --config " + configs[i] + " --out " + dirs[i].string());
      if (i == 0) first_code = code;
      o.require(code == first_code && (code == 0 || code == 3), job.command + " exit code");
    }
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      if (entry.path().extension() != ".csv") continue;
      for (std::size_t i = 1; i < dirs.size(); ++i) {
        const fs::path other = dirs[i] / entry.path().filename();
        o.require(fs::exists(other) && slurp(entry.path()) == slurp(other),
                  "differs: " + entry.path().filename().string());
      }
      ++compared;
    }
  }
  o.num("data_files_compared", compared);
  o.require(compared > 0, "no data files");
}

const std::map<std::string, std::function<void(Outcome&)>>& criteria() {
  static const std::map<std::string, std::function<void(Outcome&)>> table = {
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
      {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9},
  };
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> ids;
  for (int i = 1; i < argc; ++i) ids.emplace_back(argv[i]);
  if (ids.empty()) {
    for (const auto& [id, fn] : criteria()) ids.push_back(id);
  }
  bool all = true;
  for (const auto& id : ids) {
    const auto it = criteria().find(id);
    if (it == criteria().end()) {
      std::fprintf(stderr, "unknown criterion %s\n", id.c_str());
      return 2;
    }
    Outcome o;
    try {
      it->second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %s%s\n", id.c_str(), o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
