#include "kickent/harness/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

#include "kickent/cdynamics/ensemble.hpp"
#include "kickent/correspondence/cell_grid.hpp"
#include "kickent/correspondence/classical_density.hpp"
#include "kickent/correspondence/probabilities.hpp"
#include "kickent/correspondence/scaling.hpp"
#include "kickent/qdynamics/density.hpp"
#include "kickent/qdynamics/propagator.hpp"
#include "kickent/qdynamics/state.hpp"

namespace kickent {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Runs job(i) for i in [0, count) on up to `threads` workers. The first
/// exception (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& job) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string run_hash(const ExperimentConfig& config, double k, double hbar) {
  return hex64(fnv1a64(canonical_run_text(config, k, hbar)));
}

RunRequest make_request(const ExperimentConfig& config, double k, double hbar) {
  RunRequest r;
  r.spec = config.floquet(k, hbar);
  r.init = config.init;
  r.steps = config.steps;
  r.seed = config.seed;
  r.n_traj = config.n_traj;
  r.tolerances = config.tolerances;
  r.distance_steps = {std::min(config.reference_step, config.steps), config.steps};
  r.config_hash = run_hash(config, k, hbar);
  return r;
}

std::vector<double> hbar_coarse_to_fine(const std::vector<double>& hbars) {
  std::vector<double> sorted = hbars;
  std::stable_sort(sorted.begin(), sorted.end(), std::greater<>());
  return sorted;
}

std::vector<RunResult> run_grid(const ExperimentConfig& config, const std::vector<double>& hbars) {
  std::vector<RunRequest> requests;
  for (double k : config.k_values) {
    for (double hbar : hbars) requests.push_back(make_request(config, k, hbar));
  }
  std::vector<RunResult> results(requests.size());
  parallel_for(requests.size(), config.threads,
               [&](std::size_t i) { results[i] = run_single(requests[i]); });
  return results;
}

DistanceRecord distances_at(const BipartiteState& psi, const InitialStateSpec& init,
                            const ProbabilityVector& p_cl) {
  DistanceRecord d;
  d.step = psi.time_step();
  const HilbertConfig& h = psi.hilbert();
  Eigen::VectorXd diag(static_cast<Eigen::Index>(p_cl.size()));
  for (std::size_t i = 0; i < p_cl.size(); ++i) diag(static_cast<Eigen::Index>(i)) = p_cl.values[i];
  const DensityOperator classical_heavy(diag.cast<Complex>().asDiagonal().toDenseMatrix());
  d.reduced_distance = trace_distance(reduced_density(psi, Subsystem::heavy), classical_heavy);
  d.global_distance = kNaN;
  if (const auto* eig = std::get_if<MomentumEigenstate>(&init)) {
    const int total_m = quantum_number(eig->n, h.hbar_eff, "init.n") +
                        quantum_number(eig->l, h.hbar_eff, "init.l");
    try {
      const ClassicalDensity rho_cl = build_rho_cl(p_cl, conservation_light_states(h, total_m));
      d.global_distance = trace_distance(psi, rho_cl);
    } catch (const UsageError&) {
      // Occupied cell whose conserving partner lies outside the light window.
    }
  }
  return d;
}

}  // namespace

RunResult run_single(const RunRequest& request) {
  const auto start = std::chrono::steady_clock::now();
  request.spec.validate();
  if (request.steps < 0) throw ConfigError("steps must be non-negative");

  RunResult result;
  RunMetadata& meta = result.meta;
  meta.config_hash = request.config_hash;
  meta.seed = request.seed;
  meta.k = request.spec.k;
  meta.hbar = request.spec.hilbert.hbar_eff;
  meta.d_heavy = request.spec.hilbert.d_heavy;
  meta.d_light = request.spec.hilbert.d_light;
  meta.init = describe(request.init);

  const FloquetPropagator propagator(request.spec);
  BipartiteState psi = init_product_state(request.spec, request.init);
  Ensemble ensemble = sample_initial(request.init, request.n_traj, meta.hbar, request.seed);
  const CellGrid grid = CellGrid::from_hilbert(request.spec.hilbert);
  const Tolerances& tol = request.tolerances;
  const std::set<int> distance_steps(request.distance_steps.begin(), request.distance_steps.end());

  result.records.reserve(static_cast<std::size_t>(request.steps) + 1);
  for (int t = 0;; ++t) {
    const DensityOperator rho_heavy = reduced_density(psi, Subsystem::heavy);
    const DensityOperator rho_light = reduced_density(psi, Subsystem::light);
    QuantumWeights qw = quantum_weights(rho_heavy);
    CellProbabilities cp = classical_cell_probabilities(ensemble, grid);

    StepRecord rec;
    rec.step = t;
    rec.omega_heavy = linear_entropy(rho_heavy);
    rec.omega_light = linear_entropy(rho_light);
    rec.mutual_info = classical_mutual_information(cp.p);
    rec.tv_distance = distribution_distance(qw.p, cp.p);
    rec.max_offdiag = qw.max_offdiag;
    rec.leak_q = psi.edge_probability();
    rec.leak_cl = cp.out_of_window;
    rec.norm_error = std::abs(psi.norm_squared() - 1.0);

    std::string reason;
    if (rec.leak_q > tol.leak_quantum) reason = "quantum leak";
    else if (rec.leak_cl > tol.leak_classical) reason = "classical leak";
    else if (std::abs(rec.omega_heavy - rec.omega_light) > tol.symmetry) reason = "entropy asymmetry";
    else if (rec.norm_error > tol.norm) reason = "norm drift";
    rec.valid = reason.empty();
    if (!rec.valid && meta.valid) {
      meta.valid = false;
      meta.invalid_reason = reason + " at step " + std::to_string(t);
    }

    if (distance_steps.count(t) != 0) result.distances.push_back(distances_at(psi, request.init, cp.p));

    rec.p = std::move(qw.p);
    rec.p_cl = std::move(cp.p);
    result.records.push_back(std::move(rec));

    if (t == request.steps) break;
    propagator.step(psi);
    advance(ensemble, request.spec);
  }

  meta.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<RunResult> run_entanglement_experiment(const ExperimentConfig& config) {
  config.validate_model();
  return run_grid(config, config.hbar_values);
}

std::vector<PhasePoint> section_seeds(const ExperimentConfig& config) {
  std::vector<PhasePoint> seeds;
  for (double theta : config.sos_seed_theta) {
    for (double n : config.sos_seed_n) seeds.push_back({theta, n, 0.0, -n});
  }
  return seeds;
}

std::vector<SosResult> run_sos_experiment(const ExperimentConfig& config) {
  if (config.k_values.empty()) throw ConfigError("model.k: at least one value required");
  for (double k : config.k_values) {
    FloquetSpec spec = config.floquet(k, config.hbar_values.empty() ? 1.0 : config.hbar_values.front());
    spec.validate_classical();
  }
  if (config.sos_iterations < 1) throw ConfigError("sos.iterations must be >= 1");
  if (config.lyapunov_steps < 1000) throw ConfigError("sos.lyapunov_steps must be >= 1000");

  const std::vector<PhasePoint> seeds = section_seeds(config);
  std::vector<SosResult> out(config.k_values.size());
  parallel_for(out.size(), config.threads, [&](std::size_t i) {
    FloquetSpec spec;
    spec.k = config.k_values[i];
    spec.tau = config.tau;
    spec.inertia_heavy = config.inertia_heavy;
    spec.inertia_light = config.inertia_light;
    SosResult& r = out[i];
    r.k = spec.k;
    r.cloud = surface_of_section(spec, seeds, config.sos_iterations, config.sos_coordinates);
    r.lyapunov = lyapunov_estimate(spec, config.lyapunov_point, config.lyapunov_steps);
    r.regime = classify_regime(r.lyapunov, config.chaos);

    std::string text = "sos\nk=" + format_number(spec.k) + "\ntau=" + format_number(spec.tau) +
                       "\ninertia=" + format_number(spec.inertia_heavy) + "," +
                       format_number(spec.inertia_light) +
                       "\niterations=" + std::to_string(config.sos_iterations) +
                       "\ncoordinates=" +
                       (config.sos_coordinates == SectionCoordinates::absolute ? "absolute" : "relative") +
                       "\nseeds=";
    for (const PhasePoint& p : seeds) text += format_number(p.theta) + ":" + format_number(p.n) + ";";
    r.config_hash = hex64(fnv1a64(text));
  });
  return out;
}

SectionStats section_stats(const std::vector<SectionPoint>& cloud, int trajectory, int bins) {
  SectionStats s;
  std::vector<const SectionPoint*> pts;
  for (const auto& p : cloud) {
    if (p.trajectory == trajectory) pts.push_back(&p);
  }
  if (pts.empty() || bins < 1) return s;
  double x_min = pts.front()->x, x_max = x_min;
  s.n_min = s.n_max = pts.front()->y;
  for (const auto* p : pts) {
    x_min = std::min(x_min, p->x);
    x_max = std::max(x_max, p->x);
    s.n_min = std::min(s.n_min, p->y);
    s.n_max = std::max(s.n_max, p->y);
  }
  const double wx = std::max(x_max - x_min, 1e-300);
  const double wy = std::max(s.n_max - s.n_min, 1e-300);
  std::vector<char> hit(static_cast<std::size_t>(bins) * static_cast<std::size_t>(bins), 0);
  for (const auto* p : pts) {
    const int bx = std::min(bins - 1, static_cast<int>((p->x - x_min) / wx * bins));
    const int by = std::min(bins - 1, static_cast<int>((p->y - s.n_min) / wy * bins));
    hit[static_cast<std::size_t>(by) * static_cast<std::size_t>(bins) + static_cast<std::size_t>(bx)] = 1;
  }
  s.box_fill = static_cast<double>(std::count(hit.begin(), hit.end(), 1)) /
               static_cast<double>(hit.size());
  return s;
}

std::size_t saturation_begin(std::size_t n_records, double fraction) {
  if (n_records == 0) return 0;
  const std::size_t steps = n_records - 1;
  const auto window = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(fraction * static_cast<double>(steps) + 1e-9)));
  return n_records - std::min(window, n_records);
}

ScalingTable build_scaling_table(const RunResult& coarse, const RunResult& fine,
                                 double saturation_fraction) {
  if (coarse.records.size() != fine.records.size()) {
    throw UsageError("scaling table: runs have different lengths");
  }
  ScalingTable t;
  t.k = coarse.meta.k;
  t.hbar_coarse = coarse.meta.hbar;
  t.hbar_fine = fine.meta.hbar;
  t.ratio = t.hbar_fine / t.hbar_coarse;
  t.coarse_hash = coarse.meta.config_hash;
  t.fine_hash = fine.meta.config_hash;

  auto relative = [](double measured, double predicted) {
    const double gap = 1.0 - measured;
    return gap > 0.0 ? std::abs(predicted - measured) / gap : kNaN;
  };

  double max_coarse = 0.0;
  for (std::size_t i = 0; i < coarse.records.size(); ++i) {
    ScalingRow row;
    row.step = coarse.records[i].step;
    row.omega_coarse = coarse.records[i].omega_heavy;
    row.omega_fine_measured = fine.records[i].omega_heavy;
    row.omega_fine_predicted = scaling_predict(std::clamp(row.omega_coarse, 0.0, 1.0), t.ratio);
    row.rel_err = relative(row.omega_fine_measured, row.omega_fine_predicted);
    max_coarse = std::max(max_coarse, row.omega_coarse);
    t.rows.push_back(row);
  }

  const std::size_t begin = saturation_begin(t.rows.size(), saturation_fraction);
  double sum_c = 0.0;
  double sum_f = 0.0;
  for (std::size_t i = begin; i < t.rows.size(); ++i) {
    sum_c += t.rows[i].omega_coarse;
    sum_f += t.rows[i].omega_fine_measured;
  }
  const auto count = static_cast<double>(t.rows.size() - begin);
  t.sat_coarse = sum_c / count;
  t.sat_fine_measured = sum_f / count;
  t.sat_fine_predicted = scaling_predict(std::clamp(t.sat_coarse, 0.0, 1.0), t.ratio);
  t.sat_rel_err = relative(t.sat_fine_measured, t.sat_fine_predicted);
  t.monotone = t.sat_fine_measured > t.sat_coarse;
  t.in_domain = t.k > 0.0 && max_coarse > 1e-8;
  return t;
}

ScalingSweep run_scaling_sweep(const ExperimentConfig& config) {
  if (config.hbar_values.size() < 2) {
    throw ConfigError("scaling sweep needs at least two quantum.hbar_eff values");
  }
  config.validate_model();
  const std::vector<double> hbars = hbar_coarse_to_fine(config.hbar_values);
  ScalingSweep sweep;
  sweep.runs = run_grid(config, hbars);
  for (std::size_t ki = 0; ki < config.k_values.size(); ++ki) {
    for (std::size_t h = 0; h + 1 < hbars.size(); ++h) {
      const std::size_t base = ki * hbars.size();
      sweep.tables.push_back(build_scaling_table(sweep.runs[base + h], sweep.runs[base + h + 1],
                                                 config.saturation_fraction));
    }
  }
  return sweep;
}

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw UsageError("pearson: length mismatch");
  if (x.size() < 2) return kNaN;
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return kNaN;
  return sxy / std::sqrt(sxx * syy);
}

CorrespondenceReport analyze_correspondence(const std::vector<RunResult>& runs,
                                            const ExperimentConfig& config) {
  CorrespondenceReport report;
  report.reference_step = config.reference_step;
  for (const RunResult& run : runs) {
    CorrespondenceRow row;
    row.k = run.meta.k;
    row.hbar = run.meta.hbar;
    row.valid = run.meta.valid;
    row.config_hash = run.meta.config_hash;
    const std::size_t ref =
        std::min<std::size_t>(static_cast<std::size_t>(config.reference_step), run.records.size() - 1);
    row.tv_reference = run.records[ref].tv_distance;
    row.offdiag_reference = run.records[ref].max_offdiag;

    std::vector<double> omega;
    std::vector<double> m;
    for (const auto& r : run.records) {
      omega.push_back(r.omega_heavy);
      m.push_back(r.mutual_info);
    }
    row.pearson = pearson_correlation(omega, m);
    const std::size_t begin = saturation_begin(run.records.size(), config.saturation_fraction);
    double sum = 0.0;
    for (std::size_t i = begin; i < run.records.size(); ++i) {
      const double gap = std::abs(omega[i] - m[i]);
      row.max_gap_saturation = std::max(row.max_gap_saturation, gap);
      sum += gap;
    }
    row.mean_gap_saturation = sum / static_cast<double>(run.records.size() - begin);

    row.reduced_distance_final = kNaN;
    row.global_distance_final = kNaN;
    for (const auto& d : run.distances) {
      if (d.step == run.records.back().step) {
        row.reduced_distance_final = d.reduced_distance;
        row.global_distance_final = d.global_distance;
      }
    }
    report.rows.push_back(row);
  }

  // Rows are grouped per k in config order, hbar coarse to fine within a group.
  const std::size_t per_k = config.hbar_values.size();
  for (std::size_t ki = 0; per_k > 0 && (ki + 1) * per_k <= report.rows.size(); ++ki) {
    bool tv = true;
    bool off = true;
    for (std::size_t h = 1; h < per_k; ++h) {
      const auto& prev = report.rows[ki * per_k + h - 1];
      const auto& cur = report.rows[ki * per_k + h];
      tv = tv && cur.tv_reference < prev.tv_reference;
      off = off && cur.offdiag_reference < prev.offdiag_reference;
    }
    report.tv_monotone.push_back(tv);
    report.offdiag_monotone.push_back(off);
  }
  return report;
}

CorrespondenceRun run_correspondence(const ExperimentConfig& config) {
  config.validate_model();
  CorrespondenceRun out;
  out.runs = run_grid(config, hbar_coarse_to_fine(config.hbar_values));
  out.report = analyze_correspondence(out.runs, config);
  return out;
}

}  // namespace kickent
