#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "kickent/cdynamics/ensemble.hpp"
#include "kickent/cdynamics/kick_map.hpp"
#include "kickent/cdynamics/lyapunov.hpp"
#include "kickent/cdynamics/section.hpp"
#include "kickent/harness/experiments.hpp"
#include "oracles.hpp"

using namespace kickent;

namespace {

FloquetSpec classical(double k, double tau = 0.45, double ih = 1.0, double il = 1.0) {
  FloquetSpec s;
  s.k = k;
  s.tau = tau;
  s.inertia_heavy = ih;
  s.inertia_light = il;
  return s;
}

// Chi-square with 63 degrees of freedom at the one-sided 4-sigma tail
// (p = 3.167e-5): scipy.stats.chi2.isf(norm.sf(4), 63).
constexpr double kChi2Crit63 = 118.1951152019934;

double chi_square_uniform(const std::vector<double>& angles, int bins) {
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  for (double a : angles) {
    const int b = std::min(bins - 1, static_cast<int>(a / (2.0 * M_PI) * bins));
    counts[static_cast<std::size_t>(b)] += 1.0;
  }
  const double expected = static_cast<double>(angles.size()) / bins;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  return chi2;
}

}  // namespace

TEST(MapStep, ZeroKickIsIntegrableShear) {
  const FloquetSpec spec = classical(0.0, 0.7, 1.0, 0.5);
  const PhasePoint p{1.0, 0.3, 2.0, -0.1};
  const PhasePoint q = map_step(p, spec);
  EXPECT_EQ(q.n, p.n);
  EXPECT_EQ(q.l, p.l);
  EXPECT_NEAR(q.theta, 1.0 + 0.7 * 0.3, 1e-15);
  EXPECT_NEAR(q.phi, 2.0 - 0.7 * 0.1 / 0.5, 1e-15);
}

TEST(MapStep, AlignedAnglesReceiveNoKick) {
  const FloquetSpec spec = classical(3.0, 1.0);
  // Equal angular velocities keep theta - phi = 0 through the flight.
  const PhasePoint q = map_step({0.4, 0.2, 0.4, 0.2}, spec);
  EXPECT_DOUBLE_EQ(q.n, 0.2);
  EXPECT_DOUBLE_EQ(q.l, 0.2);
}

TEST(MapStep, GenericPointMatchesHighPrecisionValues) {
  // Reference from a 40-digit mpmath evaluation of the two-line map.
  const PhasePoint q = map_step({1.0, 0.3, 2.0, -0.1}, classical(1.0, 1.0));
  EXPECT_NEAR(q.theta, 1.3, 1e-15);
  EXPECT_NEAR(q.phi, 1.9, 1e-15);
  EXPECT_NEAR(q.n, -0.2646424733950353572, 1e-15);
  EXPECT_NEAR(q.l, 0.4646424733950353572, 1e-15);
}

TEST(MapStep, AnglesAreReduced) {
  const PhasePoint q = map_step({6.0, 3.0, 0.1, -4.0}, classical(0.5, 1.0));
  EXPECT_GE(q.theta, 0.0);
  EXPECT_LT(q.theta, 2.0 * M_PI);
  EXPECT_GE(q.phi, 0.0);
  EXPECT_LT(q.phi, 2.0 * M_PI);
}

TEST(MapStep, IndependentOfHbar) {
  FloquetSpec a = classical(1.0);
  FloquetSpec b = a;
  a.hilbert = oracle::small_basis(8, 0.25);
  b.hilbert = oracle::small_basis(512, 1.0 / 64.0);
  const PhasePoint p{0.3, 0.7, 5.0, -1.2};
  const PhasePoint qa = map_step(p, a);
  const PhasePoint qb = map_step(p, b);
  EXPECT_EQ(qa.theta, qb.theta);
  EXPECT_EQ(qa.n, qb.n);
  EXPECT_EQ(qa.phi, qb.phi);
  EXPECT_EQ(qa.l, qb.l);
  EXPECT_EQ(lyapunov_estimate(a, p, 2000), lyapunov_estimate(b, p, 2000));
}

TEST(MapStep, SymplecticAtRandomPoints) {
  const FloquetSpec spec = classical(2.3, 0.8, 1.0, 0.4);
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> mom(-3.0, 3.0);
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    const PhasePoint p{angle(gen), mom(gen), angle(gen), mom(gen)};
    // Central finite differences, angle components unwrapped.
    Eigen::Matrix4d fd;
    for (int c = 0; c < 4; ++c) {
      PhasePoint plus = p;
      PhasePoint minus = p;
      double* fp[] = {&plus.theta, &plus.n, &plus.phi, &plus.l};
      double* fm[] = {&minus.theta, &minus.n, &minus.phi, &minus.l};
      *fp[c] += h;
      *fm[c] -= h;
      const PhasePoint a = map_step(plus, spec);
      const PhasePoint b = map_step(minus, spec);
      fd(0, c) = oracle::angle_diff(a.theta, b.theta) / (2 * h);
      fd(1, c) = (a.n - b.n) / (2 * h);
      fd(2, c) = oracle::angle_diff(a.phi, b.phi) / (2 * h);
      fd(3, c) = (a.l - b.l) / (2 * h);
    }
    EXPECT_NEAR(fd.determinant(), 1.0, 1e-8);
    EXPECT_LE((fd - map_jacobian(p, spec)).cwiseAbs().maxCoeff(), 1e-7);
    EXPECT_NEAR(map_jacobian(p, spec).determinant(), 1.0, 1e-12);
  }
}

TEST(MapStep, ConservesTotalMomentum) {
  const FloquetSpec spec = classical(10.0);
  PhasePoint p{0.1, 0.4, 2.0, -1.1};
  const double total = p.n + p.l;
  for (int t = 0; t < 1000; ++t) {
    p = map_step(p, spec);
    ASSERT_LE(std::abs(p.n + p.l - total), 1e-9);
  }
}

TEST(MapStep, InverseReturnsInitialPoint) {
  const FloquetSpec spec = classical(1.0);
  const PhasePoint start{0.1, 0.0, 0.0, 0.0};
  PhasePoint p = start;
  for (int t = 0; t < 100; ++t) p = map_step(p, spec);
  for (int t = 0; t < 100; ++t) p = map_step_inverse(p, spec);
  EXPECT_LE(std::abs(oracle::angle_diff(p.theta, start.theta)), 1e-6);
  EXPECT_LE(std::abs(p.n - start.n), 1e-6);
  EXPECT_LE(std::abs(oracle::angle_diff(p.phi, start.phi)), 1e-6);
  EXPECT_LE(std::abs(p.l - start.l), 1e-6);
}

TEST(SampleInitial, EigenstateFixesMomenta) {
  const Ensemble e = sample_initial(MomentumEigenstate{0.25, -0.5}, 1000, 0.125, 3);
  ASSERT_EQ(e.size(), 1000u);
  double wsum = 0.0;
  for (std::size_t t = 0; t < e.size(); ++t) {
    EXPECT_EQ(e.points[t].n, 0.25);
    EXPECT_EQ(e.points[t].l, -0.5);
    wsum += e.weights[t];
  }
  EXPECT_NEAR(wsum, 1.0, 1e-12);
}

TEST(SampleInitial, EigenstateAnglesAreUniform) {
  const Ensemble e = sample_initial(MomentumEigenstate{0.0, 0.0}, 100000, 0.0625, 20110);
  std::vector<double> theta;
  std::vector<double> phi;
  for (const auto& p : e.points) {
    ASSERT_GE(p.theta, 0.0);
    ASSERT_LT(p.theta, 2.0 * M_PI);
    theta.push_back(p.theta);
    phi.push_back(p.phi);
  }
  EXPECT_LT(chi_square_uniform(theta, 64), kChi2Crit63);
  EXPECT_LT(chi_square_uniform(phi, 64), kChi2Crit63);
}

TEST(SampleInitial, WavepacketMomentsWithinStandardError) {
  const Wavepacket w{0.5, -0.25, 1.0, 2.0, 0.2, 0.3};
  const std::size_t n = 100000;
  const Ensemble e = sample_initial(w, n, 1.0 / 32.0, 99);
  double mn = 0.0, ml = 0.0, mt = 0.0;
  for (const auto& p : e.points) {
    mn += p.n;
    ml += p.l;
    mt += p.theta;
  }
  mn /= n;
  ml /= n;
  mt /= n;
  double vn = 0.0, vl = 0.0, vt = 0.0;
  for (const auto& p : e.points) {
    vn += (p.n - mn) * (p.n - mn);
    vl += (p.l - ml) * (p.l - ml);
    vt += (p.theta - mt) * (p.theta - mt);
  }
  vn /= n - 1;
  vl /= n - 1;
  vt /= n - 1;
  const double rn = std::sqrt(static_cast<double>(n));
  EXPECT_LE(std::abs(mn - 0.5), 4 * 0.2 / rn);
  EXPECT_LE(std::abs(ml + 0.25), 4 * 0.3 / rn);
  // Var of the sample variance of a Gaussian: 2 sigma^4 / (n - 1).
  EXPECT_LE(std::abs(vn - 0.04), 4 * std::sqrt(2.0 / (n - 1)) * 0.04);
  EXPECT_LE(std::abs(vl - 0.09), 4 * std::sqrt(2.0 / (n - 1)) * 0.09);
  const double st = (1.0 / 32.0) / (2 * 0.2);
  EXPECT_LE(std::abs(mt - 1.0), 4 * st / rn);
  EXPECT_LE(std::abs(vt - st * st), 4 * std::sqrt(2.0 / (n - 1)) * st * st);
}

TEST(SampleInitial, ZeroTrajectoriesIsConfigError) {
  EXPECT_THROW(sample_initial(MomentumEigenstate{}, 0, 0.1, 1), ConfigError);
}

TEST(SampleInitial, DeterministicAndOrderIndependent) {
  const Wavepacket w{0.0, 0.0, 0.1, 0.0, 0.25, 0.25};
  const Ensemble a = sample_initial(w, 100, 0.0625, 5);
  const Ensemble b = sample_initial(w, 100, 0.0625, 5);
  const Ensemble prefix = sample_initial(w, 10, 0.0625, 5);
  const Ensemble other = sample_initial(w, 10, 0.0625, 6);
  for (std::size_t t = 0; t < 100; ++t) {
    EXPECT_EQ(a.points[t].theta, b.points[t].theta);
    EXPECT_EQ(a.points[t].n, b.points[t].n);
  }
  for (std::size_t t = 0; t < 10; ++t) {
    EXPECT_EQ(a.points[t].theta, prefix.points[t].theta);
    EXPECT_EQ(a.points[t].l, prefix.points[t].l);
    EXPECT_NE(a.points[t].n, other.points[t].n);
  }
}

TEST(CounterRng, StreamsAreIndependentOfGenerationOrder) {
  CounterRng a(42, 7);
  CounterRng b(42, 8);
  CounterRng a2(42, 7);
  const auto a0 = a();
  b();
  EXPECT_EQ(a0, a2());
  EXPECT_EQ(a(), a2());
  EXPECT_NE(CounterRng(42, 7)(), CounterRng(43, 7)());
}

TEST(EvolveEnsemble, ZeroStepsIsIdentity) {
  const Ensemble e = sample_initial(MomentumEigenstate{0.0, 0.0}, 50, 0.1, 1);
  const auto out = evolve_ensemble(e, 0, classical(1.0));
  ASSERT_EQ(out.size(), 1u);
  for (std::size_t t = 0; t < e.size(); ++t) EXPECT_EQ(out[0].points[t].theta, e.points[t].theta);
}

TEST(EvolveEnsemble, ZeroKickKeepsMomentumMarginal) {
  const Ensemble e = sample_initial(Wavepacket{0.0, 0.0, 1.0, 0.0, 0.5, 0.5}, 200, 0.0625, 2);
  const auto out = evolve_ensemble(e, 25, classical(0.0));
  ASSERT_EQ(out.size(), 26u);
  for (const auto& snap : out) {
    for (std::size_t t = 0; t < e.size(); ++t) {
      EXPECT_EQ(snap.points[t].n, e.points[t].n);
      EXPECT_EQ(snap.weights[t], e.weights[t]);
    }
  }
}

TEST(EvolveEnsemble, MeanTotalMomentumConstant) {
  const Ensemble e = sample_initial(Wavepacket{0.3, -0.1, 1.0, 0.0, 0.5, 0.5}, 2000, 0.0625, 3);
  Ensemble cur = e;
  auto mean_total = [](const Ensemble& x) {
    double s = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) s += x.weights[t] * (x.points[t].n + x.points[t].l);
    return s;
  };
  const double m0 = mean_total(e);
  const FloquetSpec spec = classical(10.0);
  for (int s = 0; s < 1000; ++s) advance(cur, spec);
  EXPECT_NEAR(mean_total(cur), m0, 1e-9);
}

TEST(Section, ZeroKickGivesHorizontalLines) {
  const std::vector<PhasePoint> seeds = {{0.1, 0.3, 0.0, -0.3}, {2.0, -0.7, 1.0, 0.7}};
  const auto cloud = surface_of_section(classical(0.0), seeds, 200);
  ASSERT_EQ(cloud.size(), 400u);
  for (const auto& p : cloud) EXPECT_EQ(p.y, seeds[static_cast<std::size_t>(p.trajectory)].n);
}

TEST(Section, RelativeCoordinates) {
  const std::vector<PhasePoint> seeds = {{0.5, 0.3, 0.2, -0.1}};
  const auto cloud = surface_of_section(classical(0.7), seeds, 1, SectionCoordinates::relative);
  const PhasePoint q = map_step(seeds[0], classical(0.7));
  EXPECT_DOUBLE_EQ(cloud[0].x, wrap_angle(q.theta - q.phi));
  EXPECT_DOUBLE_EQ(cloud[0].y, 0.5 * (q.n - q.l));
}

TEST(Section, RegularCurvesAreThinChaoticSeaFills) {
  ExperimentConfig config;
  const std::vector<PhasePoint> seeds = section_seeds(config);

  // Regular regime: every trace is a thin curve.
  const auto regular = surface_of_section(classical(0.25), seeds, 1000);
  double regular_fill = 0.0;
  for (int t = 0; t < static_cast<int>(seeds.size()); ++t) {
    regular_fill = std::max(regular_fill, section_stats(regular, t).box_fill);
  }
  EXPECT_LE(regular_fill, 0.16);

  // Chaotic regime: the trace from the reference point covers at least half of
  // the momentum range explored by all seeds.
  const FloquetSpec chaotic = classical(1.0);
  const auto sea = surface_of_section(chaotic, seeds, 1000);
  double lo = 0.0, hi = 0.0;
  for (const auto& p : sea) {
    lo = std::min(lo, p.y);
    hi = std::max(hi, p.y);
  }
  const auto ref = surface_of_section(chaotic, {config.lyapunov_point}, 1000);
  const SectionStats s = section_stats(ref, 0);
  EXPECT_GE(s.n_max - s.n_min, 0.5 * (hi - lo));
  EXPECT_GE(s.box_fill, 0.2);
  EXPECT_GT(s.box_fill, regular_fill);
}

TEST(Section, Deterministic) {
  const std::vector<PhasePoint> seeds = {{0.1, 0.0, 0.0, 0.0}, {1.0, 0.5, 0.0, -0.5}};
  const auto a = surface_of_section(classical(1.0), seeds, 300);
  const auto b = surface_of_section(classical(1.0), seeds, 300);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].y, b[i].y);
  }
}

TEST(Lyapunov, IntegrableShearHasNoExponentialGrowth) {
  EXPECT_LE(lyapunov_estimate(classical(0.0), {0.1, 0.0, 0.0, 0.0}, 5000), 0.01);
  EXPECT_LE(lyapunov_estimate(classical(0.0), {0.1, 0.7, 2.0, -0.4}, 5000), 0.01);
}

TEST(Lyapunov, StrongKickAgreesWithDivergenceOracle) {
  const FloquetSpec spec = classical(10.0);
  const PhasePoint p0{0.1, 0.0, 0.0, 0.0};
  const double lambda = lyapunov_estimate(spec, p0, 20000);
  const double oracle_lambda = oracle::divergence_lyapunov(spec, p0, 20000);
  EXPECT_GT(lambda, 0.1);
  EXPECT_NEAR(lambda, oracle_lambda, 0.05 * oracle_lambda);
}

TEST(Lyapunov, ChaoticSeaAgreesWithDivergenceOracle) {
  const FloquetSpec spec = classical(1.0);
  const PhasePoint p0{0.1, 0.0, 0.0, 0.0};
  const double lambda = lyapunov_estimate(spec, p0, 20000);
  EXPECT_GE(lambda, 0.1);
  EXPECT_NEAR(lambda, oracle::divergence_lyapunov(spec, p0, 20000), 0.05 * lambda);
}

TEST(Lyapunov, IndependentOfTangentInitialization) {
  for (double k : {1.0, 10.0}) {
    const FloquetSpec spec = classical(k);
    const double a = lyapunov_estimate(spec, {0.1, 0.0, 0.0, 0.0}, 20000);
    const double b = lyapunov_estimate(spec, {0.1, 0.0, 0.0, 0.0}, 20000, Eigen::Vector4d(0.0, 1.0, 0.0, 0.0));
    EXPECT_NEAR(a, b, 0.05 * a) << "k " << k;
  }
}

TEST(Lyapunov, TooFewStepsIsUsageError) {
  EXPECT_THROW(lyapunov_estimate(classical(1.0), {}, 999), UsageError);
}

TEST(Lyapunov, ClassificationThresholds) {
  const ChaosThresholds t{0.01, 0.1};
  EXPECT_EQ(classify_regime(0.0, t), Regime::regular);
  EXPECT_EQ(classify_regime(0.01, t), Regime::regular);
  EXPECT_EQ(classify_regime(0.05, t), Regime::mixed);
  EXPECT_EQ(classify_regime(0.1, t), Regime::chaotic);
  EXPECT_EQ(to_string(Regime::mixed), "mixed");
}
