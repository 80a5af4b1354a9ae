#include "arcszego/error.hpp"
#include "arcszego/experiments.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>

using namespace arcszego;
using C = std::complex<double>;

namespace {

// log det of the n x n Toeplitz matrix (I_{j-k}(1)), by Gaussian elimination.
double log_toeplitz_det(int n) {
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) a[j][k] = boost::math::cyl_bessel_i(std::abs(j - k), 1.0);
  double ld = 0;
  for (int p = 0; p < n; ++p) {
    ld += std::log(a[p][p]);
    for (int r = p + 1; r < n; ++r) {
      const double m = a[r][p] / a[p][p];
      for (int c = p; c < n; ++c) a[r][c] -= m * a[p][c];
    }
  }
  return ld;
}

std::string validation_message(const ExperimentConfig& cfg) {
  try {
    validate(cfg);
  } catch (const DomainError& e) {
    return e.what();
  }
  return "";
}

ExperimentConfig segment_config() {
  ExperimentConfig cfg;
  cfg.degrees = {5, 10};
  cfg.nodes = 1024;
  return cfg;
}

}  // namespace

TEST(Experiments, CircleOracleMatchesToeplitzDeterminants) {
  ExperimentConfig cfg;
  cfg.measure.density.kind = "exp_cos";
  cfg.measure.density.params = {1};
  cfg.degrees = {1, 2, 3, 4, 5, 6, 7, 8};
  const auto rep = run_circle_oracle(cfg);
  ASSERT_EQ(rep.records.size(), 8u);
  for (const auto& r : rep.records) {
    const int n = int(r.n);
    const double expect = std::exp(log_toeplitz_det(n + 1) - log_toeplitz_det(n));
    EXPECT_NEAR(r.lambda / expect, 1.0, 1e-12) << n;
  }
  // The geometric mean of exp(cos theta) is 1.
  EXPECT_NEAR(rep.scalars.at("rhs"), 1.0, 1e-14);
}

TEST(Experiments, CircleOracleClosedFormAtAFinitePoint) {
  ExperimentConfig cfg;
  cfg.base = C(0, 2);
  cfg.degrees = {1, 5, 20};
  const auto rep = run_circle_oracle(cfg);
  for (const auto& r : rep.records) {
    const double q = std::pow(4.0, double(r.n));
    EXPECT_NEAR(r.widom_sq, 3 * q / (4 * q - 1), 1e-12) << r.n;
  }
  EXPECT_TRUE(rep.all_pass());
}

TEST(Experiments, SegmentLimitIsTwiceTheGeometricMean) {
  auto cfg = segment_config();
  cfg.measure.density.kind = "poly";
  cfg.measure.density.params = {1, 0, 0.5};
  const auto rep = run_widom_sweep(cfg);
  const double G = std::pow((1 + std::sqrt(1.5)) / 2, 2);
  EXPECT_NEAR(rep.scalars.at("limit_A"), 2 * G, 1e-12);
  EXPECT_NEAR(rep.scalars.at("limit_B"), 2 * G, 1e-12);
  EXPECT_LT(rep.records.back().err_rel, 1e-6);
}

TEST(Experiments, NormalizationDividesByTheMass) {
  auto cfg = segment_config();
  cfg.measure.density.kind = "poly";
  cfg.measure.density.params = {1, 0, 0.5};
  cfg.measure.density.normalize = true;
  const auto rep = run_widom_sweep(cfg);
  // The arcsine mass of 1 + x^2/2 is 5/4.
  const double G = std::pow((1 + std::sqrt(1.5)) / 2, 2);
  EXPECT_NEAR(rep.scalars.at("limit_A"), 2 * G / 1.25, 1e-12);
}

TEST(Experiments, AtomsLeaveTheLimitUnchanged) {
  auto cfg = segment_config();
  cfg.base = C(0, 2);
  cfg.degrees = {10, 20};
  cfg.measure.atoms = {{0.37, 0.5}};
  const auto rep = run_widom_sweep(cfg);
  EXPECT_EQ(rep.scalars.at("limit_A"), rep.scalars.at("limit_A_without_atoms"));
  for (const auto& r : rep.records) EXPECT_GE(r.lambda, r.extra.at("lambda_without_atoms"));
}

TEST(Experiments, MaximizerKeepsAtomMass) {
  auto cfg = segment_config();
  cfg.base = C(0, 2);
  MeasureConfig m;
  m.atoms = {{0.5, 0.3}};
  cfg.family.members = {m};
  const auto rep = run_maximizer_scan(cfg);
  ASSERT_EQ(rep.rows.size(), 2u);
  EXPECT_EQ(rep.rows[0].label, "harmonic");
  const auto& row = rep.rows[1];
  EXPECT_NEAR(row.values.at("mass_atoms"), 0.3, 1e-15);
  EXPECT_NEAR(row.values.at("mass_ac"), 0.7, 1e-12);
  EXPECT_NEAR(row.values.at("limit_A") / row.values.at("bound"), 0.7, 1e-10);
  EXPECT_TRUE(rep.all_pass());
}

TEST(Experiments, MaximizerBoundOnTheSegment) {
  // At infinity the bound is 1/K_omega(inf, inf) = 2.
  auto cfg = segment_config();
  cfg.family.random_members = 3;
  const auto rep = run_maximizer_scan(cfg);
  EXPECT_NEAR(rep.scalars.at("bound"), 2.0, 1e-12);
  EXPECT_EQ(rep.rows.size(), 4u);
  EXPECT_TRUE(rep.all_pass());
}

TEST(Experiments, StrongAsymptoticsFailsWithoutSzegoCondition) {
  auto cfg = segment_config();
  cfg.measure.density.kind = "custom-samples";
  cfg.measure.density.samples = {{0.0, 1.0}, {0.39, 1.0}, {0.4, 0.0}, {0.6, 0.0}, {0.61, 1.0}, {1.0, 1.0}};
  try {
    run_strong_asymptotics(cfg);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_STREQ(e.what(), "strong asymptotics undefined (R_f = 0)");
  }
}

TEST(Experiments, BasePointOnTheArc) {
  auto cfg = segment_config();
  cfg.base = C(0.25, 0);
  EXPECT_THROW(run_widom_sweep(cfg), DomainError);
  ExperimentConfig circle;
  circle.base = C(0, 1);
  EXPECT_THROW(run_circle_oracle(circle), DomainError);
}

TEST(Experiments, Validation) {
  ExperimentConfig ok;
  EXPECT_EQ(validation_message(ok), "");

  auto cfg = ok;
  cfg.degrees = {10, 5};
  EXPECT_EQ(validation_message(cfg).rfind("degrees", 0), 0u);
  cfg = ok;
  cfg.nodes = 100;
  EXPECT_EQ(validation_message(cfg).rfind("nodes", 0), 0u);
  cfg = ok;
  cfg.precision = "quad";
  EXPECT_EQ(validation_message(cfg).rfind("precision", 0), 0u);
  cfg = ok;
  cfg.arc.kind = "spiral";
  EXPECT_EQ(validation_message(cfg).rfind("arc", 0), 0u);
  cfg = ok;
  cfg.measure.atoms = {{1.0, 0.2}};
  EXPECT_NE(validation_message(cfg).find("atoms"), std::string::npos);
  cfg = ok;
  cfg.measure.density.kind = "jacobi";
  cfg.measure.density.params = {0.5};
  EXPECT_NE(validation_message(cfg).find("density"), std::string::npos);
  cfg = ok;
  cfg.tol.widom_rel = 0;
  EXPECT_NE(validation_message(cfg).find("tolerances"), std::string::npos);
  EXPECT_THROW(run_experiment("no-such", ok), DomainError);
}

TEST(Experiments, TrendHelpers) {
  EXPECT_TRUE(non_increasing({3, 2, 2, 1}));
  EXPECT_FALSE(non_increasing({1, 2}));
  EXPECT_TRUE(non_increasing({1e-15, 3e-15}, 1e-14));
  EXPECT_FALSE(non_increasing({1e-15, 3e-13}, 1e-14));
  EXPECT_TRUE(strictly_decreasing({3, 2, 1}));
  EXPECT_FALSE(strictly_decreasing({3, 3}));
  EXPECT_FALSE(strictly_decreasing({3, std::nan(""), 1}));
}

TEST(Experiments, Names) {
  const auto& names = experiment_names();
  for (const char* n : {"widom-sweep", "strong-asymptotics", "maximizer-scan", "circle-oracle", "faber-check",
                        "kernel-check"})
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
}
