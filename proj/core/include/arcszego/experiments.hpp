#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace arcszego {

// Configuration is plain double data; the drivers lift it to the working
// precision.

struct ArcSpec {
  // segment: A to B. parabola: the segment bent by bend*(x^2 - 1) in the
  // normal direction, x in [-1, 1]. circular: the unit-circle arc
  // e^{i phi}, |phi| <= half_angle. general: explicit (t, z) samples at
  // Chebyshev-spaced t, including t = 0 and t = 1.
  std::string kind = "segment";
  std::complex<double> A{-1, 0};
  std::complex<double> B{1, 0};
  double bend = 0;
  double half_angle = 1;
  std::vector<double> t;
  std::vector<std::complex<double>> z;
};

struct DensitySpec {
  // one | jacobi | exp_cos | poly | exp_trig | custom-samples
  std::string kind = "one";
  std::vector<double> params;
  std::vector<std::pair<double, double>> samples;
  bool normalize = false;  // scale so that int f d omega_{z0} = 1

  std::string label() const;
};

struct MeasureConfig {
  DensitySpec density;
  std::vector<std::pair<double, double>> atoms;  // (t, mass)
};

struct Tolerances {
  double widom_rel = 0.02;      // |W^2/limit - 1| at the largest degree
  double formula_rel = 1e-9;    // |A/B - 1|
  double nu_rel = 0.01;         // |C^{-2n} lambda_n / nu - 1| at the largest degree
  double sup_err = 0.02;        // sup over |Phi| = 2 at the largest degree
  double kernel_rel = 1e-7;     // reproducing property
  double bound_equal = 1e-10;   // harmonic measure attains the bound
  double bound_gap = 1e-6;      // strict gap for nonconstant densities
  double closed_form = 1e-10;   // circle oracle vs closed form
  double rhs_rel = 1e-4;        // circle oracle vs limit at the largest degree
  double faber_exterior = 0.05;
  double faber_radius = 1e-8;
  double faber_leading = 1e-6;
  bool strict_trend = false;    // require strictly decreasing error sequences
};

struct FaberConfig {
  std::vector<std::size_t> boundary_degrees{10, 20, 40, 80};
  std::vector<std::size_t> radius_degrees{10, 20};
  std::size_t exterior_degree = 40;
  std::size_t divided_difference_degree = 8;
  double holder_angle = 0.7;  // branch point e^{i angle} of the Holder weight
  std::uint64_t seed = 7;
};

struct FamilyConfig {
  std::vector<MeasureConfig> members;
  std::size_t random_members = 0;  // smooth random densities exp(trig poly)
  std::size_t random_order = 3;
  double random_amplitude = 0.5;
  std::uint64_t seed = 1;
};

struct ExperimentConfig {
  std::string name;
  ArcSpec arc;
  std::optional<std::complex<double>> base;  // empty means infinity
  MeasureConfig measure;
  std::vector<std::size_t> degrees{10, 20, 40};
  std::size_t nodes = 0;                     // 0: automatic
  std::string precision = "double";          // double | high
  std::string placement = "harmonic";        // harmonic | poisson
  Tolerances tol;
  FamilyConfig family;
  FaberConfig faber;
  std::vector<std::complex<double>> kernel_points;  // interior w for reproduction checks
};

// Validates the configuration; throws DomainError with a field-anchored
// message.
void validate(const ExperimentConfig& cfg);

constexpr double absent = std::numeric_limits<double>::quiet_NaN();

struct DegreeRecord {
  std::size_t n = 0;
  double lambda = absent;
  double widom_sq = absent;
  double limit_A = absent;
  double limit_B = absent;
  double err_abs = absent;
  double err_rel = absent;
  double l2_err = absent;
  double sup_err = absent;
  std::map<std::string, double> extra;
};

struct Verdict {
  std::string name;
  bool pass = false;
  double value = absent;
  double tolerance = absent;
  std::string detail;
};

struct ReportRow {
  std::string label;
  std::map<std::string, double> values;
};

struct ConvergenceReport {
  std::string experiment;
  std::string config_name;
  std::string precision;
  std::size_t nodes = 0;
  std::vector<DegreeRecord> records;
  std::map<std::string, double> scalars;
  std::vector<ReportRow> rows;
  std::vector<Verdict> verdicts;
  std::vector<std::string> notes;
  double runtime_seconds = 0;

  bool all_pass() const;
  const Verdict* verdict(const std::string& name) const;
};

// Experiment drivers. Numerical failures surface as NumericalError,
// configuration problems as DomainError.
ConvergenceReport run_widom_sweep(const ExperimentConfig& cfg);
ConvergenceReport run_strong_asymptotics(const ExperimentConfig& cfg);
ConvergenceReport run_maximizer_scan(const ExperimentConfig& cfg);
ConvergenceReport run_circle_oracle(const ExperimentConfig& cfg);
ConvergenceReport run_faber_check(const ExperimentConfig& cfg);
// Formula A vs B and the two kernel formulas and the reproducing property
// for the configured measure.
ConvergenceReport run_kernel_check(const ExperimentConfig& cfg);

// Dispatch by subcommand name (widom-sweep, strong-asymptotics, ...).
ConvergenceReport run_experiment(const std::string& name, const ExperimentConfig& cfg);
const std::vector<std::string>& experiment_names();

// Monotonicity with a noise floor: steps where both values sit below floor
// count as converged.
bool non_increasing(const std::vector<double>& v, double floor = 0);
bool strictly_decreasing(const std::vector<double>& v);

}  // namespace arcszego
