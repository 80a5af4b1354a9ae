// One line per acceptance criterion. Each check is re-derived from the raw
// report numbers rather than from the drivers' own verdicts.
#include "cli.hpp"

#include "arcszego/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#ifndef ARCSZEGO_TEST_CONFIGS
#error "ARCSZEGO_TEST_CONFIGS must point at tests/configs"
#endif

using namespace arcszego;

namespace {

ExperimentConfig load(const std::string& name) {
  std::ifstream in(std::string(ARCSZEGO_TEST_CONFIGS) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return cli::parse_config(ss.str());
}

ConvergenceReport run(const std::string& experiment, const std::string& config) {
  return run_experiment(experiment, load(config));
}

const DegreeRecord* at_degree(const ConvergenceReport& r, std::size_t n) {
  for (const auto& d : r.records)
    if (d.n == n) return &d;
  return nullptr;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool fast = secs < limit_s;
  const bool ok = o.pass && fast;
  if (!ok) ++failures;
  std::printf("[%s] criterion %d %s: %s (%.2f s, limit %.0f s)\n", ok ? "PASS" : "FAIL", id, title, o.detail.c_str(),
              secs, limit_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

}  // namespace

int main() {
  criterion(1, "Chebyshev exactness", 10, [] {
    const auto r = run("widom-sweep", "chebyshev.json");
    double worst = 0;
    bool all = r.records.size() == 40;
    for (const auto& d : r.records) {
      worst = std::max(worst, std::abs(d.widom_sq - 2.0));
      all = all && d.n >= 1 && d.n <= 40;
    }
    const double eA = std::abs(r.scalars.at("limit_A") - 2.0), eB = std::abs(r.scalars.at("limit_B") - 2.0);
    return Outcome{all && worst < 1e-8 && eA < 1e-10 && eB < 1e-10,
                   fmt("max |W^2 - 2| = %.2e over n = 1..40, |A - 2| = %.2e, |B - 2| = %.2e", worst, eA, eB)};
  });

  criterion(2, "circle oracle", 5, [] {
    const auto r = run("circle-oracle", "circle_oracle.json");
    double worst = 0;
    for (const auto& d : r.records) {
      const double q = std::pow(4.0, double(d.n));
      worst = std::max(worst, std::abs(d.widom_sq / (q * 3.0 / (4.0 * q - 1.0)) - 1.0));
    }
    const auto* v = r.verdict("closed_form");
    const auto* d50 = at_degree(r, 50);
    const double e50 = d50 ? std::abs(d50->widom_sq - 0.75) : 1.0;
    return Outcome{v && v->pass && worst < 1e-10 && e50 < 1e-4,
                   fmt("closed form rel err %.2e (all n <= 50: %.2e), |W^2 - 0.75| at n = 50: %.2e", worst,
                       v ? v->value : NAN, e50)};
  });

  criterion(3, "formula A = formula B", 30, [] {
    double worst = 0;
    int count = 0;
    for (const char* c : {"identity_parabola_inf_expcos.json", "identity_parabola_z_expcos.json",
                          "identity_parabola_inf_jacobi.json", "identity_parabola_z_jacobi.json",
                          "identity_segment_atom.json"}) {
      const auto r = run("widom-sweep", c);
      worst = std::max(worst, std::abs(r.scalars.at("limit_A") / r.scalars.at("limit_B") - 1.0));
      ++count;
    }
    return Outcome{count == 5 && worst < 1e-9, fmt("max |A/B - 1| = %.2e over %g configurations", worst, count)};
  });

  criterion(4, "Widom limit convergence", 60, [] {
    bool ok = true;
    std::string detail;
    for (const char* c : {"widom_limit_inf.json", "widom_limit_2i.json"}) {
      const auto r = run("widom-sweep", c);
      const auto *a = at_degree(r, 15), *b = at_degree(r, 30), *d = at_degree(r, 60);
      const bool dec = a && b && d && b->err_abs < a->err_abs && d->err_abs < b->err_abs;
      const double rel = d ? std::abs(d->widom_sq / d->limit_A - 1.0) : 1.0;
      ok = ok && dec && rel < 0.01;
      detail += std::string(c) + fmt(" rel err at 60 = %.2e, errors %.1e > ", rel, a ? a->err_abs : NAN) +
                fmt("%.1e > %.1e; ", b ? b->err_abs : NAN, d ? d->err_abs : NAN);
    }
    return Outcome{ok, detail};
  });

  criterion(5, "singular-part insensitivity", 90, [] {
    const auto r = run("widom-sweep", "singular_part.json");
    const bool identical = r.scalars.at("limit_A") == r.scalars.at("limit_A_without_atoms");
    const auto* id = r.verdict("singular_part_limit_identical");
    const auto* mono = r.verdict("atom_monotonicity");
    const auto* d = at_degree(r, 80);
    const double rel = d ? std::abs(d->widom_sq / d->limit_A - 1.0) : 1.0;
    bool lam = true;
    for (const auto& x : r.records) lam = lam && x.lambda >= x.extra.at("lambda_without_atoms");
    return Outcome{identical && id && id->pass && mono && mono->pass && lam && rel < 0.02,
                   fmt("limit difference %.1e, rel err at 80 = %.2e, min lambda gap %.2e", id ? id->value : NAN, rel,
                       mono ? mono->value : NAN)};
  });

  criterion(6, "strong asymptotics", 120, [] {
    bool ok = true;
    std::string detail;
    for (const char* c : {"strong_inf.json", "strong_2i.json"}) {
      const auto r = run("strong-asymptotics", c);
      std::vector<double> l2;
      for (std::size_t n : {10, 20, 40, 80}) {
        const auto* d = at_degree(r, n);
        l2.push_back(d ? d->l2_err : NAN);
      }
      const auto* d = at_degree(r, 80);
      const double sup = d ? d->sup_err : NAN;
      ok = ok && strictly_decreasing(l2) && sup < 0.02;
      detail += std::string(c) + fmt(" L2 %.1e > %.1e > ", l2[0], l2[1]) + fmt("%.1e > %.1e, sup at 80 = %.1e; ", l2[2], l2[3], sup);
    }
    return Outcome{ok, detail};
  });

  criterion(7, "harmonic measure maximizes the limit", 60, [] {
    const auto r = run("maximizer-scan", "maximizer.json");
    bool ok = r.rows.size() >= 11;
    double eq = NAN, gap = INFINITY;
    int random = 0;
    for (const auto& row : r.rows) {
      const double lim = row.values.at("limit_A"), bound = row.values.at("bound");
      ok = ok && lim <= bound * (1 + 1e-13);
      if (row.label == "harmonic") {
        eq = std::abs(lim / bound - 1.0);
      } else {
        gap = std::min(gap, bound - lim);
        random += row.label.rfind("exp_trig", 0) == 0;
      }
    }
    ok = ok && random >= 10 && eq <= 1e-10 && gap > 1e-6;
    return Outcome{ok, fmt("%g random densities, min gap %.3e, f = 1 equality error %.1e", random, gap, eq)};
  });

  criterion(8, "kernel reproduction", 10, [] {
    double worst = 0;
    std::size_t checks = 0;
    for (const char* c : {"kernel_segment.json", "kernel_parabola.json"}) {
      const auto r = run("kernel-check", c);
      for (const auto& row : r.rows) {
        worst = std::max(worst, row.values.at("rel_err"));
        ++checks;
      }
    }
    return Outcome{checks == 24 && worst < 1e-7,
                   fmt("max relative error %.2e over %g checks (3 functions, 4 points, 2 measures)", worst,
                       double(checks))};
  });

  criterion(9, "Faber suite", 30, [] {
    bool ok = true;
    std::string detail;
    for (const char* c : {"faber.json", "faber_parabola.json"}) {
      const auto r = run("faber-check", c);
      std::vector<double> b;
      double radius = 0;
      for (const auto& d : r.records) {
        b.push_back(d.sup_err);
        if (d.extra.count("radius_diff")) radius = std::max(radius, d.extra.at("radius_diff"));
      }
      const auto* lead = r.verdict("leading_coefficient");
      ok = ok && r.all_pass() && strictly_decreasing(b) && b.size() == 4 && radius < 1e-8 && lead &&
           lead->value < 1e-6;
      detail += std::string(c) + fmt(": lead %.1e, radius %.1e, boundary at 80 %.3f; ", lead ? lead->value : NAN,
                                     radius, b.empty() ? NAN : b.back());
    }
    return Outcome{ok, detail};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
