#include "arcszego/christoffel.hpp"
#include "arcszego/error.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace arcszego;
using C = std::complex<double>;

namespace {

const auto unit = ArcGeometry<double>::segment(C(-1, 0), C(1, 0));

// f times the arcsine distribution.
DiscreteInnerProduct<double> arcsine(std::size_t M, Density<double> f = density_one<double>()) {
  const auto fr = build_frame(unit, BasePoint<double>::inf());
  return transplant_quadrature(*fr, make_measure(unit, BasePoint<double>::inf(), std::move(f), {}), M);
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

TEST(Christoffel, ChebyshevWidomFactorsAreTwo) {
  const auto fr = build_frame(unit, BasePoint<double>::inf());
  const auto sys = orthonormalize(arcsine(256), 40, unit);
  ASSERT_EQ(sys.degree(), 40u);
  const auto sweep = christoffel_sweep(sys, *fr, 40);
  EXPECT_NEAR(sweep[0].widom_sq, 1.0, 1e-14);
  for (std::size_t n = 1; n <= 40; ++n) EXPECT_NEAR(sweep[n].widom_sq, 2.0, 1e-12) << n;
}

TEST(Christoffel, MonicChebyshevPolynomial) {
  const auto fr = build_frame(unit, BasePoint<double>::inf());
  const auto sys = orthonormalize(arcsine(128), 6, unit);
  const auto res = christoffel_value(sys, *fr, 3);
  const std::vector<C> pts{C(0.3, 0), C(-0.9, 0.2), C(2, -1)};
  const auto v = minimizing_polynomial_eval(res, sys, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const C x = pts[i];
    EXPECT_LT(std::abs(v[i] - (x * x * x - 0.75 * x)), 1e-13) << x;
  }
  EXPECT_LT(std::abs(minimizing_polynomial_leading(res, sys) - 1.0), 1e-13);
}

TEST(Christoffel, FinitePointAgainstChebyshevSums) {
  const C z0(2, 0);
  const auto fr = build_frame(unit, BasePoint<double>::at(z0));
  const auto sys = orthonormalize(arcsine(256), 12, unit);
  const auto sweep = christoffel_sweep(sys, *fr, 12);
  double sum = 1;
  for (std::size_t n = 1; n <= 12; ++n) {
    const double Tn = std::cosh(n * std::acosh(2.0));
    sum += 2 * Tn * Tn;
    EXPECT_NEAR(sweep[n].lambda * sum, 1.0, 1e-12) << n;
    EXPECT_NEAR(sweep[n].widom_sq, sweep[n].lambda * std::pow(2 + std::sqrt(3.0), 2.0 * n), 1e-9 * sweep[n].widom_sq);
  }
  // The minimizer takes the value 1 at the base point.
  const auto res = christoffel_value(sys, *fr, 7);
  EXPECT_LT(std::abs(minimizing_polynomial_eval(res, sys, {z0})[0] - 1.0), 1e-12);
}

TEST(Christoffel, LegendreNorms) {
  // (1-x^2)^{1/2} times the arcsine density is dx/pi. The weight is only
  // Lipschitz in the circle variable, so the rule converges like M^-2.
  const auto ip = arcsine(4096, density_jacobi<double>(0.5, 0.5));
  const auto sys = orthonormalize(ip, 10, unit);
  for (int n = 0; n <= 10; ++n) {
    const double lead = factorial(2 * n) / (std::pow(2.0, n) * factorial(n) * factorial(n));
    const double h2 = 2.0 / (2 * n + 1) / (lead * lead) / M_PI;
    EXPECT_NEAR(sys.monic_norms()[n] * sys.monic_norms()[n] / h2, 1.0, 1e-5) << n;
  }
}

TEST(Christoffel, GramMatrixUnderAFinerRule) {
  const auto coarse = arcsine(512, density_exp_cos<double>(1.0));
  const auto fine = arcsine(1024, density_exp_cos<double>(1.0));
  const auto sys = orthonormalize(coarse, 30, unit);
  EXPECT_LT(gram_defect(gram_matrix(sys, fine, 30)), 1e-10);
  EXPECT_LT(gram_defect(gram_matrix(sys, coarse, 30)), 1e-12);
}

TEST(Christoffel, UnitCircle) {
  const auto ip = circle_quadrature<double>(64, [](double) { return 1.0; });
  const auto sys = orthonormalize<double>(ip, 10, C(0), 1.0);
  const auto lam = christoffel_lambdas(sys, BasePoint<double>::inf(), 10);
  for (double l : lam) EXPECT_NEAR(l, 1.0, 1e-13);
  // Orthonormal z^k give lambda_n(z0) = 1/sum |z0|^{2k}.
  const auto fin = christoffel_lambdas(sys, BasePoint<double>::at(C(0, 2)), 10);
  for (std::size_t n = 0; n <= 10; ++n)
    EXPECT_NEAR(fin[n], 3.0 / (std::pow(4.0, n + 1.0) - 1), 1e-13 * fin[n] + 1e-300) << n;
}

TEST(Christoffel, Breakdown) {
  const auto ip = circle_quadrature<double>(8, [](double) { return 1.0; });
  EXPECT_THROW(orthonormalize<double>(ip, 12, C(0), 1.0), NumericalError);
  const auto sys = orthonormalize<double>(ip, 12, C(0), 1.0, BreakdownPolicy::truncate);
  ASSERT_TRUE(sys.breakdown().has_value());
  EXPECT_LT(sys.degree(), 8u);
  EXPECT_THROW(sys.evaluate(C(0), 12), std::out_of_range);
  const auto fr = build_frame(unit, BasePoint<double>::inf());
  EXPECT_THROW(christoffel_value(sys, *fr, 12), std::out_of_range);
}
