#include "arcszego/error.hpp"
#include "arcszego/measure.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace arcszego;
using C = std::complex<double>;

namespace {

ArcGeometry<double> parabola(double bend = 0.3) {
  std::vector<double> t;
  std::vector<C> z;
  for (int j = 0; j <= 256; ++j) {
    const double tt = j == 256 ? 1.0 : 0.5 - 0.5 * std::cos(M_PI * j / 256);
    const double x = 2 * tt - 1;
    t.push_back(tt);
    z.push_back(C(x, bend * (x * x - 1)));
  }
  return ArcGeometry<double>::from_samples(t, z);
}

const auto unit = ArcGeometry<double>::segment(C(-1, 0), C(1, 0));

NodeFunction<double> power(int k) {
  return [k](const BoundaryPoint<double>& p) { return std::pow(p.own.z, k); };
}

NodeFunction<double> one() {
  return [](const BoundaryPoint<double>&) { return C(1); };
}

double binom_central(int k) {
  double b = 1;
  for (int j = 1; j <= k; ++j) b = b * (k + j) / j;
  return b;
}

}  // namespace

TEST(Measure, ArcsineMoments) {
  const auto fr = build_frame(unit, BasePoint<double>::inf());
  const auto spec = make_measure(unit, BasePoint<double>::inf(), density_one<double>(), {});
  const auto ip = transplant_quadrature(*fr, spec, 256);
  EXPECT_NEAR(ip.total_mass(), 1.0, 1e-14);
  for (int k = 0; k <= 10; ++k) {
    const C m = contour_inner_product<double>(ip, power(k), power(k));
    EXPECT_NEAR(m.real(), binom_central(k) / std::pow(4.0, k), 1e-14) << k;
    EXPECT_NEAR(contour_inner_product<double>(ip, power(2 * k + 1), one()).real(), 0.0, 1e-14);
  }
}

TEST(Measure, PolynomialDensityMoments) {
  const auto fr = build_frame(unit, BasePoint<double>::inf());
  const auto spec = make_measure(unit, BasePoint<double>::inf(), density_poly<double>({1, 0, 0.5}), {});
  const auto ip = transplant_quadrature(*fr, spec, 128);
  // int (1 + x^2/2) d(arcsine) and int x^2 (1 + x^2/2) d(arcsine).
  EXPECT_NEAR(ip.total_mass(), 1.25, 1e-14);
  EXPECT_NEAR(contour_inner_product<double>(ip, power(1), power(1)).real(), 0.5 + 3.0 / 16, 1e-14);
}

TEST(Measure, AtomsArePointMasses) {
  const auto fr = build_frame(unit, BasePoint<double>::inf());
  const auto spec = make_measure(unit, BasePoint<double>::inf(), density_one<double>(), {{0.75, 0.3}});
  EXPECT_DOUBLE_EQ(spec.atom_mass(), 0.3);
  const auto ip = transplant_quadrature(*fr, spec, 64);
  ASSERT_EQ(ip.atom_nodes.size(), 1u);
  EXPECT_LT(std::abs(ip.atom_nodes[0] - C(0.5, 0)), 1e-15);
  EXPECT_NEAR(ip.total_mass(true), 1.3, 1e-14);
  EXPECT_NEAR(ip.total_mass(false), 1.0, 1e-14);
  const C with = contour_inner_product<double>(ip, power(2), one(), true);
  EXPECT_NEAR(with.real(), 0.5 + 0.3 * 0.25, 1e-14);
}

TEST(Measure, AtomValidation) {
  const auto base = BasePoint<double>::inf();
  EXPECT_THROW(make_measure(unit, base, density_one<double>(), {{0.0, 0.1}}), DomainError);
  EXPECT_THROW(make_measure(unit, base, density_one<double>(), {{1.0, 0.1}}), DomainError);
  EXPECT_THROW(make_measure(unit, base, density_one<double>(), {{0.5, 0.0}}), DomainError);
  EXPECT_THROW(make_measure(unit, base, density_one<double>(), {{0.5, -1.0}}), DomainError);
}

TEST(Measure, NodeCountAndSignChecks) {
  const auto fr = build_frame(unit, BasePoint<double>::inf());
  const auto spec = make_measure(unit, BasePoint<double>::inf(), density_one<double>(), {});
  EXPECT_THROW(transplant_quadrature(*fr, spec, 32), std::invalid_argument);
  EXPECT_THROW(transplant_quadrature(*fr, spec, 100), std::invalid_argument);
  const auto neg = make_measure(unit, BasePoint<double>::inf(), density_poly<double>({-1.0}), {});
  EXPECT_THROW(transplant_quadrature(*fr, neg, 64), DomainError);
}

TEST(Measure, NonFiniteIntegrandIsANumericalError) {
  const auto fr = build_frame(unit, BasePoint<double>::inf());
  const auto ip = transplant_quadrature(*fr, make_measure(unit, BasePoint<double>::inf(), density_one<double>(), {}), 64);
  NodeFunction<double> bad = [](const BoundaryPoint<double>& p) {
    return p.own.z.real() > 0.5 ? C(std::numeric_limits<double>::quiet_NaN(), 0) : C(1);
  };
  EXPECT_THROW(contour_inner_product<double>(ip, bad, one()), NumericalError);
}

TEST(Measure, CircleQuadrature) {
  const auto ip = circle_quadrature<double>(64, [](double th) { return 1 + std::cos(th); });
  EXPECT_NEAR(ip.total_mass(), 1.0, 1e-14);
  EXPECT_NEAR(contour_inner_product<double>(ip, power(1), one()).real(), 0.5, 1e-14);
  EXPECT_NEAR(std::abs(contour_inner_product<double>(ip, power(3), one())), 0.0, 1e-14);
  EXPECT_THROW(circle_quadrature<double>(6, [](double) { return 1.0; }), std::invalid_argument);
}

TEST(Measure, PlacementsAgree) {
  const auto arc = parabola();
  const auto base = BasePoint<double>::at(C(0.3, 0.8));
  const auto fr = build_frame(arc, base);
  const auto spec = make_measure(arc, base, density_poly<double>({1, 0, 0.5}), {});
  const auto h = transplant_quadrature(*fr, spec, 2048, Placement::harmonic);
  const auto p = transplant_quadrature(*fr, spec, 2048, Placement::poisson);
  EXPECT_NEAR(h.total_mass(), p.total_mass(), 1e-10);
  for (int k = 1; k <= 4; ++k) {
    const C a = contour_inner_product<double>(h, power(k), one());
    const C b = contour_inner_product<double>(p, power(k), one());
    EXPECT_LT(std::abs(a - b), 1e-10) << k;
  }
}

TEST(Measure, RebasingKeepsTheMeasure) {
  const auto arc = parabola();
  const auto z0 = BasePoint<double>::at(C(0.3, 0.8));
  const auto fz = build_frame(arc, z0);
  const auto finf = build_frame(arc, BasePoint<double>::inf());
  const auto spec = make_measure(arc, z0, density_exp_cos<double>(1.0), {});
  const auto moved = rebase_density(spec, fz, finf);
  const auto a = transplant_quadrature(*fz, spec, 2048, Placement::poisson);
  const auto b = transplant_quadrature(*finf, moved, 2048);
  EXPECT_NEAR(a.total_mass(), b.total_mass(), 1e-9);
  for (int k = 1; k <= 3; ++k) {
    const C x = contour_inner_product<double>(a, power(k), power(k));
    const C y = contour_inner_product<double>(b, power(k), power(k));
    EXPECT_LT(std::abs(x - y), 1e-9) << k;
  }
}
