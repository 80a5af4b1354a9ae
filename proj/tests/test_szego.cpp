#include "arcszego/error.hpp"
#include "arcszego/szego.hpp"

#include <gtest/gtest.h>

#include <cmath>

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

// Geometric mean of f(cos theta) over [0, pi], midpoint rule.
template <class F>
double geometric_mean(F f, int n = 4000) {
  double acc = 0;
  for (int j = 0; j < n; ++j) acc += std::log(f(std::cos(M_PI * (j + 0.5) / n)));
  return std::exp(acc / n);
}

}  // namespace

TEST(Szego, GeometricMeanOnTheSegment) {
  const auto fr = build_frame(unit, BasePoint<double>::inf());
  const auto sz = build_szego(fr, density_poly<double>({1, 0, 0.5}), 1024);
  ASSERT_TRUE(sz->szego_condition_ok);
  const double G = geometric_mean([](double x) { return 1 + x * x / 2; });
  EXPECT_NEAR(G, std::pow((1 + std::sqrt(1.5)) / 2, 2), 1e-14);
  EXPECT_NEAR(sz->Rf.at_base(), G, 1e-13);
  EXPECT_NEAR(std::exp(sz->log_integral_f), G, 1e-13);
  const auto lim = widom_limit_rhs(sz);
  EXPECT_NEAR(lim.formula_A, 2 * G, 1e-12);
  EXPECT_NEAR(lim.formula_B, 2 * G, 1e-12);
}

TEST(Szego, BoundaryModulusOfTheSzegoFunction) {
  const auto arc = parabola();
  const auto fr = build_frame(arc, BasePoint<double>::at(C(0.3, 0.8)));
  const auto f = density_exp_cos<double>(1.0);
  const auto sz = build_szego(fr, f, 2048);
  for (double t : {0.1, 0.4, 0.85}) {
    for (Side s : {Side::plus, Side::minus}) {
      const auto p = fr->boundary_point_at(t, 1 - t, s);
      const double fv = std::exp(std::cos(2 * M_PI * t));
      EXPECT_NEAR(std::abs(sz->Rf.value(p)) / fv, 1.0, 1e-9) << t;
    }
  }
}

TEST(Szego, FormulasAgreeOnAGeneralArc) {
  const auto arc = parabola();
  for (auto base : {BasePoint<double>::inf(), BasePoint<double>::at(C(0.3, 0.8))}) {
    const auto fr = build_frame(arc, base);
    const auto sz = build_szego(fr, density_jacobi<double>(0.5, -0.3), 2048);
    const auto lim = widom_limit_rhs(sz);
    EXPECT_NEAR(lim.formula_A / lim.formula_B, 1.0, 1e-9);
  }
}

TEST(Szego, SegmentKernelClosedForm) {
  // For the arcsine distribution and the two-sided pairing, 1/Phi^k are
  // orthogonal with squared norm 2.
  const auto fr = build_frame(unit, BasePoint<double>::inf());
  const auto K = kernel(build_szego(fr, density_one<double>(), 1024));
  EXPECT_NEAR(K.diagonal(), 0.5, 1e-13);
  EXPECT_NEAR(K.nu(), 2.0, 1e-12);
  for (C z : {C(1.5, 0.2), C(-0.3, 0.9)}) {
    for (C w : {C(0.1, -1.1), C(2.5, 0)}) {
      const auto pz = fr->locate(z), pw = fr->locate(w);
      const C q = pz.zeta * std::conj(pw.zeta);
      EXPECT_LT(std::abs(K.kernel(pz, pw) - q / (2.0 * (q - 1.0))), 1e-12);
    }
  }
}

TEST(Szego, ReproducingProperty) {
  const auto arc = parabola();
  const auto base = BasePoint<double>::at(C(0.3, 0.8));
  const auto fr = build_frame(arc, base);
  const auto f = density_poly<double>({1, 0, 0.5});
  const auto K = kernel(build_szego(fr, f, 2048));
  EXPECT_LT(std::abs(K.extremal(fr->base_point()) - 1.0), 1e-10);
  const auto ip = transplant_quadrature(*fr, make_measure(arc, base, f, {}), 2048);
  const auto w = fr->from_zeta(C(1.2, -0.9));
  auto G = [](const FramePoint<double>& p) { return 1.0 / (p.zeta - 0.5); };
  const C r = contour_inner_product<double>(
      ip, [&](const BoundaryPoint<double>& p) { return G(p.own); },
      [&](const BoundaryPoint<double>& p) { return K.kernel(p.own, w); }, false, ContourMode::two_sided);
  EXPECT_LT(std::abs(r - G(w)) / std::abs(G(w)), 1e-9);
}

TEST(Szego, FailedSzegoCondition) {
  const auto fr = build_frame(unit, BasePoint<double>::inf());
  const auto f = density_samples<double>({{0.0, 1.0}, {0.39, 1.0}, {0.4, 0.0}, {0.6, 0.0}, {0.61, 1.0}, {1.0, 1.0}});
  const auto sz = build_szego(fr, f, 1024);
  EXPECT_FALSE(sz->szego_condition_ok);
  EXPECT_TRUE(sz->Rf.is_zero());
  EXPECT_THROW(kernel(sz), DomainError);
  EXPECT_FALSE(widom_limit_rhs(sz).szego_condition_ok);
}
