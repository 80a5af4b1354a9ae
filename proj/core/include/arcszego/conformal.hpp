#pragma once

#include "arcszego/geometry.hpp"
#include "arcszego/scalar.hpp"

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

namespace arcszego {

// Exterior map Psi of Gamma' onto the exterior of the unit disk, Psi(inf) = inf,
// Psi'(inf) > 0. Stored through its inverse Psi^{-1}(w) = w exp(g(1/w)) with
// g(v) = sum_k g_k v^k and g_0 real. The identity when Gamma' is the unit circle.
template <class T>
class ExteriorMap {
 public:
  ExteriorMap() = default;
  ExteriorMap(std::vector<cplx<T>> g, std::vector<T> theta_of_tau, T residual, int iterations);

  bool is_identity() const { return g_.empty(); }
  cplx<T> inverse(const cplx<T>& w) const;
  cplx<T> inverse_derivative(const cplx<T>& w) const;
  cplx<T> operator()(const cplx<T>& s) const;
  cplx<T> derivative(const cplx<T>& s) const;
  cplx<T> log_ratio(const cplx<T>& v) const;  // g(v) = log(Psi^{-1}(1/v) v)
  T g0() const;
  T residual() const { return residual_; }
  int iterations() const { return iterations_; }
  const std::vector<cplx<T>>& coefficients() const { return g_; }

 private:
  std::vector<cplx<T>> g_;
  std::vector<T> theta_;  // boundary correspondence theta(tau_j), tau_j = 2 pi j/N
  T residual_ = 0;
  int iterations_ = 0;
};

struct TheodorsenOptions {
  std::size_t nodes = 4096;
  int max_iterations = 200;
  double damping = 0.5;
};

// Theodorsen iteration on the polar representation of Gamma'. Segments return
// the identity without iterating.
template <class T>
ExteriorMap<T> exterior_map_of_opened_curve(const OpenedCurve<T>& oc, const TheodorsenOptions& opt = {});

template <class T>
struct BasePoint {
  bool infinite = true;
  cplx<T> z{};
  static BasePoint inf() { return {}; }
  static BasePoint at(const cplx<T>& z0) { return {false, z0}; }
};

// A point of the closed exterior domain in all coordinates used downstream:
// z, s = phi^{-1}(z), w = Psi(s) and zeta = Phi_{z0}(z).
template <class T>
struct FramePoint {
  cplx<T> z{};
  cplx<T> s{};
  cplx<T> w{};
  cplx<T> zeta{};
  bool infinite = false;
};

// Boundary value of the frame at an arc point, seen from one side, with the
// coordinates of the same arc point seen from the other side (the mate).
// psi_reg = |Phi'_{side}(z)| sqrt(|z-A||z-B|), finite up to the endpoints.
template <class T>
struct BoundaryPoint {
  FramePoint<T> own;
  FramePoint<T> mate;
  Side side = Side::plus;
  T t = 0;
  T tc = 1;
  T sigma = 0;
  T psi_reg = 0;
  T psi_reg_mate = 0;

  const cplx<T>& z() const { return own.z; }
  ArcPoint<T> arc_point() const { return {t, tc, own.z, side}; }
  // The same arc point seen from the other side.
  BoundaryPoint mirrored() const {
    BoundaryPoint m = *this;
    std::swap(m.own, m.mate);
    std::swap(m.psi_reg, m.psi_reg_mate);
    if (side == Side::plus) m.side = Side::minus;
    else if (side == Side::minus) m.side = Side::plus;
    m.sigma = sigma == T(0) ? sigma : two_pi<T>() - sigma;
    return m;
  }
};

enum class Placement { harmonic, poisson };

// Phi_{z0}, B_{z0} and their derivatives for one base point. Immutable.
template <class T>
class ConformalFrame {
 public:
  ConformalFrame(std::shared_ptr<const OpenedCurve<T>> oc, std::shared_ptr<const ExteriorMap<T>> psi,
                 const BasePoint<T>& z0);

  const OpenedCurve<T>& curve() const { return *oc_; }
  const ArcGeometry<T>& arc() const { return oc_->arc(); }
  const ExteriorMap<T>& psi() const { return *psi_; }
  const BasePoint<T>& base() const { return z0_; }
  bool at_infinity() const { return z0_.infinite; }

  // Phi_{z0}(z0) for finite z0, Phi'_inf(inf) for z0 = inf.
  T phi_at_base() const { return a_; }
  T capacity() const { return T(1) / a_; }
  T phi_inf_derivative() const { return a_inf_; }
  const cplx<T>& rotation() const { return rot_; }
  // zeta = zeta_factor() * Psi(s).
  cplx<T> zeta_factor() const { return rot_ * u_; }
  // Phi_{z0}'(inf) and Phi_{z0}'(z0).
  cplx<T> phi_derivative_at_infinity() const { return rot_ * a_inf_; }
  cplx<T> phi_derivative_at_base() const;

  FramePoint<T> locate(const cplx<T>& z) const;
  FramePoint<T> from_zeta(const cplx<T>& zeta) const;
  FramePoint<T> infinity() const;
  const FramePoint<T>& base_point() const { return base_fp_; }

  cplx<T> phi(const cplx<T>& z) const { return locate(z).zeta; }
  cplx<T> dphi(const FramePoint<T>& p) const;
  cplx<T> mobius(const FramePoint<T>& p) const;   // B_{z0}
  cplx<T> dmobius(const FramePoint<T>& p) const;  // B_{z0}'
  cplx<T> mobius_constant() const { return c_; }

  // Poisson factor (a^2 - 1)/|zeta - a|^2 of the base point (1 at infinity).
  T poisson(const cplx<T>& zeta) const;

  BoundaryPoint<T> boundary_point(const cplx<T>& zeta) const;
  BoundaryPoint<T> boundary_point_at(const T& t, const T& tc, Side side) const;

  // M points, half-offset from the image of B. harmonic: equispaced on the
  // B_{z0} circle with weights 1/M; poisson: equispaced on the Phi_{z0} circle
  // with Poisson weights.
  std::vector<BoundaryPoint<T>> circle_points(std::size_t M, Placement placement, std::vector<T>* weights) const;
  // Angle of Phi_{z0}(B) on the unit circle.
  T zeta_angle_of_B() const;

  // log((z - E)/Phi_inf(z)) normalized real at z0, E an endpoint. Analytic and
  // zero-free in the exterior; its real part on the arc is log|z - E|.
  cplx<T> endpoint_log(const FramePoint<T>& p, bool at_A) const;
  // Integral of log|z - E| against the harmonic measure at z0.
  T endpoint_log_integral(bool at_A) const { return endpoint_log(base_fp_, at_A).real(); }
  // sqrt(|z - A||z - B|) from the opened-plane coordinate.
  T sqrt_endpoint_distance(const cplx<T>& s) const;

 private:
  cplx<T> raw_endpoint_log(const FramePoint<T>& p, bool at_A) const;
  FramePoint<T> from_s(const cplx<T>& s) const;

  std::shared_ptr<const OpenedCurve<T>> oc_;
  std::shared_ptr<const ExteriorMap<T>> psi_;
  BasePoint<T> z0_;
  cplx<T> u_{};    // (B - A)/|B - A|
  cplx<T> rot_{};  // Phi_{z0} = rot * Phi_inf
  cplx<T> c_{};    // unimodular constant of B_{z0}
  T a_ = 0;
  T a_inf_ = 0;
  FramePoint<T> base_fp_;
  cplx<T> shift_A_{}, shift_B_{};
};

template <class T>
std::shared_ptr<const ConformalFrame<T>> build_frame(std::shared_ptr<const OpenedCurve<T>> oc,
                                                     std::shared_ptr<const ExteriorMap<T>> psi,
                                                     const BasePoint<T>& z0);

// Convenience: opens the arc and builds the exterior map first.
template <class T>
std::shared_ptr<const ConformalFrame<T>> build_frame(const ArcGeometry<T>& arc, const BasePoint<T>& z0);

// Density of the harmonic measure at z0 with respect to arc length.
template <class T>
class HarmonicMeasure {
 public:
  explicit HarmonicMeasure(std::shared_ptr<const ConformalFrame<T>> frame) : frame_(std::move(frame)) {}

  // Per-side densities and their sum at an arc point.
  T side_density(const BoundaryPoint<T>& p) const;
  T mate_density(const BoundaryPoint<T>& p) const;
  T density(const BoundaryPoint<T>& p) const;
  // density * sqrt(|z - A||z - B|).
  T regularized(const BoundaryPoint<T>& p) const;
  // Same quantities addressed by arc parameter; t = 0 or 1 is rejected.
  T density_at(const T& t) const;
  T regularized_at(const T& t) const;

  const ConformalFrame<T>& frame() const { return *frame_; }

 private:
  std::shared_ptr<const ConformalFrame<T>> frame_;
};

template <class T>
HarmonicMeasure<T> harmonic_density(std::shared_ptr<const ConformalFrame<T>> frame) {
  return HarmonicMeasure<T>(std::move(frame));
}

}  // namespace arcszego
