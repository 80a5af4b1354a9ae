#include "arcszego/conformal.hpp"

#include "arcszego/error.hpp"
#include "arcszego/fourier.hpp"
#include "arcszego/parallel.hpp"

#include <algorithm>
#include <stdexcept>

namespace arcszego {

namespace {

template <class T>
T theodorsen_tolerance() {
  return std::max(T(1e3) * epsilon<T>(), T(1e-40));
}

}  // namespace

template <class T>
ExteriorMap<T>::ExteriorMap(std::vector<cplx<T>> g, std::vector<T> theta_of_tau, T residual, int iterations)
    : g_(std::move(g)), theta_(std::move(theta_of_tau)), residual_(residual), iterations_(iterations) {}

template <class T>
cplx<T> ExteriorMap<T>::log_ratio(const cplx<T>& v) const {
  if (is_identity()) return cplx<T>(0);
  return power_series<T>(g_, v);
}

template <class T>
T ExteriorMap<T>::g0() const {
  return is_identity() ? T(0) : T(g_[0].real());
}

template <class T>
cplx<T> ExteriorMap<T>::inverse(const cplx<T>& w) const {
  if (is_identity()) return w;
  return w * exp(power_series<T>(g_, cplx<T>(1) / w));
}

template <class T>
cplx<T> ExteriorMap<T>::inverse_derivative(const cplx<T>& w) const {
  if (is_identity()) return cplx<T>(1);
  const cplx<T> v = cplx<T>(1) / w;
  return exp(power_series<T>(g_, v)) * (cplx<T>(1) - power_series_derivative<T>(g_, v) * v);
}

template <class T>
cplx<T> ExteriorMap<T>::operator()(const cplx<T>& s) const {
  using std::abs;
  if (is_identity()) return s;
  // Initial guess from the boundary correspondence: the angle of s fixes the
  // boundary parameter tau, the modulus is scaled by the polar radius.
  const std::size_t N = theta_.size();
  const T tp = two_pi<T>();
  T th = arg(s);
  while (th < theta_[0]) th += tp;
  while (th >= theta_[0] + tp) th -= tp;
  std::size_t k = static_cast<std::size_t>(std::upper_bound(theta_.begin(), theta_.end(), th) - theta_.begin());
  if (k == 0) k = 1;
  const T lo = theta_[k - 1];
  const T hi = k < N ? theta_[k] : theta_[0] + tp;
  const T frac = hi > lo ? (th - lo) / (hi - lo) : T(0);
  const T tau = tp * (T(k - 1) + frac) / T(N);
  const cplx<T> e = cis(tau);
  cplx<T> w = e * (abs(s) / abs(inverse(e)));

  const T tol = T(8) * epsilon<T>();
  for (int it = 0; it < 80; ++it) {
    const cplx<T> dw = (inverse(w) - s) / inverse_derivative(w);
    w -= dw;
    if (abs(dw) <= tol * abs(w)) return w;
  }
  throw NumericalError("exterior map inversion did not converge");
}

template <class T>
cplx<T> ExteriorMap<T>::derivative(const cplx<T>& s) const {
  if (is_identity()) return cplx<T>(1);
  return cplx<T>(1) / inverse_derivative((*this)(s));
}

template <class T>
ExteriorMap<T> exterior_map_of_opened_curve(const OpenedCurve<T>& oc, const TheodorsenOptions& opt) {
  using std::abs;
  using std::log;
  if (oc.is_segment()) return ExteriorMap<T>();
  const std::size_t N = opt.nodes;
  if (!is_power_of_two(N) || N < 64) throw std::invalid_argument("Theodorsen node count must be a power of two >= 64");
  const T tp = two_pi<T>();
  const T damping = T(opt.damping);
  const T tol = theodorsen_tolerance<T>();

  std::vector<T> tau(N), eps(N, T(0)), u(N);
  for (std::size_t j = 0; j < N; ++j) tau[j] = tp * T(j) / T(N);

  // Boundary values of g(e^{-i tau}) from the log-radius samples: g_0 = c_0,
  // g_k = 2 c_{-k}, evaluated back on the grid by an inverse transform.
  auto conjugate = [&](std::vector<cplx<T>>& gk) {
    parallel_for(N, [&](std::size_t j) { u[j] = log(oc.radius(tau[j] + eps[j])); });
    const auto c = fourier_coefficients<T>(u);
    gk.assign(N / 2, cplx<T>(0));
    gk[0] = cplx<T>(c[0].real(), T(0));
    for (std::size_t k = 1; k < N / 2; ++k) gk[k] = T(2) * c[N - k];
    std::vector<cplx<T>> b(N, cplx<T>(0));
    for (std::size_t k = 0; k < N / 2; ++k) b[(N - k) % N] = gk[k];
    fft<T>(b, true);
    return b;
  };

  std::vector<cplx<T>> g;
  int it = 0;
  bool converged = false;
  for (it = 1; it <= opt.max_iterations; ++it) {
    const auto vals = conjugate(g);
    T delta(0);
    for (std::size_t j = 0; j < N; ++j) {
      const T d = vals[j].imag() - eps[j];
      delta = std::max(delta, T(abs(d)));
      eps[j] += damping * d;
    }
    if (delta < tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NumericalError("curve too far from circular; refine or use segment tier");
  conjugate(g);
  truncate_series<T>(g, epsilon<T>() / T(100));

  std::vector<T> theta(N);
  for (std::size_t j = 0; j < N; ++j) theta[j] = tau[j] + eps[j];
  for (std::size_t j = 1; j < N; ++j)
    if (!(theta[j] > theta[j - 1])) throw NumericalError("curve too far from circular; refine or use segment tier");

  ExteriorMap<T> map(g, theta, T(0), it);
  // Residual off the iteration grid: |Psi^{-1}(e^{i tau})| against the polar
  // radius in the same direction.
  std::vector<T> res(N);
  parallel_for(N, [&](std::size_t j) {
    const cplx<T> z = map.inverse(cis<T>(tau[j] + pi<T>() / T(N)));
    res[j] = abs(log(abs(z)) - log(oc.radius(arg(z))));
  });
  const T residual = *std::max_element(res.begin(), res.end());
  if (!(residual < T(1e-10))) throw NumericalError("curve too far from circular; refine or use segment tier");
  return ExteriorMap<T>(std::move(g), std::move(theta), residual, it);
}

template <class T>
ConformalFrame<T>::ConformalFrame(std::shared_ptr<const OpenedCurve<T>> oc, std::shared_ptr<const ExteriorMap<T>> psi,
                                  const BasePoint<T>& z0)
    : oc_(std::move(oc)), psi_(std::move(psi)), z0_(z0) {
  using std::abs;
  using std::exp;
  const cplx<T> d = arc().B() - arc().A();
  u_ = d / abs(d);
  a_inf_ = T(4) / (abs(d) * exp(psi_->g0()));
  rot_ = cplx<T>(1);
  if (z0_.infinite) {
    a_ = a_inf_;
    base_fp_ = infinity();
  } else {
    if (arc().distance(z0_.z) < T(1e-9)) throw DomainError("base point on arc");
    const FramePoint<T> raw = locate(z0_.z);
    a_ = abs(raw.zeta);
    rot_ = a_ / raw.zeta;
    base_fp_ = locate(z0_.z);
    base_fp_.zeta = cplx<T>(a_);
  }
  c_ = -rot_;
  if (!z0_.infinite) {
    shift_A_ = cplx<T>(T(0), raw_endpoint_log(base_fp_, true).imag());
    shift_B_ = cplx<T>(T(0), raw_endpoint_log(base_fp_, false).imag());
  }
}

template <class T>
FramePoint<T> ConformalFrame<T>::from_s(const cplx<T>& s) const {
  FramePoint<T> p;
  p.s = s;
  p.w = (*psi_)(s);
  p.zeta = rot_ * u_ * p.w;
  p.z = oc_->phi(s);
  return p;
}

template <class T>
FramePoint<T> ConformalFrame<T>::locate(const cplx<T>& z) const {
  FramePoint<T> p = from_s(oc_->phi_inv(z));
  p.z = z;
  return p;
}

template <class T>
FramePoint<T> ConformalFrame<T>::from_zeta(const cplx<T>& zeta) const {
  FramePoint<T> p;
  p.zeta = zeta;
  p.w = zeta / (rot_ * u_);
  p.s = psi_->inverse(p.w);
  p.z = oc_->phi(p.s);
  return p;
}

template <class T>
FramePoint<T> ConformalFrame<T>::infinity() const {
  FramePoint<T> p;
  p.infinite = true;
  return p;
}

template <class T>
cplx<T> ConformalFrame<T>::dphi(const FramePoint<T>& p) const {
  if (p.infinite) return rot_ * a_inf_;
  return rot_ * u_ / (psi_->inverse_derivative(p.w) * oc_->dphi(p.s));
}

template <class T>
cplx<T> ConformalFrame<T>::phi_derivative_at_base() const {
  return dphi(base_fp_);
}

template <class T>
cplx<T> ConformalFrame<T>::mobius(const FramePoint<T>& p) const {
  if (z0_.infinite) {
    if (p.infinite) throw DomainError("B_inf is infinite at infinity");
    return p.zeta;
  }
  if (p.infinite) return -c_ * a_;
  return c_ * (cplx<T>(1) - a_ * p.zeta) / (p.zeta - a_);
}

template <class T>
cplx<T> ConformalFrame<T>::dmobius(const FramePoint<T>& p) const {
  if (z0_.infinite) return dphi(p);
  if (p.infinite) return cplx<T>(0);
  const cplx<T> d = p.zeta - a_;
  return c_ * (a_ * a_ - T(1)) * dphi(p) / (d * d);
}

template <class T>
T ConformalFrame<T>::poisson(const cplx<T>& zeta) const {
  if (z0_.infinite) return T(1);
  return (a_ * a_ - T(1)) / norm(zeta - a_);
}

template <class T>
T ConformalFrame<T>::sqrt_endpoint_distance(const cplx<T>& s) const {
  using std::abs;
  return abs(arc().B() - arc().A()) * abs(s + T(1)) * abs(s - T(1)) / (T(4) * abs(s));
}

namespace {

template <class T>
BoundaryPoint<T> complete_boundary_point(const ConformalFrame<T>& f, FramePoint<T> own, const T& sigma) {
  using std::abs;
  using std::cos;
  using std::sin;
  BoundaryPoint<T> bp;
  bp.sigma = wrap_angle(sigma);
  bp.side = OpenedCurve<T>::side_of_sigma(bp.sigma);
  const T c = cos(bp.sigma / T(2));
  const T s = sin(bp.sigma / T(2));
  bp.t = c * c;
  bp.tc = s * s;
  bp.own = own;
  bp.mate.s = cplx<T>(1) / own.s;
  bp.mate.w = f.psi()(bp.mate.s);
  bp.mate.zeta = f.zeta_factor() * bp.mate.w;
  bp.mate.z = own.z;
  bp.psi_reg = abs(own.s) / abs(f.psi().inverse_derivative(own.w));
  bp.psi_reg_mate = abs(bp.mate.s) / abs(f.psi().inverse_derivative(bp.mate.w));
  return bp;
}

}  // namespace

template <class T>
BoundaryPoint<T> ConformalFrame<T>::boundary_point(const cplx<T>& zeta) const {
  using std::abs;
  const FramePoint<T> own = from_zeta(zeta / abs(zeta));
  const T sigma = oc_->sigma_of_theta(arg(own.s));
  return complete_boundary_point(*this, own, sigma);
}

template <class T>
BoundaryPoint<T> ConformalFrame<T>::boundary_point_at(const T& t, const T& tc, Side side) const {
  using std::abs;
  using std::atan2;
  using std::sqrt;
  T sigma = T(2) * atan2(sqrt(std::max(tc, T(0))), sqrt(std::max(t, T(0))));
  if (side == Side::minus) sigma = two_pi<T>() - sigma;
  FramePoint<T> own = from_s(oc_->s_of_sigma(sigma));
  own.zeta /= abs(own.zeta);
  return complete_boundary_point(*this, own, sigma);
}

template <class T>
T ConformalFrame<T>::zeta_angle_of_B() const {
  return arg(rot_ * u_ * (*psi_)(cplx<T>(1)));
}

template <class T>
std::vector<BoundaryPoint<T>> ConformalFrame<T>::circle_points(std::size_t M, Placement placement,
                                                               std::vector<T>* weights) const {
  using std::abs;
  if (M < 8 || !is_power_of_two(M)) throw std::invalid_argument("node count must be a power of two >= 8");
  const cplx<T> zb = cis(zeta_angle_of_B());
  std::vector<cplx<T>> zeta(M);
  const bool harmonic = placement == Placement::harmonic && !z0_.infinite;
  if (harmonic) {
    const cplx<T> bb = c_ * (cplx<T>(1) - a_ * zb) / (zb - a_);
    for (std::size_t j = 0; j < M; ++j) {
      const cplx<T> beta = bb * cis<T>(two_pi<T>() * (T(j) + T(0.5)) / T(M));
      const cplx<T> z = (a_ * beta + c_) / (beta + c_ * a_);
      zeta[j] = z / abs(z);
    }
  } else {
    for (std::size_t j = 0; j < M; ++j) zeta[j] = zb * cis<T>(two_pi<T>() * (T(j) + T(0.5)) / T(M));
  }
  std::vector<BoundaryPoint<T>> pts(M);
  parallel_for(M, [&](std::size_t j) { pts[j] = boundary_point(zeta[j]); });
  if (weights) {
    weights->assign(M, T(1) / T(M));
    if (!harmonic && !z0_.infinite)
      for (std::size_t j = 0; j < M; ++j) (*weights)[j] = poisson(zeta[j]) / T(M);
  }
  return pts;
}

template <class T>
cplx<T> ConformalFrame<T>::raw_endpoint_log(const FramePoint<T>& p, bool at_A) const {
  using std::abs;
  using std::log;
  const T base = log(abs(arc().B() - arc().A()) / T(4));
  if (p.infinite) return cplx<T>(base + psi_->g0(), T(0));
  const cplx<T> inv = cplx<T>(1) / p.s;
  const cplx<T> f = at_A ? cplx<T>(1) + inv : cplx<T>(1) - inv;
  return cplx<T>(base) + T(2) * log(f) + psi_->log_ratio(cplx<T>(1) / p.w);
}

template <class T>
cplx<T> ConformalFrame<T>::endpoint_log(const FramePoint<T>& p, bool at_A) const {
  return raw_endpoint_log(p, at_A) - (at_A ? shift_A_ : shift_B_);
}

template <class T>
std::shared_ptr<const ConformalFrame<T>> build_frame(std::shared_ptr<const OpenedCurve<T>> oc,
                                                     std::shared_ptr<const ExteriorMap<T>> psi,
                                                     const BasePoint<T>& z0) {
  return std::make_shared<const ConformalFrame<T>>(std::move(oc), std::move(psi), z0);
}

template <class T>
std::shared_ptr<const ConformalFrame<T>> build_frame(const ArcGeometry<T>& arc, const BasePoint<T>& z0) {
  auto oc = std::make_shared<const OpenedCurve<T>>(arc);
  auto psi = std::make_shared<const ExteriorMap<T>>(exterior_map_of_opened_curve(*oc));
  return build_frame<T>(oc, psi, z0);
}

template <class T>
T HarmonicMeasure<T>::side_density(const BoundaryPoint<T>& p) const {
  const auto& f = *frame_;
  return f.poisson(p.own.zeta) * p.psi_reg / (two_pi<T>() * f.sqrt_endpoint_distance(p.own.s));
}

template <class T>
T HarmonicMeasure<T>::mate_density(const BoundaryPoint<T>& p) const {
  const auto& f = *frame_;
  return f.poisson(p.mate.zeta) * p.psi_reg_mate / (two_pi<T>() * f.sqrt_endpoint_distance(p.own.s));
}

template <class T>
T HarmonicMeasure<T>::density(const BoundaryPoint<T>& p) const {
  return side_density(p) + mate_density(p);
}

template <class T>
T HarmonicMeasure<T>::regularized(const BoundaryPoint<T>& p) const {
  const auto& f = *frame_;
  return (f.poisson(p.own.zeta) * p.psi_reg + f.poisson(p.mate.zeta) * p.psi_reg_mate) / two_pi<T>();
}

template <class T>
T HarmonicMeasure<T>::density_at(const T& t) const {
  if (!(t > 0 && t < 1)) throw DomainError("endpoint singularity");
  return density(frame_->boundary_point_at(t, T(1) - t, Side::plus));
}

template <class T>
T HarmonicMeasure<T>::regularized_at(const T& t) const {
  if (!(t > 0 && t < 1)) throw DomainError("endpoint singularity");
  return regularized(frame_->boundary_point_at(t, T(1) - t, Side::plus));
}

#define ARCSZEGO_INSTANTIATE(T)                                                                                  \
  template class ExteriorMap<T>;                                                                                 \
  template ExteriorMap<T> exterior_map_of_opened_curve<T>(const OpenedCurve<T>&, const TheodorsenOptions&);      \
  template class ConformalFrame<T>;                                                                              \
  template class HarmonicMeasure<T>;                                                                             \
  template std::shared_ptr<const ConformalFrame<T>> build_frame<T>(                                              \
      std::shared_ptr<const OpenedCurve<T>>, std::shared_ptr<const ExteriorMap<T>>, const BasePoint<T>&);        \
  template std::shared_ptr<const ConformalFrame<T>> build_frame<T>(const ArcGeometry<T>&, const BasePoint<T>&);

ARCSZEGO_INSTANTIATE(double)
ARCSZEGO_INSTANTIATE(HighReal)

}  // namespace arcszego
