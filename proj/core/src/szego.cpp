#include "arcszego/szego.hpp"

#include "arcszego/error.hpp"
#include "arcszego/fourier.hpp"
#include "arcszego/parallel.hpp"
#include "arcszego/summation.hpp"

#include <algorithm>
#include <stdexcept>

namespace arcszego {

namespace {

template <class T>
cplx<T> inverse_zeta(const FramePoint<T>& p) {
  return p.infinite ? cplx<T>(0) : cplx<T>(1) / p.zeta;
}

template <class T>
cplx<T> ipow(cplx<T> x, std::size_t n) {
  cplx<T> r(1);
  while (n) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

template <class T>
T grid_integral(const SpectralGrid<T>& grid, const std::vector<T>& data) {
  return pairwise_sum<T>(std::size_t(0), data.size(), [&](std::size_t j) { return grid.weights[j] * data[j]; });
}

}  // namespace

template <class T>
SpectralGrid<T> make_spectral_grid(const ConformalFrame<T>& frame, std::size_t M) {
  SpectralGrid<T> g;
  g.points = frame.circle_points(M, Placement::poisson, &g.weights);
  g.first_angle = frame.zeta_angle_of_B() + pi<T>() / T(M);
  return g;
}

template <class T>
OuterFunction<T>::OuterFunction(std::shared_ptr<const ConformalFrame<T>> frame, std::vector<cplx<T>> h, T exponent_A,
                                T exponent_B)
    : frame_(std::move(frame)), h_(std::move(h)), exp_A_(exponent_A), exp_B_(exponent_B) {}

template <class T>
OuterFunction<T> OuterFunction<T>::zero(std::shared_ptr<const ConformalFrame<T>> frame) {
  OuterFunction f(std::move(frame), {}, T(0), T(0));
  f.zero_ = true;
  return f;
}

template <class T>
cplx<T> OuterFunction<T>::log_value(const FramePoint<T>& p) const {
  if (zero_) throw DomainError("the zero function has no logarithm");
  cplx<T> r = power_series<T>(h_, inverse_zeta(p));
  if (exp_A_ != 0) r += exp_A_ * frame_->endpoint_log(p, true);
  if (exp_B_ != 0) r += exp_B_ * frame_->endpoint_log(p, false);
  return r;
}

template <class T>
cplx<T> OuterFunction<T>::value(const FramePoint<T>& p) const {
  using std::exp;
  if (zero_) return cplx<T>(0);
  return exp(log_value(p));
}

template <class T>
cplx<T> OuterFunction<T>::sqrt_value(const FramePoint<T>& p) const {
  using std::exp;
  if (zero_) return cplx<T>(0);
  return exp(log_value(p) / T(2));
}

template <class T>
T OuterFunction<T>::log_at_base() const {
  return log_value(frame_->base_point()).real();
}

template <class T>
T OuterFunction<T>::at_base() const {
  using std::exp;
  if (zero_) return T(0);
  return exp(log_at_base());
}

template <class T>
OuterFunction<T> outer_function(std::shared_ptr<const ConformalFrame<T>> frame, const SpectralGrid<T>& grid,
                                const LogData<T>& data) {
  const std::size_t M = grid.size();
  if (data.regular.size() != M) throw std::invalid_argument("log data does not match the spectral grid");
  const auto c = fourier_coefficients(data.regular);
  std::vector<cplx<T>> h(M / 2);
  h[0] = cplx<T>(c[0].real());
  for (std::size_t k = 1; k < M / 2; ++k) h[k] = T(2) * c[M - k] * cis<T>(T(k) * grid.first_angle);
  truncate_series(h, epsilon<T>());
  const cplx<T> v0 = inverse_zeta(frame->base_point());
  const T im = power_series<T>(h, v0).imag();
  h[0] -= cplx<T>(T(0), im - data.phase);
  return OuterFunction<T>(std::move(frame), std::move(h), data.exponent_A, data.exponent_B);
}

template <class T>
OuterFunction<T> szego_function(std::shared_ptr<const ConformalFrame<T>> frame, const SpectralGrid<T>& grid,
                                const Density<T>& g, SzegoCheck* check, T* log_integral) {
  const std::size_t M = grid.size();
  LogData<T> data;
  data.regular.resize(M);
  data.exponent_A = g.exponent_A;
  data.exponent_B = g.exponent_B;
  std::vector<char> clipped(M);
  parallel_for(M, [&](std::size_t j) {
    const auto& p = grid.points[j];
    clipped[j] = !(g(p) > density_floor<T>());
    data.regular[j] = g.regularized_log(p, *frame);
  });
  T I = grid_integral(grid, data.regular);
  if (g.exponent_A != 0) I += g.exponent_A * frame->endpoint_log_integral(true);
  if (g.exponent_B != 0) I += g.exponent_B * frame->endpoint_log_integral(false);
  bool adjacent = false;
  std::size_t count = 0;
  for (std::size_t j = 0; j < M; ++j) {
    count += clipped[j] ? 1 : 0;
    if (clipped[j] && clipped[(j + 1) % M]) adjacent = true;
  }
  const bool ok = !(I < T(-1e6)) && !adjacent;
  if (check) *check = {ok, to_double(I), count};
  if (log_integral) *log_integral = I;
  if (!ok) return OuterFunction<T>::zero(frame);
  return outer_function(frame, grid, data);
}

template <class T>
std::shared_ptr<const SzegoFunctions<T>> build_szego(std::shared_ptr<const ConformalFrame<T>> frame,
                                                     const Density<T>& f, std::size_t M) {
  using std::arg;
  using std::log;
  auto sz = std::make_shared<SzegoFunctions<T>>();
  sz->frame = frame;
  sz->grid = make_spectral_grid(*frame, M);
  const auto& grid = sz->grid;
  SzegoCheck chk;
  sz->Rf = szego_function(frame, grid, f, &chk, &sz->log_integral_f);
  sz->szego_condition_ok = chk.ok;
  sz->clipped_nodes = chk.clipped_nodes;

  const HarmonicMeasure<T> hm(frame);
  LogData<T> rho, R, cross;
  rho.regular.resize(M);
  R.regular.resize(M);
  cross.regular.resize(M);
  rho.exponent_A = rho.exponent_B = T(-0.5);
  parallel_for(M, [&](std::size_t j) {
    const auto& p = grid.points[j];
    const T reg = hm.regularized(p);
    const T dB = frame->poisson(p.own.zeta) * p.psi_reg;  // |B'| sqrt(|z-A||z-B|)
    rho.regular[j] = log(reg);
    R.regular[j] = log(reg / dB);
    cross.regular[j] = log(p.psi_reg / reg);
  });
  if (!frame->at_infinity()) cross.phase = arg(frame->phi_derivative_at_base());
  sz->Rrho = outer_function(frame, grid, rho);
  sz->R = outer_function(frame, grid, R);
  sz->dphi_over_Rrho = outer_function(frame, grid, cross);
  sz->log_integral_rho =
      grid_integral(grid, rho.regular) -
      (frame->endpoint_log_integral(true) + frame->endpoint_log_integral(false)) / T(2);
  return sz;
}

template <class T>
KernelData<T>::KernelData(std::shared_ptr<const SzegoFunctions<T>> sz) : sz_(std::move(sz)) {
  if (!sz_->szego_condition_ok) throw DomainError("kernel undefined: Szego condition fails (R_f = 0)");
  const auto& b = sz_->frame->base_point();
  log_base_ = log_RRf(b, true);
  diag_ = kernel_from_logs(b, log_base_, b, log_base_).real();
  const cplx<T> lw = log_RRf(b, false);
  diag_omega_ = kernel_from_logs(b, lw, b, lw).real();
}

template <class T>
cplx<T> KernelData<T>::log_RRf(const FramePoint<T>& p, bool with_f) const {
  cplx<T> l = sz_->R.log_value(p);
  if (with_f) l += sz_->Rf.log_value(p);
  return l;
}

template <class T>
cplx<T> KernelData<T>::kernel_from_logs(const FramePoint<T>& z, const cplx<T>& Lz, const FramePoint<T>& w,
                                        const cplx<T>& Lw) const {
  using std::exp;
  const auto& f = *sz_->frame;
  const cplx<T> vz = inverse_zeta(z);
  const cplx<T> vw = conj(inverse_zeta(w));
  cplx<T> factor = cplx<T>(1) / (cplx<T>(1) - vz * vw);
  if (!f.at_infinity()) {
    const T a = f.phi_at_base();
    factor *= (a - vz) * (a - vw) / (a * a - T(1));
  }
  return exp(-(Lz + conj(Lw)) / T(2)) * factor / two_pi<T>();
}

template <class T>
cplx<T> KernelData<T>::kernel(const FramePoint<T>& z, const FramePoint<T>& w) const {
  return kernel_from_logs(z, log_RRf(z, true), w, log_RRf(w, true));
}

template <class T>
cplx<T> KernelData<T>::kernel_cross(const FramePoint<T>& z, const FramePoint<T>& w) const {
  using std::exp;
  auto S = [&](const FramePoint<T>& p) {
    return exp((sz_->dphi_over_Rrho.log_value(p) - sz_->Rf.log_value(p)) / T(2));
  };
  const cplx<T> vz = inverse_zeta(z);
  const cplx<T> vw = conj(inverse_zeta(w));
  return S(z) * conj(S(w)) / (two_pi<T>() * (cplx<T>(1) - vz * vw));
}

template <class T>
cplx<T> KernelData<T>::extremal(const FramePoint<T>& p) const {
  using std::exp;
  return exp((log_base_ - log_RRf(p, true)) / T(2));
}

template <class T>
cplx<T> KernelData<T>::comparison(const BoundaryPoint<T>& p, std::size_t n) const {
  return ipow<T>(p.own.zeta, n) * extremal(p.own) + ipow<T>(p.mate.zeta, n) * extremal(p.mate);
}

template <class T>
void KernelData<T>::check_branches() const {
  using std::abs;
  const auto& pts = sz_->grid.points;
  const std::size_t M = pts.size();
  std::vector<cplx<T>> F(M);
  parallel_for(M, [&](std::size_t j) { F[j] = extremal(pts[j].own); });
  // Neighbours on opposite sides straddle an endpoint, where F may turn by a
  // fixed angle; only same-side steps are checked.
  for (std::size_t j = 0; j < M; ++j) {
    const std::size_t k = (j + 1) % M;
    if (pts[j].side != pts[k].side) continue;
    if (abs(arg(F[k] / F[j])) > T(0.5)) throw NumericalError("square-root branch tracking failed");
  }
}

template <class T>
KernelData<T> kernel(std::shared_ptr<const SzegoFunctions<T>> sz) {
  KernelData<T> k(std::move(sz));
  k.check_branches();
  return k;
}

template <class T>
WidomLimit<T> widom_limit_rhs(std::shared_ptr<const SzegoFunctions<T>> sz) {
  using std::abs;
  using std::exp;
  WidomLimit<T> out;
  out.szego_condition_ok = sz->szego_condition_ok;
  if (!sz->szego_condition_ok) return out;
  const auto& f = *sz->frame;
  const T mass = exp(sz->log_integral_f + sz->log_integral_rho);
  if (f.at_infinity()) {
    out.formula_A = two_pi<T>() / f.phi_inf_derivative() * mass;
  } else {
    const T a = f.phi_at_base();
    out.formula_A = (T(1) - T(1) / (a * a)) * two_pi<T>() / abs(f.phi_derivative_at_base()) * mass;
  }
  const KernelData<T> k(sz);
  out.formula_B = sz->Rf.at_base() / k.omega_diagonal();
  return out;
}

#define ARCSZEGO_INSTANTIATE(T)                                                                                      \
  template struct SpectralGrid<T>;                                                                                   \
  template class OuterFunction<T>;                                                                                   \
  template struct SzegoFunctions<T>;                                                                                 \
  template class KernelData<T>;                                                                                      \
  template SpectralGrid<T> make_spectral_grid<T>(const ConformalFrame<T>&, std::size_t);                             \
  template OuterFunction<T> outer_function<T>(std::shared_ptr<const ConformalFrame<T>>, const SpectralGrid<T>&,      \
                                              const LogData<T>&);                                                    \
  template OuterFunction<T> szego_function<T>(std::shared_ptr<const ConformalFrame<T>>, const SpectralGrid<T>&,      \
                                              const Density<T>&, SzegoCheck*, T*);                                     \
  template std::shared_ptr<const SzegoFunctions<T>> build_szego<T>(std::shared_ptr<const ConformalFrame<T>>,         \
                                                                   const Density<T>&, std::size_t);                  \
  template KernelData<T> kernel<T>(std::shared_ptr<const SzegoFunctions<T>>);                                        \
  template WidomLimit<T> widom_limit_rhs<T>(std::shared_ptr<const SzegoFunctions<T>>);

ARCSZEGO_INSTANTIATE(double)
ARCSZEGO_INSTANTIATE(HighReal)

}  // namespace arcszego
