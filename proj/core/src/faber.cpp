#include "arcszego/faber.hpp"

#include "arcszego/error.hpp"
#include "arcszego/fourier.hpp"
#include "arcszego/parallel.hpp"
#include "arcszego/summation.hpp"

#include <algorithm>
#include <stdexcept>

namespace arcszego {

template <class T>
FaberPolynomial<T>::FaberPolynomial(std::shared_ptr<const ConformalFrame<T>> frame, const AnalyticFunction<T>& F,
                                    std::size_t n, T R, std::size_t nodes)
    : frame_(std::move(frame)), n_(n), R_(R) {
  if (!(R > 1)) throw std::invalid_argument("faber: contour radius must exceed 1");
  if (!is_power_of_two(nodes) || nodes < 64) throw std::invalid_argument("faber: node count must be a power of two >= 64");
  const auto& f = *frame_;
  z_.resize(nodes);
  c_.resize(nodes);
  parallel_for(nodes, [&](std::size_t j) {
    const cplx<T> zeta = R * cis<T>(two_pi<T>() * T(j) / T(nodes));
    const FramePoint<T> p = f.from_zeta(zeta);
    cplx<T> zp(1);
    for (std::size_t k = 0; k <= n; ++k) zp *= zeta;
    z_[j] = p.z;
    c_[j] = F(p) * zp / (f.dphi(p) * T(nodes));
  });
  // Taylor coefficients come from a wider contour: on |Phi| = R close to 1
  // the terms c_j/(z_j - center)^{k+1} cancel catastrophically.
  center_ = (f.arc().A() + f.arc().B()) / T(2);
  const T Rc = std::max(R, T(4));
  std::vector<cplx<T>> zc(nodes), cc(nodes);
  parallel_for(nodes, [&](std::size_t j) {
    const cplx<T> zeta = Rc * cis<T>(two_pi<T>() * T(j) / T(nodes));
    const FramePoint<T> p = f.from_zeta(zeta);
    cplx<T> zp(1);
    for (std::size_t k = 0; k <= n; ++k) zp *= zeta;
    zc[j] = p.z - center_;
    cc[j] = F(p) * zp / (f.dphi(p) * T(nodes));
  });
  coef_.resize(n + 1);
  parallel_for(n + 1, [&](std::size_t k) {
    coef_[k] = pairwise_sum<cplx<T>>(std::size_t(0), nodes, [&](std::size_t j) {
      cplx<T> dp = zc[j];
      for (std::size_t i = 0; i < k; ++i) dp *= zc[j];
      return cc[j] / dp;
    });
  });
}

template <class T>
cplx<T> FaberPolynomial<T>::operator()(const cplx<T>& w) const {
  using std::abs;
  const T r = abs(frame_->phi(w));
  if (abs(r - R_) < T(1e-6)) throw DomainError("evaluation point too close to contour");
  if (r > R_) throw DomainError("evaluation point outside the contour");
  return pairwise_sum<cplx<T>>(std::size_t(0), z_.size(), [&](std::size_t j) { return c_[j] / (z_[j] - w); });
}

template <class T>
std::vector<cplx<T>> FaberPolynomial<T>::operator()(const std::vector<cplx<T>>& w) const {
  std::vector<cplx<T>> out(w.size());
  parallel_for(w.size(), [&](std::size_t i) { out[i] = (*this)(w[i]); });
  return out;
}

template <class T>
cplx<T> FaberPolynomial<T>::expanded(const cplx<T>& w) const {
  const cplx<T> x = w - center_;
  cplx<T> acc(0);
  for (std::size_t k = coef_.size(); k-- > 0;) acc = acc * x + coef_[k];
  return acc;
}

template <class T>
T default_contour_radius(const ConformalFrame<T>& frame, std::size_t n, const std::vector<cplx<T>>& points) {
  using std::abs;
  using std::pow;
  T r(1);
  for (const auto& w : points) r = std::max(r, T(abs(frame.phi(w))));
  T grow(1.5);
  if (n > 0) grow = std::min(grow, T(pow(T(10), T(6) / T(n))));
  return r * grow;
}

template <class T>
std::vector<cplx<T>> faber_transform(std::shared_ptr<const ConformalFrame<T>> frame, const AnalyticFunction<T>& F,
                                     std::size_t n, T R, const std::vector<cplx<T>>& points) {
  return FaberPolynomial<T>(std::move(frame), F, n, R)(points);
}

#define ARCSZEGO_INSTANTIATE(T)                                                                                    \
  template class FaberPolynomial<T>;                                                                               \
  template T default_contour_radius<T>(const ConformalFrame<T>&, std::size_t, const std::vector<cplx<T>>&);        \
  template std::vector<cplx<T>> faber_transform<T>(std::shared_ptr<const ConformalFrame<T>>,                       \
                                                   const AnalyticFunction<T>&, std::size_t, T,                     \
                                                   const std::vector<cplx<T>>&);

ARCSZEGO_INSTANTIATE(double)
ARCSZEGO_INSTANTIATE(HighReal)

}  // namespace arcszego
