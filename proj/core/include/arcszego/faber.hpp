#pragma once

#include "arcszego/conformal.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace arcszego {

template <class T>
using AnalyticFunction = std::function<cplx<T>(const FramePoint<T>&)>;

// T(w) = (1/2 pi i) oint_{|Phi| = R} F(z) Phi(z)^n / (z - w) dz by the
// trapezoid rule in arg Phi. The contour samples are computed once; each
// evaluation is a dot product.
template <class T>
class FaberPolynomial {
 public:
  FaberPolynomial(std::shared_ptr<const ConformalFrame<T>> frame, const AnalyticFunction<T>& F, std::size_t n, T R,
                  std::size_t nodes = 4096);

  std::size_t degree() const { return n_; }
  const T& radius() const { return R_; }
  const std::vector<cplx<T>>& contour() const { return z_; }

  // Cauchy integral; w must lie inside the level curve |Phi| = R.
  cplx<T> operator()(const cplx<T>& w) const;
  std::vector<cplx<T>> operator()(const std::vector<cplx<T>>& w) const;

  // Taylor coefficients about center(), degree n.
  const std::vector<cplx<T>>& coefficients() const { return coef_; }
  const cplx<T>& center() const { return center_; }
  cplx<T> leading_coefficient() const { return coef_.back(); }
  cplx<T> expanded(const cplx<T>& w) const;

 private:
  std::shared_ptr<const ConformalFrame<T>> frame_;
  std::size_t n_;
  T R_;
  std::vector<cplx<T>> z_;
  std::vector<cplx<T>> c_;
  std::vector<cplx<T>> coef_;
  cplx<T> center_{};
};

// R = r min(1.5, 10^{6/n}) with r the largest |Phi(w)| over the points
// (at least 1): the contour stays clear of every point while R^n/r^n stays
// below 1e6.
template <class T>
T default_contour_radius(const ConformalFrame<T>& frame, std::size_t n, const std::vector<cplx<T>>& points);

template <class T>
std::vector<cplx<T>> faber_transform(std::shared_ptr<const ConformalFrame<T>> frame, const AnalyticFunction<T>& F,
                                     std::size_t n, T R, const std::vector<cplx<T>>& points);

}  // namespace arcszego
