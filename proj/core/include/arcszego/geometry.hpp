#pragma once

#include "arcszego/scalar.hpp"

#include <cstddef>
#include <vector>

namespace arcszego {

enum class ArcKind { segment, general };

// Which boundary value of a two-sided arc point. `plus` is the image of the
// upper half of the parameter circle; atoms live on the arc itself.
enum class Side { plus, minus, endpoint, atom };

const char* side_name(Side s);

// A point of the arc together with its parameter. tc = 1 - t is carried
// separately because it is needed accurately near the endpoint B.
template <class T>
struct ArcPoint {
  T t = 0;
  T tc = 1;
  cplx<T> z{};
  Side side = Side::plus;
};

// Jordan arc gamma: [0,1] -> C with gamma(0) = A and gamma(1) = B.
template <class T>
class ArcGeometry {
 public:
  static ArcGeometry segment(const cplx<T>& A, const cplx<T>& B);
  // Samples (t_j, gamma(t_j)), interpolated by barycentric Lagrange
  // interpolation. Chebyshev-spaced parameters are expected; t = 0 and t = 1
  // must be among them.
  static ArcGeometry from_samples(std::vector<T> t, std::vector<cplx<T>> z, T holder_exponent = T(1));

  ArcKind kind() const { return kind_; }
  const cplx<T>& A() const { return A_; }
  const cplx<T>& B() const { return B_; }
  T holder_exponent() const { return alpha_; }

  cplx<T> gamma(const T& t) const;
  cplx<T> dgamma(const T& t) const;

  // Throws DomainError for A = B, a non-injective sample grid or a vanishing
  // derivative.
  void validate() const;

  // Distance from z to the arc (sampled, then locally refined).
  T distance(const cplx<T>& z) const;

 private:
  ArcKind kind_ = ArcKind::segment;
  cplx<T> A_{}, B_{};
  T alpha_ = T(1);
  std::vector<T> tn_;
  std::vector<cplx<T>> zn_;
  std::vector<T> bw_;
};

// Point of the opened curve Gamma' with its parameter. For the segment the
// parameter is the polar angle of s on the unit circle.
template <class T>
struct SidedPoint {
  cplx<T> z{};
  Side side = Side::plus;
  T theta = 0;
  cplx<T> s{};
};

// phi(s) = ((B-A)(s + 1/s)/2 + B + A)/2 maps the exterior of Gamma' onto the
// complement of the arc. Gamma' is parametrized by sigma in [0, 2pi) through
// t = (1 + cos sigma)/2; sigma in (0, pi) is the plus side and the minus side
// is its reciprocal, s(2pi - sigma) = 1/s(sigma).
template <class T>
class OpenedCurve {
 public:
  explicit OpenedCurve(const ArcGeometry<T>& arc, std::size_t table_size = 2048);

  const ArcGeometry<T>& arc() const { return arc_; }
  bool is_segment() const { return arc_.kind() == ArcKind::segment; }

  cplx<T> normalized(const cplx<T>& z) const;  // (2z - A - B)/(B - A)
  cplx<T> phi(const cplx<T>& s) const;
  cplx<T> dphi(const cplx<T>& s) const;
  // Exterior branch, asymptotic to 4z/(B-A) at infinity.
  cplx<T> phi_inv(const cplx<T>& z) const;
  cplx<T> dphi_inv(const cplx<T>& z) const;

  cplx<T> s_of_sigma(const T& sigma) const;
  // Inverse of sigma -> arg s(sigma); Gamma' must be star-shaped about 0.
  T sigma_of_theta(const T& theta) const;
  // Polar radius of Gamma' in direction theta.
  T radius(const T& theta) const;

  static T t_of_sigma(const T& sigma);
  static Side side_of_sigma(const T& sigma);

 private:
  cplx<T> plus_branch(const T& sigma) const;
  T plus_sigma(const T& theta) const;

  ArcGeometry<T> arc_;
  std::vector<T> sig_;
  std::vector<cplx<T>> tab_;
  std::vector<T> arg_;
};

template <class T>
OpenedCurve<T> open_arc(const ArcGeometry<T>& arc);

// M equispaced parameters sigma_j = 2 pi j / M on Gamma'. M >= 8, power of two.
template <class T>
std::vector<SidedPoint<T>> boundary_samples(const OpenedCurve<T>& oc, std::size_t M);

}  // namespace arcszego
