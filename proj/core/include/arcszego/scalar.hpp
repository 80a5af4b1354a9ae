#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <complex>
#include <limits>

namespace arcszego {

namespace bmp = boost::multiprecision;

// 120 significant decimal digits. Expression templates are off so that
// generic code can use `auto` freely.
using HighReal = bmp::number<bmp::cpp_bin_float<120>, bmp::et_off>;
using HighComplex = bmp::number<bmp::complex_adaptor<bmp::cpp_bin_float<120>>, bmp::et_off>;

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  using complex = std::complex<double>;
  static constexpr const char* name = "double";
};

template <>
struct scalar_traits<HighReal> {
  using complex = HighComplex;
  static constexpr const char* name = "high";
};

template <class T>
using cplx = typename scalar_traits<T>::complex;

template <class T>
inline T pi() {
  return boost::math::constants::pi<T>();
}

template <class T>
inline T two_pi() {
  return boost::math::constants::two_pi<T>();
}

template <class T>
inline T epsilon() {
  return std::numeric_limits<T>::epsilon();
}

template <class T>
inline cplx<T> cis(const T& theta) {
  using std::cos;
  using std::sin;
  return cplx<T>(cos(theta), sin(theta));
}

template <class T>
inline double to_double(const T& x) {
  return static_cast<double>(x);
}

template <class T>
inline std::complex<double> to_cdouble(const cplx<T>& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

template <class T>
inline cplx<T> from_cdouble(const std::complex<double>& z) {
  return cplx<T>(T(z.real()), T(z.imag()));
}

// Angle reduced to [0, 2pi).
template <class T>
inline T wrap_angle(T theta) {
  using std::floor;
  const T tp = two_pi<T>();
  theta -= tp * floor(theta / tp);
  if (theta >= tp) theta -= tp;
  if (theta < 0) theta = 0;
  return theta;
}

}  // namespace arcszego
