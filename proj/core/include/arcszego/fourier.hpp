#pragma once

#include "arcszego/scalar.hpp"

#include <cstddef>
#include <vector>

namespace arcszego {

bool is_power_of_two(std::size_t n);

// In-place radix-2 transform, unnormalized. forward: X_k = sum_j x_j e^{-2 pi i jk/N};
// the inverse uses the conjugate kernel. Generic in the scalar so that the
// multiprecision path gets the same code.
template <class T>
void fft(std::vector<cplx<T>>& a, bool inverse = false);

// c_m = (1/N) sum_j f_j e^{-2 pi i jm/N}, returned in FFT order (index m holds
// frequency m for m < N/2 and m - N otherwise).
template <class T>
std::vector<cplx<T>> fourier_coefficients(const std::vector<T>& samples);

// Frequency of FFT slot m for length N.
inline long long frequency_of(std::size_t m, std::size_t n) {
  return m < n / 2 ? static_cast<long long>(m) : static_cast<long long>(m) - static_cast<long long>(n);
}

// Horner evaluation of sum_k c_k v^k and of its derivative.
template <class T>
cplx<T> power_series(const std::vector<cplx<T>>& c, const cplx<T>& v);
template <class T>
cplx<T> power_series_derivative(const std::vector<cplx<T>>& c, const cplx<T>& v);

// Drops trailing coefficients below rel * max |c_k|, or below the noise floor
// (8x the median modulus over the upper half) when that is larger. Keeps at
// least one.
template <class T>
void truncate_series(std::vector<cplx<T>>& c, const T& rel);

}  // namespace arcszego
