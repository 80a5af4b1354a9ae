#include "arcszego/fourier.hpp"

#include <algorithm>

#include <stdexcept>
#include <utility>

namespace arcszego {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

template <class T>
void fft(std::vector<cplx<T>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (!is_power_of_two(n)) throw std::invalid_argument("fft length must be a power of two");
  if (n == 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  // Twiddles for the largest stage; smaller stages stride through them.
  std::vector<cplx<T>> tw(n / 2);
  const T sign = inverse ? T(1) : T(-1);
  for (std::size_t k = 0; k < n / 2; ++k)
    tw[k] = cis<T>(sign * two_pi<T>() * T(k) / T(n));

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cplx<T> u = a[i + k];
        const cplx<T> v = a[i + k + half] * tw[k * stride];
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

template <class T>
std::vector<cplx<T>> fourier_coefficients(const std::vector<T>& samples) {
  std::vector<cplx<T>> a(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) a[j] = cplx<T>(samples[j], T(0));
  fft<T>(a, false);
  const T inv = T(1) / T(samples.size());
  for (auto& x : a) x *= inv;
  return a;
}

template <class T>
cplx<T> power_series(const std::vector<cplx<T>>& c, const cplx<T>& v) {
  cplx<T> acc(0);
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * v + c[k];
  return acc;
}

template <class T>
cplx<T> power_series_derivative(const std::vector<cplx<T>>& c, const cplx<T>& v) {
  cplx<T> acc(0);
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * v + c[k] * T(static_cast<long long>(k));
  return acc;
}

template <class T>
void truncate_series(std::vector<cplx<T>>& c, const T& rel) {
  using std::abs;
  T mx(0);
  for (const auto& x : c) {
    const T m = abs(x);
    if (m > mx) mx = m;
  }
  T cut = rel * mx;
  if (c.size() >= 16) {
    std::vector<T> tail;
    for (std::size_t k = c.size() / 2; k < c.size(); ++k) tail.push_back(abs(c[k]));
    std::nth_element(tail.begin(), tail.begin() + tail.size() / 2, tail.end());
    cut = std::max(cut, T(8) * tail[tail.size() / 2]);
  }
  std::size_t keep = c.size();
  while (keep > 1 && abs(c[keep - 1]) <= cut) --keep;
  c.resize(keep);
}

#define ARCSZEGO_INSTANTIATE(T)                                                              \
  template void fft<T>(std::vector<cplx<T>>&, bool);                                         \
  template std::vector<cplx<T>> fourier_coefficients<T>(const std::vector<T>&);              \
  template cplx<T> power_series<T>(const std::vector<cplx<T>>&, const cplx<T>&);             \
  template cplx<T> power_series_derivative<T>(const std::vector<cplx<T>>&, const cplx<T>&);  \
  template void truncate_series<T>(std::vector<cplx<T>>&, const T&);

ARCSZEGO_INSTANTIATE(double)
ARCSZEGO_INSTANTIATE(HighReal)

}  // namespace arcszego
