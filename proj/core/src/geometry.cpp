#include "arcszego/geometry.hpp"

#include "arcszego/error.hpp"
#include "arcszego/fourier.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace arcszego {

const char* side_name(Side s) {
  switch (s) {
    case Side::plus: return "plus";
    case Side::minus: return "minus";
    case Side::endpoint: return "endpoint";
    case Side::atom: return "atom";
  }
  return "?";
}

template <class T>
ArcGeometry<T> ArcGeometry<T>::segment(const cplx<T>& A, const cplx<T>& B) {
  ArcGeometry g;
  g.kind_ = ArcKind::segment;
  g.A_ = A;
  g.B_ = B;
  return g;
}

template <class T>
ArcGeometry<T> ArcGeometry<T>::from_samples(std::vector<T> t, std::vector<cplx<T>> z, T holder_exponent) {
  using std::abs;
  if (t.size() != z.size()) throw std::invalid_argument("sample arrays differ in length");
  if (t.size() < 129) throw DomainError("general arc needs at least 129 samples");
  std::vector<std::size_t> order(t.size());
  std::iota(order.begin(), order.end(), std::size_t(0));
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });
  ArcGeometry g;
  g.kind_ = ArcKind::general;
  g.alpha_ = holder_exponent;
  for (std::size_t i : order) {
    g.tn_.push_back(t[i]);
    g.zn_.push_back(z[i]);
  }
  for (std::size_t i = 1; i < g.tn_.size(); ++i)
    if (!(g.tn_[i] > g.tn_[i - 1])) throw DomainError("arc sample parameters must be distinct");
  if (abs(g.tn_.front()) > T(1e-14) || abs(g.tn_.back() - T(1)) > T(1e-14))
    throw DomainError("arc samples must include t = 0 and t = 1");
  g.tn_.front() = T(0);
  g.tn_.back() = T(1);
  g.A_ = g.zn_.front();
  g.B_ = g.zn_.back();

  // Barycentric weights on the rescaled variable 4t, keeping the products O(1).
  const std::size_t n = g.tn_.size();
  g.bw_.assign(n, T(1));
  for (std::size_t j = 0; j < n; ++j) {
    T w(1);
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) w *= T(4) * (g.tn_[j] - g.tn_[k]);
    g.bw_[j] = T(1) / w;
  }
  T mx(0);
  for (const auto& w : g.bw_) mx = std::max(mx, T(abs(w)));
  for (auto& w : g.bw_) w /= mx;
  return g;
}

template <class T>
cplx<T> ArcGeometry<T>::gamma(const T& t) const {
  if (kind_ == ArcKind::segment) return A_ + (B_ - A_) * t;
  cplx<T> num(0);
  T den(0);
  for (std::size_t j = 0; j < tn_.size(); ++j) {
    const T d = t - tn_[j];
    if (d == 0) return zn_[j];
    const T c = bw_[j] / d;
    num += zn_[j] * c;
    den += c;
  }
  return num / den;
}

template <class T>
cplx<T> ArcGeometry<T>::dgamma(const T& t) const {
  using std::abs;
  if (kind_ == ArcKind::segment) return B_ - A_;
  const std::size_t n = tn_.size();
  std::size_t k = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (abs(t - tn_[i]) < abs(t - tn_[k])) k = i;
  if (t == tn_[k]) {
    cplx<T> acc(0);
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) acc += (zn_[j] - zn_[k]) * ((bw_[j] / bw_[k]) / (tn_[k] - tn_[j]));
    return acc;
  }
  // p - z_k is summed without z_k itself, so the nearest-node difference
  // quotient does not cancel when t sits next to a node.
  std::vector<T> c(n);
  T den(0);
  for (std::size_t j = 0; j < n; ++j) {
    c[j] = bw_[j] / (t - tn_[j]);
    den += c[j];
  }
  cplx<T> diff(0);
  for (std::size_t j = 0; j < n; ++j)
    if (j != k) diff += (zn_[j] - zn_[k]) * c[j];
  diff /= den;
  const cplx<T> p = zn_[k] + diff;
  cplx<T> num = diff * (c[k] / (t - tn_[k]));
  for (std::size_t j = 0; j < n; ++j)
    if (j != k) num += (p - zn_[j]) * (c[j] / (t - tn_[j]));
  return num / den;
}

template <class T>
void ArcGeometry<T>::validate() const {
  using std::abs;
  const T scale = abs(B_ - A_);
  if (!(scale > T(1e-14) * std::max(T(1), T(abs(A_))))) throw DomainError("degenerate arc");
  if (kind_ == ArcKind::segment) return;
  const std::size_t n = 512;
  std::vector<cplx<T>> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    const T t = T(i) / T(n - 1);
    pts[i] = gamma(t);
    if (!(abs(dgamma(t)) > T(1e-12) * scale)) throw DomainError("arc parametrization has vanishing derivative");
  }
  // Any crossing or overlap of non-adjacent chords of the sampled polyline.
  auto cross = [](const cplx<T>& a, const cplx<T>& b) { return T(a.real() * b.imag() - a.imag() * b.real()); };
  const T tol = T(1e-12) * scale * scale;
  auto on_segment = [&](const cplx<T>& p, const cplx<T>& a, const cplx<T>& b) {
    return abs(cross(b - a, p - a)) <= tol && ((p - a) * conj(p - b)).real() <= tol;
  };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const cplx<T>&a = pts[i], &b = pts[i + 1];
    for (std::size_t j = i + 2; j + 1 < n; ++j) {
      const cplx<T>&c = pts[j], &d = pts[j + 1];
      const T d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
      const T d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
      const bool proper = ((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) &&
                          ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol));
      if (proper || on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d))
        throw DomainError("arc is not injective");
    }
  }
}

template <class T>
T ArcGeometry<T>::distance(const cplx<T>& z) const {
  using std::abs;
  if (kind_ == ArcKind::segment) {
    const cplx<T> d = B_ - A_;
    T u = ((z - A_) * conj(d)).real() / norm(d);
    u = std::clamp(u, T(0), T(1));
    return abs(z - gamma(u));
  }
  const std::size_t n = 2048;
  std::size_t best = 0;
  T bd = abs(z - gamma(T(0)));
  for (std::size_t i = 1; i < n; ++i) {
    const T d = abs(z - gamma(T(i) / T(n - 1)));
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  const T h = T(1) / T(n - 1);
  const T lo = std::max(T(0), T(best) * h - h);
  const T hi = std::min(T(1), T(best) * h + h);
  std::uintmax_t it = 200;
  auto r = boost::math::tools::brent_find_minima([&](const T& t) { return T(abs(z - gamma(t))); }, lo, hi,
                                                 std::numeric_limits<T>::digits / 2, it);
  return std::min(bd, r.second);
}

template <class T>
OpenedCurve<T>::OpenedCurve(const ArcGeometry<T>& arc, std::size_t table_size) : arc_(arc) {
  using std::abs;
  using std::sqrt;
  arc_.validate();
  if (is_segment()) return;

  const std::size_t N = table_size;
  sig_.resize(N + 1);
  tab_.resize(N + 1);
  arg_.resize(N + 1);
  const cplx<T> I(T(0), T(1));
  for (std::size_t j = 0; j <= N; ++j) sig_[j] = pi<T>() * T(j) / T(N);
  tab_[0] = cplx<T>(1);
  tab_[N] = cplx<T>(-1);
  for (std::size_t j = 1; j < N; ++j) {
    const cplx<T> w = normalized(arc_.gamma(t_of_sigma(sig_[j])));
    const cplx<T> r = I * sqrt(cplx<T>(1) - w) * sqrt(cplx<T>(1) + w);
    const cplx<T> c1 = w + r, c2 = w - r;
    if (j == 1) {
      tab_[j] = c1.imag() >= c2.imag() ? c1 : c2;
    } else {
      const cplx<T> pred = T(2) * tab_[j - 1] - tab_[j - 2];
      tab_[j] = abs(c1 - pred) <= abs(c2 - pred) ? c1 : c2;
    }
  }
  arg_[0] = 0;
  for (std::size_t j = 1; j <= N; ++j) {
    arg_[j] = arg_[j - 1] + arg(tab_[j] / tab_[j - 1]);
    if (!(arg_[j] > arg_[j - 1])) throw NumericalError("curve too far from circular; refine or use segment tier");
  }
  if (abs(arg_[N] - pi<T>()) > T(1e-8)) throw NumericalError("curve too far from circular; refine or use segment tier");
  arg_[N] = pi<T>();
}

template <class T>
cplx<T> OpenedCurve<T>::normalized(const cplx<T>& z) const {
  return (T(2) * z - arc_.A() - arc_.B()) / (arc_.B() - arc_.A());
}

template <class T>
cplx<T> OpenedCurve<T>::phi(const cplx<T>& s) const {
  const cplx<T> d = arc_.B() - arc_.A();
  return (d * (s + cplx<T>(1) / s) / T(2) + arc_.B() + arc_.A()) / T(2);
}

template <class T>
cplx<T> OpenedCurve<T>::dphi(const cplx<T>& s) const {
  return (arc_.B() - arc_.A()) * (cplx<T>(1) - cplx<T>(1) / (s * s)) / T(4);
}

template <class T>
cplx<T> OpenedCurve<T>::phi_inv(const cplx<T>& z) const {
  using std::abs;
  using std::sqrt;
  const cplx<T> w = normalized(z);
  const cplx<T> s1 = w + sqrt(w - cplx<T>(1)) * sqrt(w + cplx<T>(1));
  if (is_segment()) return s1;
  const cplx<T> s2 = cplx<T>(1) / s1;
  const T q1 = abs(s1) / radius(arg(s1));
  const T q2 = abs(s2) / radius(arg(s2));
  return q1 >= q2 ? s1 : s2;
}

template <class T>
cplx<T> OpenedCurve<T>::dphi_inv(const cplx<T>& z) const {
  return cplx<T>(1) / dphi(phi_inv(z));
}

template <class T>
cplx<T> OpenedCurve<T>::plus_branch(const T& sigma) const {
  using std::abs;
  using std::sqrt;
  if (sigma <= 0) return cplx<T>(1);
  if (sigma >= pi<T>()) return cplx<T>(-1);
  const std::size_t N = tab_.size() - 1;
  const cplx<T> w = normalized(arc_.gamma(t_of_sigma(sigma)));
  const cplx<T> r = cplx<T>(T(0), T(1)) * sqrt(cplx<T>(1) - w) * sqrt(cplx<T>(1) + w);
  const cplx<T> c1 = w + r, c2 = w - r;
  const T x = sigma / (pi<T>() / T(N));
  std::size_t k = static_cast<std::size_t>(static_cast<double>(x));
  if (k >= N) k = N - 1;
  const T frac = x - T(k);
  const cplx<T> pred = tab_[k] + (tab_[k + 1] - tab_[k]) * frac;
  return abs(c1 - pred) <= abs(c2 - pred) ? c1 : c2;
}

template <class T>
cplx<T> OpenedCurve<T>::s_of_sigma(const T& sigma) const {
  const T s = wrap_angle(sigma);
  if (is_segment()) return cis(s);
  if (s <= pi<T>()) return plus_branch(s);
  return cplx<T>(1) / plus_branch(two_pi<T>() - s);
}

template <class T>
T OpenedCurve<T>::plus_sigma(const T& theta) const {
  if (is_segment()) return theta;
  if (theta <= 0) return T(0);
  if (theta >= pi<T>()) return pi<T>();
  const std::size_t k =
      static_cast<std::size_t>(std::upper_bound(arg_.begin(), arg_.end(), theta) - arg_.begin()) - 1;
  if (arg_[k] == theta) return sig_[k];
  const auto f = [&](const T& sg) { return T(arg_[k] + arg(plus_branch(sg) / tab_[k]) - theta); };
  const T fa = arg_[k] - theta;
  const T fb = arg_[k + 1] - theta;
  std::uintmax_t it = 200;
  auto r = boost::math::tools::toms748_solve(f, sig_[k], sig_[k + 1], fa, fb,
                                             boost::math::tools::eps_tolerance<T>(std::numeric_limits<T>::digits - 3),
                                             it);
  return (r.first + r.second) / T(2);
}

template <class T>
T OpenedCurve<T>::sigma_of_theta(const T& theta) const {
  const T th = wrap_angle(theta);
  if (th <= pi<T>()) return plus_sigma(th);
  return two_pi<T>() - plus_sigma(two_pi<T>() - th);
}

template <class T>
T OpenedCurve<T>::radius(const T& theta) const {
  using std::abs;
  if (is_segment()) return T(1);
  return abs(s_of_sigma(sigma_of_theta(theta)));
}

template <class T>
T OpenedCurve<T>::t_of_sigma(const T& sigma) {
  using std::cos;
  const T c = cos(sigma / T(2));
  return c * c;
}

template <class T>
Side OpenedCurve<T>::side_of_sigma(const T& sigma) {
  const T s = wrap_angle(sigma);
  if (s == 0 || s == pi<T>()) return Side::endpoint;
  return s < pi<T>() ? Side::plus : Side::minus;
}

template <class T>
OpenedCurve<T> open_arc(const ArcGeometry<T>& arc) {
  return OpenedCurve<T>(arc);
}

template <class T>
std::vector<SidedPoint<T>> boundary_samples(const OpenedCurve<T>& oc, std::size_t M) {
  if (M < 8 || !is_power_of_two(M)) throw std::invalid_argument("boundary_samples: M must be a power of two >= 8");
  std::vector<SidedPoint<T>> out(M);
  for (std::size_t j = 0; j < M; ++j) {
    SidedPoint<T>& p = out[j];
    if (j == 0) {
      p = {oc.arc().B(), Side::endpoint, T(0), cplx<T>(1)};
    } else if (2 * j == M) {
      p = {oc.arc().A(), Side::endpoint, pi<T>(), cplx<T>(-1)};
    } else {
      p.theta = two_pi<T>() * T(j) / T(M);
      p.s = oc.s_of_sigma(p.theta);
      p.z = oc.phi(p.s);
      p.side = 2 * j < M ? Side::plus : Side::minus;
    }
  }
  return out;
}

template class ArcGeometry<double>;
template class ArcGeometry<HighReal>;
template class OpenedCurve<double>;
template class OpenedCurve<HighReal>;
template OpenedCurve<double> open_arc<double>(const ArcGeometry<double>&);
template OpenedCurve<HighReal> open_arc<HighReal>(const ArcGeometry<HighReal>&);
template std::vector<SidedPoint<double>> boundary_samples<double>(const OpenedCurve<double>&, std::size_t);
template std::vector<SidedPoint<HighReal>> boundary_samples<HighReal>(const OpenedCurve<HighReal>&, std::size_t);

}  // namespace arcszego
