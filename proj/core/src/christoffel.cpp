#include "arcszego/christoffel.hpp"

#include "arcszego/error.hpp"
#include "arcszego/parallel.hpp"
#include "arcszego/summation.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace arcszego {

namespace {

template <class T>
cplx<T> weighted_dot(const std::vector<T>& w, const std::vector<cplx<T>>& u, const std::vector<cplx<T>>& v) {
  return pairwise_sum<cplx<T>>(std::size_t(0), w.size(), [&](std::size_t i) { return w[i] * u[i] * conj(v[i]); });
}

template <class T>
T weighted_norm2(const std::vector<T>& w, const std::vector<cplx<T>>& u) {
  return pairwise_sum<T>(std::size_t(0), w.size(), [&](std::size_t i) { return w[i] * norm(u[i]); });
}

}  // namespace

template <class T>
OrthonormalSystem<T> orthonormalize(const DiscreteInnerProduct<T>& ip, std::size_t N, const cplx<T>& center,
                                    const T& scale, BreakdownPolicy policy) {
  using std::abs;
  using std::max;
  using std::sqrt;
  if (!(scale > 0)) throw std::invalid_argument("orthonormalize: scale must be positive");
  const std::vector<cplx<T>> z = ip.nodes(true);
  const std::vector<T> w = ip.all_weights(true);
  const std::size_t M = z.size();
  std::vector<cplx<T>> x(M);
  for (std::size_t i = 0; i < M; ++i) x[i] = (z[i] - center) / scale;

  OrthonormalSystem<T> sys;
  sys.c_ = center;
  sys.s_ = scale;
  sys.mass_ = pairwise_sum(w);
  if (!(sys.mass_ > 0)) throw NumericalError("measure has zero total mass");

  const T root_mass = sqrt(sys.mass_);
  sys.Q_.push_back(std::vector<cplx<T>>(M, cplx<T>(T(1) / root_mass)));
  sys.norms_.push_back(root_mass);
  const T tiny = max(T(1e-250), T(1e3) * epsilon<T>());

  auto fail = [&](std::size_t k) {
    sys.breakdown_ = k;
    if (policy == BreakdownPolicy::fail) {
      std::ostringstream os;
      os << "measure support resolves fewer than " << k + 1 << " points";
      throw NumericalError(os.str());
    }
  };

  T scale_pow = root_mass;  // sqrt(mass) s^k prod H(j+1, j)
  for (std::size_t k = 0; k < N; ++k) {
    if (k + 2 > M) {
      fail(k + 1);
      break;
    }
    const auto& qk = sys.Q_[k];
    std::vector<cplx<T>> v(M);
    for (std::size_t i = 0; i < M; ++i) v[i] = x[i] * qk[i];
    const T vnorm = sqrt(weighted_norm2(w, v));
    std::vector<cplx<T>> h(k + 2, cplx<T>(0));
    for (int pass = 0; pass < 2; ++pass) {
      std::vector<cplx<T>> d(k + 1);
      parallel_for(k + 1, [&](std::size_t j) { d[j] = weighted_dot(w, v, sys.Q_[j]); });
      parallel_for(M, [&](std::size_t i) {
        cplx<T> acc(0);
        for (std::size_t j = 0; j <= k; ++j) acc += d[j] * sys.Q_[j][i];
        v[i] -= acc;
      });
      for (std::size_t j = 0; j <= k; ++j) h[j] += d[j];
    }
    const T hn = sqrt(weighted_norm2(w, v));
    if (!(hn > max(tiny, tiny * vnorm))) {
      fail(k + 1);
      break;
    }
    h[k + 1] = cplx<T>(hn);
    for (auto& vi : v) vi /= hn;
    sys.H_.push_back(std::move(h));
    sys.Q_.push_back(std::move(v));
    scale_pow *= scale * hn;
    sys.norms_.push_back(scale_pow);
  }
  return sys;
}

template <class T>
OrthonormalSystem<T> orthonormalize(const DiscreteInnerProduct<T>& ip, std::size_t N, const ArcGeometry<T>& arc,
                                    BreakdownPolicy policy) {
  using std::abs;
  return orthonormalize(ip, N, (arc.A() + arc.B()) / T(2), T(abs(arc.B() - arc.A()) / T(4)), policy);
}

template <class T>
std::vector<cplx<T>> OrthonormalSystem<T>::evaluate(const cplx<T>& z, std::size_t n) const {
  if (n > degree()) throw std::out_of_range("orthonormal system evaluated beyond its degree");
  const cplx<T> x = (z - c_) / s_;
  std::vector<cplx<T>> p(n + 1);
  p[0] = cplx<T>(T(1) / norms_[0]);
  for (std::size_t k = 0; k < n; ++k) {
    cplx<T> acc = x * p[k];
    for (std::size_t j = 0; j <= k; ++j) acc -= H_[k][j] * p[j];
    p[k + 1] = acc / H_[k][k + 1];
  }
  return p;
}

template <class T>
ChristoffelResult<T> christoffel_value(const OrthonormalSystem<T>& sys, const ConformalFrame<T>& frame, std::size_t n) {
  using std::log;
  using std::exp;
  using std::sqrt;
  if (n > sys.degree()) throw std::out_of_range("christoffel_value: degree beyond the orthonormal system");
  ChristoffelResult<T> r;
  r.n = n;
  r.infinite = frame.at_infinity();
  r.coefficients.assign(n + 1, cplx<T>(0));
  if (r.infinite) {
    const T h = sys.monic_norms()[n];
    r.lambda = h * h;
    r.coefficients[n] = cplx<T>(h);
  } else {
    const auto p = sys.evaluate(frame.base().z, n);
    const T K = pairwise_sum<T>(std::size_t(0), p.size(), [&](std::size_t k) { return T(norm(p[k])); });
    r.lambda = T(1) / K;
    for (std::size_t k = 0; k <= n; ++k) r.coefficients[k] = conj(p[k]) / K;
  }
  r.widom_sq = r.lambda * exp(T(2 * n) * log(frame.phi_at_base()));
  r.widom = sqrt(r.widom_sq);
  return r;
}

template <class T>
std::vector<T> christoffel_lambdas(const OrthonormalSystem<T>& sys, const BasePoint<T>& z0, std::size_t nmax) {
  nmax = std::min(nmax, sys.degree());
  std::vector<T> out(nmax + 1);
  if (z0.infinite) {
    for (std::size_t n = 0; n <= nmax; ++n) out[n] = sys.monic_norms()[n] * sys.monic_norms()[n];
    return out;
  }
  const auto p = sys.evaluate(z0.z, nmax);
  std::vector<T> partial;
  for (std::size_t n = 0; n <= nmax; ++n) {
    partial.push_back(T(norm(p[n])));
    out[n] = T(1) / pairwise_sum(partial);
  }
  return out;
}

template <class T>
std::vector<ChristoffelResult<T>> christoffel_sweep(const OrthonormalSystem<T>& sys, const ConformalFrame<T>& frame,
                                                    std::size_t nmax) {
  using std::exp;
  using std::log;
  using std::sqrt;
  const auto lambdas = christoffel_lambdas(sys, frame.base(), nmax);
  const T la = log(frame.phi_at_base());
  std::vector<ChristoffelResult<T>> out(lambdas.size());
  for (std::size_t n = 0; n < lambdas.size(); ++n) {
    auto& r = out[n];
    r.n = n;
    r.infinite = frame.at_infinity();
    r.lambda = lambdas[n];
    r.widom_sq = r.lambda * exp(T(2 * n) * la);
    r.widom = sqrt(r.widom_sq);
  }
  return out;
}

template <class T>
std::vector<cplx<T>> minimizing_polynomial_eval(const ChristoffelResult<T>& res, const OrthonormalSystem<T>& sys,
                                                const std::vector<cplx<T>>& points) {
  if (res.coefficients.size() != res.n + 1) throw std::invalid_argument("christoffel result has no minimizer");
  std::vector<cplx<T>> out(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const auto p = sys.evaluate(points[i], res.n);
    cplx<T> acc(0);
    for (std::size_t k = 0; k <= res.n; ++k) acc += res.coefficients[k] * p[k];
    out[i] = acc;
  });
  return out;
}

template <class T>
cplx<T> minimizing_polynomial_leading(const ChristoffelResult<T>& res, const OrthonormalSystem<T>& sys) {
  if (res.coefficients.size() != res.n + 1) throw std::invalid_argument("christoffel result has no minimizer");
  return res.coefficients[res.n] / sys.monic_norms()[res.n];
}

template <class T>
std::vector<std::vector<cplx<T>>> gram_matrix(const OrthonormalSystem<T>& sys, const DiscreteInnerProduct<T>& ip,
                                              std::size_t n) {
  const auto z = ip.nodes(true);
  const auto w = ip.all_weights(true);
  std::vector<std::vector<cplx<T>>> P(z.size());
  parallel_for(z.size(), [&](std::size_t i) { P[i] = sys.evaluate(z[i], n); });
  std::vector<std::vector<cplx<T>>> G(n + 1, std::vector<cplx<T>>(n + 1));
  parallel_for((n + 1) * (n + 1), [&](std::size_t jk) {
    const std::size_t j = jk / (n + 1), k = jk % (n + 1);
    if (k < j) return;
    G[j][k] = pairwise_sum<cplx<T>>(std::size_t(0), z.size(), [&](std::size_t i) { return w[i] * P[i][j] * conj(P[i][k]); });
  });
  for (std::size_t j = 0; j <= n; ++j)
    for (std::size_t k = 0; k < j; ++k) G[j][k] = conj(G[k][j]);
  return G;
}

#define ARCSZEGO_INSTANTIATE(T)                                                                                      \
  template class OrthonormalSystem<T>;                                                                               \
  template struct ChristoffelResult<T>;                                                                              \
  template OrthonormalSystem<T> orthonormalize<T>(const DiscreteInnerProduct<T>&, std::size_t, const cplx<T>&,       \
                                                  const T&, BreakdownPolicy);                                        \
  template OrthonormalSystem<T> orthonormalize<T>(const DiscreteInnerProduct<T>&, std::size_t,                       \
                                                  const ArcGeometry<T>&, BreakdownPolicy);                           \
  template ChristoffelResult<T> christoffel_value<T>(const OrthonormalSystem<T>&, const ConformalFrame<T>&,          \
                                                     std::size_t);                                                   \
  template std::vector<ChristoffelResult<T>> christoffel_sweep<T>(const OrthonormalSystem<T>&,                       \
                                                                  const ConformalFrame<T>&, std::size_t);            \
  template std::vector<T> christoffel_lambdas<T>(const OrthonormalSystem<T>&, const BasePoint<T>&, std::size_t);     \
  template std::vector<cplx<T>> minimizing_polynomial_eval<T>(const ChristoffelResult<T>&,                           \
                                                              const OrthonormalSystem<T>&,                           \
                                                              const std::vector<cplx<T>>&);                          \
  template cplx<T> minimizing_polynomial_leading<T>(const ChristoffelResult<T>&, const OrthonormalSystem<T>&);       \
  template std::vector<std::vector<cplx<T>>> gram_matrix<T>(const OrthonormalSystem<T>&,                             \
                                                            const DiscreteInnerProduct<T>&, std::size_t);

ARCSZEGO_INSTANTIATE(double)
ARCSZEGO_INSTANTIATE(HighReal)

}  // namespace arcszego
