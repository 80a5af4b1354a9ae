#include "arcszego/measure.hpp"

#include "arcszego/error.hpp"
#include "arcszego/fourier.hpp"
#include "arcszego/parallel.hpp"
#include "arcszego/summation.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace arcszego {

template <class T>
T Density<T>::regularized_log(const BoundaryPoint<T>& p, const ConformalFrame<T>& frame) const {
  using std::abs;
  using std::log;
  const ArcPoint<T> ap = p.arc_point();
  T l;
  if (log_value) {
    l = log_value(ap);
  } else {
    l = log(std::max(value(ap), density_floor<T>()));
  }
  if (exponent_A != 0 || exponent_B != 0) {
    const cplx<T>& s = p.own.s;
    const T d = abs(frame.arc().B() - frame.arc().A()) / (T(4) * abs(s));
    if (exponent_A != 0) l -= exponent_A * log(d * norm(s + T(1)));
    if (exponent_B != 0) l -= exponent_B * log(d * norm(s - T(1)));
  }
  return std::max(l, T(log(density_floor<T>())));
}

template <class T>
Density<T> Density<T>::scaled(const T& c) const {
  using std::log;
  Density d = *this;
  if (c == T(1)) return d;
  d.name = name + "*scaled";
  auto v = value;
  d.value = [v, c](const ArcPoint<T>& p) { return c * v(p); };
  if (log_value) {
    auto lv = log_value;
    const T lc = log(c);
    d.log_value = [lv, lc](const ArcPoint<T>& p) { return lv(p) + lc; };
  }
  return d;
}

template <class T>
Density<T> density_one() {
  Density<T> d;
  d.name = "one";
  d.value = [](const ArcPoint<T>&) { return T(1); };
  d.log_value = [](const ArcPoint<T>&) { return T(0); };
  return d;
}

template <class T>
Density<T> density_jacobi(const T& a, const T& b) {
  using std::log;
  using std::pow;
  Density<T> d;
  d.name = "jacobi";
  d.value = [a, b](const ArcPoint<T>& p) { return T(pow(T(2) * p.tc, a) * pow(T(2) * p.t, b)); };
  d.log_value = [a, b](const ArcPoint<T>& p) {
    T l(0);
    if (a != 0) l += a * log(T(2) * p.tc);
    if (b != 0) l += b * log(T(2) * p.t);
    return l;
  };
  d.exponent_A = b;
  d.exponent_B = a;
  return d;
}

template <class T>
Density<T> density_exp_cos(const T& k) {
  using std::cos;
  using std::exp;
  Density<T> d;
  d.name = "exp_cos";
  d.value = [k](const ArcPoint<T>& p) { return T(exp(cos(two_pi<T>() * k * p.t))); };
  d.log_value = [k](const ArcPoint<T>& p) { return T(cos(two_pi<T>() * k * p.t)); };
  return d;
}

template <class T>
Density<T> density_poly(std::vector<T> c) {
  Density<T> d;
  d.name = "poly";
  d.value = [c](const ArcPoint<T>& p) {
    const T x = p.t - p.tc;
    T acc(0);
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
  };
  return d;
}

template <class T>
Density<T> density_samples(std::vector<std::pair<T, T>> samples) {
  if (samples.size() < 2) throw DomainError("custom-samples density needs at least two samples");
  std::sort(samples.begin(), samples.end());
  for (const auto& s : samples)
    if (s.second < 0) throw DomainError("custom-samples density must be non-negative");
  Density<T> d;
  d.name = "custom-samples";
  d.value = [samples](const ArcPoint<T>& p) {
    const T& t = p.t;
    if (t <= samples.front().first) return samples.front().second;
    if (t >= samples.back().first) return samples.back().second;
    auto it = std::upper_bound(samples.begin(), samples.end(), t,
                               [](const T& x, const std::pair<T, T>& s) { return x < s.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const T u = (t - lo.first) / (hi.first - lo.first);
    return lo.second + (hi.second - lo.second) * u;
  };
  return d;
}

template <class T>
T MeasureSpec<T>::atom_mass() const {
  T m(0);
  for (const auto& a : atoms) m += a.mass;
  return m;
}

template <class T>
MeasureSpec<T> make_measure(const ArcGeometry<T>& arc, const BasePoint<T>& base, Density<T> density,
                            const std::vector<std::pair<T, T>>& atoms) {
  MeasureSpec<T> m;
  m.base = base;
  m.density = std::move(density);
  for (const auto& [t, mass] : atoms) {
    if (!(t > T(1e-6) && t < T(1) - T(1e-6))) throw DomainError("atom must lie in the interior of the arc");
    if (!(mass > 0)) throw DomainError("atom mass must be positive");
    m.atoms.push_back({t, arc.gamma(t), mass});
  }
  return m;
}

template <class T>
std::size_t DiscreteInnerProduct<T>::size(bool include_atoms) const {
  return points.size() + (include_atoms ? atom_nodes.size() : 0);
}

template <class T>
std::vector<cplx<T>> DiscreteInnerProduct<T>::nodes(bool include_atoms) const {
  std::vector<cplx<T>> z;
  z.reserve(size(include_atoms));
  for (const auto& p : points) z.push_back(p.own.z);
  if (include_atoms) z.insert(z.end(), atom_nodes.begin(), atom_nodes.end());
  return z;
}

template <class T>
std::vector<T> DiscreteInnerProduct<T>::all_weights(bool include_atoms) const {
  std::vector<T> w = weights;
  if (include_atoms) w.insert(w.end(), atom_weights.begin(), atom_weights.end());
  return w;
}

template <class T>
T DiscreteInnerProduct<T>::total_mass(bool include_atoms) const {
  return pairwise_sum(all_weights(include_atoms));
}

template <class T>
DiscreteInnerProduct<T> transplant_quadrature(const ConformalFrame<T>& frame, const MeasureSpec<T>& spec,
                                              std::size_t M, Placement placement) {
  if (M < 64 || !is_power_of_two(M)) throw std::invalid_argument("quadrature node count must be a power of two >= 64");
  DiscreteInnerProduct<T> ip;
  ip.placement = placement;
  ip.points = frame.circle_points(M, placement, &ip.harmonic_weights);
  ip.weights.resize(M);
  std::vector<T> f(M);
  parallel_for(M, [&](std::size_t j) { f[j] = spec.density(ip.points[j]); });
  for (std::size_t j = 0; j < M; ++j) {
    if (!(f[j] >= 0)) {
      std::ostringstream os;
      os << "density negative or undefined at quadrature node " << j;
      throw DomainError(os.str());
    }
    ip.weights[j] = ip.harmonic_weights[j] * f[j];
  }
  for (std::size_t j = 0; j < M && !ip.under_resolved; ++j) {
    const T& a = f[j];
    const T& b = f[(j + 1) % M];
    if (a > 0 && b > 0 && (a > T(10) * b || b > T(10) * a)) ip.under_resolved = true;
  }
  for (const auto& at : spec.atoms) {
    ip.atom_nodes.push_back(at.z);
    ip.atom_weights.push_back(at.mass);
  }
  return ip;
}

template <class T>
DiscreteInnerProduct<T> circle_quadrature(std::size_t M, const std::function<T(const T&)>& f) {
  if (M < 8 || !is_power_of_two(M)) throw std::invalid_argument("quadrature node count must be a power of two >= 8");
  DiscreteInnerProduct<T> ip;
  ip.placement = Placement::poisson;
  ip.points.resize(M);
  ip.harmonic_weights.assign(M, T(1) / T(M));
  ip.weights.resize(M);
  for (std::size_t j = 0; j < M; ++j) {
    const T th = two_pi<T>() * (T(j) + T(0.5)) / T(M);
    const cplx<T> e = cis(th);
    auto& p = ip.points[j];
    p.own = {e, e, e, e, false};
    p.mate = p.own;
    p.side = Side::plus;
    p.sigma = th;
    p.t = th / two_pi<T>();
    p.tc = T(1) - p.t;
    ip.weights[j] = f(th) / T(M);
  }
  return ip;
}

template <class T>
MeasureSpec<T> rebase_density(const MeasureSpec<T>& spec, std::shared_ptr<const ConformalFrame<T>> from,
                              std::shared_ptr<const ConformalFrame<T>> to) {
  using std::log;
  MeasureSpec<T> out = spec;
  out.base = to->base();
  if (from.get() == to.get()) return out;
  const HarmonicMeasure<T> rf(from), rt(to);
  auto ratio = [rf, rt, from, to](const ArcPoint<T>& p) {
    const Side side = p.side == Side::minus ? Side::minus : Side::plus;
    const T a = rf.regularized(from->boundary_point_at(p.t, p.tc, side));
    const T b = rt.regularized(to->boundary_point_at(p.t, p.tc, side));
    return a / b;
  };
  const auto v = spec.density.value;
  out.density.name = spec.density.name + "*rebased";
  out.density.value = [v, ratio](const ArcPoint<T>& p) { return v(p) * ratio(p); };
  if (spec.density.log_value) {
    const auto lv = spec.density.log_value;
    out.density.log_value = [lv, ratio](const ArcPoint<T>& p) { return lv(p) + log(ratio(p)); };
  }
  return out;
}

template <class T>
cplx<T> contour_inner_product(const DiscreteInnerProduct<T>& ip, const NodeFunction<T>& F, const NodeFunction<T>& G,
                              bool include_atoms, ContourMode mode) {
  using std::isfinite;
  const std::size_t M = ip.points.size();
  const std::size_t K = include_atoms ? ip.atom_nodes.size() : 0;
  std::vector<cplx<T>> terms(M + K);
  auto check = [](const cplx<T>& v, std::size_t j, const cplx<T>& z) {
    if (!(isfinite(v.real()) && isfinite(v.imag()))) {
      std::ostringstream os;
      os << "non-finite function value at node " << j << " (z = " << to_cdouble<T>(z) << ")";
      throw NumericalError(os.str());
    }
  };
  parallel_for(M, [&](std::size_t j) {
    const cplx<T> f = F(ip.points[j]);
    const cplx<T> g = G(ip.points[j]);
    check(f, j, ip.points[j].own.z);
    check(g, j, ip.points[j].own.z);
    cplx<T> term = f * conj(g);
    if (mode == ContourMode::two_sided) {
      const auto m = ip.points[j].mirrored();
      const cplx<T> fm = F(m);
      const cplx<T> gm = G(m);
      check(fm, j, m.own.z);
      check(gm, j, m.own.z);
      term += fm * conj(gm);
    }
    terms[j] = ip.weights[j] * term;
  });
  for (std::size_t k = 0; k < K; ++k) {
    BoundaryPoint<T> p;
    p.own.z = ip.atom_nodes[k];
    p.side = Side::atom;
    const cplx<T> f = F(p);
    const cplx<T> g = G(p);
    check(f, M + k, p.own.z);
    check(g, M + k, p.own.z);
    terms[M + k] = ip.atom_weights[k] * f * conj(g);
  }
  return pairwise_sum(terms);
}

#define ARCSZEGO_INSTANTIATE(T)                                                                                   \
  template struct Density<T>;                                                                                     \
  template struct MeasureSpec<T>;                                                                                 \
  template struct DiscreteInnerProduct<T>;                                                                        \
  template Density<T> density_one<T>();                                                                           \
  template Density<T> density_jacobi<T>(const T&, const T&);                                                      \
  template Density<T> density_exp_cos<T>(const T&);                                                              \
  template Density<T> density_poly<T>(std::vector<T>);                                                            \
  template Density<T> density_samples<T>(std::vector<std::pair<T, T>>);                                           \
  template MeasureSpec<T> make_measure<T>(const ArcGeometry<T>&, const BasePoint<T>&, Density<T>,                  \
                                        const std::vector<std::pair<T, T>>&);                                     \
  template DiscreteInnerProduct<T> transplant_quadrature<T>(const ConformalFrame<T>&, const MeasureSpec<T>&,      \
                                                            std::size_t, Placement);                              \
  template DiscreteInnerProduct<T> circle_quadrature<T>(std::size_t, const std::function<T(const T&)>&);          \
  template MeasureSpec<T> rebase_density<T>(const MeasureSpec<T>&, std::shared_ptr<const ConformalFrame<T>>,      \
                                            std::shared_ptr<const ConformalFrame<T>>);                            \
  template cplx<T> contour_inner_product<T>(const DiscreteInnerProduct<T>&, const NodeFunction<T>&,               \
                                            const NodeFunction<T>&, bool, ContourMode);

ARCSZEGO_INSTANTIATE(double)
ARCSZEGO_INSTANTIATE(HighReal)

}  // namespace arcszego
