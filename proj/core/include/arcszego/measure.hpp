#pragma once

#include "arcszego/conformal.hpp"
#include "arcszego/geometry.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace arcszego {

// Density f of a measure with respect to harmonic measure, as a function of
// the arc point. f may carry algebraic endpoint factors |z-A|^{exponent_A}
// |z-B|^{exponent_B}; log-integrals treat those in closed form.
template <class T>
struct Density {
  std::string name = "one";
  std::function<T(const ArcPoint<T>&)> value;
  // log f; defaults to log(value). Supplied for densities whose log is
  // cheaper or more accurate than the log of the value.
  std::function<T(const ArcPoint<T>&)> log_value;
  T exponent_A = 0;
  T exponent_B = 0;

  T operator()(const ArcPoint<T>& p) const { return value(p); }
  T operator()(const BoundaryPoint<T>& p) const { return value(p.arc_point()); }
  // log f - exponent_A log|z-A| - exponent_B log|z-B|, with f clipped at 1e-300.
  T regularized_log(const BoundaryPoint<T>& p, const ConformalFrame<T>& frame) const;
  Density scaled(const T& c) const;
  bool is_one() const { return name == "one"; }
};

// Lower clip for log-integrals.
template <class T>
inline T density_floor() {
  return T(1e-300);
}

template <class T>
Density<T> density_one();
// (1 - x)^a (1 + x)^b with x = 2t - 1.
template <class T>
Density<T> density_jacobi(const T& a, const T& b);
// exp(cos(2 pi k t)).
template <class T>
Density<T> density_exp_cos(const T& k);
// sum_i c_i x^i with x = 2t - 1.
template <class T>
Density<T> density_poly(std::vector<T> c);
// Piecewise linear interpolation of (t_j, f_j), side-independent.
template <class T>
Density<T> density_samples(std::vector<std::pair<T, T>> samples);

template <class T>
struct Atom {
  T t = 0;
  cplx<T> z{};
  T mass = 0;
};

template <class T>
struct MeasureSpec {
  BasePoint<T> base;  // the point whose harmonic measure the density refers to
  Density<T> density = density_one<T>();
  std::vector<Atom<T>> atoms;

  T atom_mass() const;
};

// Places atoms at gamma(t_j). Throws DomainError for atoms at or next to an
// endpoint or with non-positive mass.
template <class T>
MeasureSpec<T> make_measure(const ArcGeometry<T>& arc, const BasePoint<T>& base, Density<T> density,
                            const std::vector<std::pair<T, T>>& atoms);

// Quadrature for integrals against mu = f d omega_{z0} + atoms. The a.c. part
// lives on boundary points (each arc point once per side); atoms are exact
// point masses kept separately.
template <class T>
struct DiscreteInnerProduct {
  std::vector<BoundaryPoint<T>> points;
  std::vector<T> harmonic_weights;  // omega_{z0} weights, sum 1
  std::vector<T> weights;           // harmonic_weights * f
  std::vector<cplx<T>> atom_nodes;
  std::vector<T> atom_weights;
  Placement placement = Placement::harmonic;
  bool under_resolved = false;

  std::size_t size(bool include_atoms = true) const;
  std::vector<cplx<T>> nodes(bool include_atoms = true) const;
  std::vector<T> all_weights(bool include_atoms = true) const;
  T total_mass(bool include_atoms = true) const;
};

template <class T>
DiscreteInnerProduct<T> transplant_quadrature(const ConformalFrame<T>& frame, const MeasureSpec<T>& spec,
                                              std::size_t M, Placement placement = Placement::harmonic);

// Trapezoid rule on the unit circle, nodes e^{2 pi i (j + 1/2)/M}, weights f/M.
template <class T>
DiscreteInnerProduct<T> circle_quadrature(std::size_t M, const std::function<T(const T&)>& f);

// f_{w0} = f_{z0} rho_{z0}/rho_{w0}; atoms unchanged.
template <class T>
MeasureSpec<T> rebase_density(const MeasureSpec<T>& spec, std::shared_ptr<const ConformalFrame<T>> from,
                              std::shared_ptr<const ConformalFrame<T>> to);

// Evaluator of a function at a node. Atom nodes carry side == Side::atom and
// only z is meaningful.
template <class T>
using NodeFunction = std::function<cplx<T>(const BoundaryPoint<T>&)>;

// one_sided: each node contributes its own side, so single-valued integrands
// give the plain integral against mu. two_sided: each node contributes both
// boundary values of its arc point, the pairing of the weighted Hardy space.
enum class ContourMode { one_sided, two_sided };

// sum_j w_j F(node_j) conj(G(node_j)), pairwise summed.
template <class T>
cplx<T> contour_inner_product(const DiscreteInnerProduct<T>& ip, const NodeFunction<T>& F, const NodeFunction<T>& G,
                              bool include_atoms = false, ContourMode mode = ContourMode::one_sided);

}  // namespace arcszego
