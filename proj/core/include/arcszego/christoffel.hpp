#pragma once

#include "arcszego/conformal.hpp"
#include "arcszego/measure.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace arcszego {

enum class BreakdownPolicy { fail, truncate };

// Orthonormal polynomials for a discrete inner product, built by Arnoldi on
// multiplication by x = (z - c)/s:
//   x p_k = sum_{j <= k+1} H(j, k) p_j.
template <class T>
class OrthonormalSystem {
 public:
  OrthonormalSystem() = default;

  // Highest degree available.
  std::size_t degree() const { return norms_.empty() ? 0 : norms_.size() - 1; }
  // Degree requested but not reached because the Krylov space was exhausted.
  std::optional<std::size_t> breakdown() const { return breakdown_; }
  const cplx<T>& center() const { return c_; }
  const T& scale() const { return s_; }
  const T& mass() const { return mass_; }
  const cplx<T>& hessenberg(std::size_t j, std::size_t k) const { return H_[k][j]; }
  // h_k, the L2 norm of the monic orthogonal polynomial of degree k.
  const std::vector<T>& monic_norms() const { return norms_; }

  // p_0(z), ..., p_n(z), n <= degree().
  std::vector<cplx<T>> evaluate(const cplx<T>& z, std::size_t n) const;
  std::vector<cplx<T>> evaluate(const cplx<T>& z) const { return evaluate(z, degree()); }
  // Values of p_k at the inner-product nodes (a.c. nodes, then atoms).
  const std::vector<cplx<T>>& node_values(std::size_t k) const { return Q_[k]; }

 private:
  template <class U>
  friend OrthonormalSystem<U> orthonormalize(const DiscreteInnerProduct<U>&, std::size_t, const cplx<U>&, const U&,
                                             BreakdownPolicy);
  cplx<T> c_{};
  T s_ = 1;
  T mass_ = 0;
  std::vector<std::vector<cplx<T>>> H_;  // H_[k][j] = H(j, k), j <= k+1
  std::vector<std::vector<cplx<T>>> Q_;
  std::vector<T> norms_;
  std::optional<std::size_t> breakdown_;
};

// Throws NumericalError on breakdown unless policy is truncate.
template <class T>
OrthonormalSystem<T> orthonormalize(const DiscreteInnerProduct<T>& ip, std::size_t N, const cplx<T>& center,
                                    const T& scale, BreakdownPolicy policy = BreakdownPolicy::fail);

// Center (A+B)/2 and scale |B-A|/4.
template <class T>
OrthonormalSystem<T> orthonormalize(const DiscreteInnerProduct<T>& ip, std::size_t N, const ArcGeometry<T>& arc,
                                    BreakdownPolicy policy = BreakdownPolicy::fail);

template <class T>
struct ChristoffelResult {
  std::size_t n = 0;
  T lambda = 0;
  T widom_sq = 0;  // C^{-2n} lambda
  T widom = 0;
  bool infinite = true;
  // Minimizer in the orthonormal basis: P = sum_k coefficients[k] p_k.
  std::vector<cplx<T>> coefficients;
};

// Christoffel function at the frame's base point.
template <class T>
ChristoffelResult<T> christoffel_value(const OrthonormalSystem<T>& sys, const ConformalFrame<T>& frame, std::size_t n);

// All n in [0, nmax] at once; the minimizer coefficients are left empty.
template <class T>
std::vector<ChristoffelResult<T>> christoffel_sweep(const OrthonormalSystem<T>& sys, const ConformalFrame<T>& frame,
                                                    std::size_t nmax);

// lambda_0..lambda_nmax at a base point, without a conformal frame (the
// circle oracle has none).
template <class T>
std::vector<T> christoffel_lambdas(const OrthonormalSystem<T>& sys, const BasePoint<T>& z0, std::size_t nmax);

template <class T>
std::vector<cplx<T>> minimizing_polynomial_eval(const ChristoffelResult<T>& res, const OrthonormalSystem<T>& sys,
                                                const std::vector<cplx<T>>& points);

// Leading coefficient of the minimizer in z.
template <class T>
cplx<T> minimizing_polynomial_leading(const ChristoffelResult<T>& res, const OrthonormalSystem<T>& sys);

// G(j, k) = <p_j, p_k> under another quadrature of the same measure.
template <class T>
std::vector<std::vector<cplx<T>>> gram_matrix(const OrthonormalSystem<T>& sys, const DiscreteInnerProduct<T>& ip,
                                              std::size_t n);

// Frobenius distance of a Gram matrix from the identity.
template <class C>
auto gram_defect(const std::vector<std::vector<C>>& G) {
  using std::sqrt;
  decltype(norm(G[0][0])) acc(0);
  for (std::size_t j = 0; j < G.size(); ++j)
    for (std::size_t k = 0; k < G[j].size(); ++k) acc += norm(j == k ? G[j][k] - C(1) : G[j][k]);
  return sqrt(acc);
}

}  // namespace arcszego
