#pragma once

#include "arcszego/conformal.hpp"
#include "arcszego/measure.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace arcszego {

// M points equispaced in arg Phi_{z0}, half-offset from the image of B, with
// the harmonic-measure weights (Poisson kernel at z0)/M. Outer functions are
// synthesized on this grid.
template <class T>
struct SpectralGrid {
  std::vector<BoundaryPoint<T>> points;
  std::vector<T> weights;
  T first_angle = 0;  // arg zeta of points[0]

  std::size_t size() const { return points.size(); }
};

template <class T>
SpectralGrid<T> make_spectral_grid(const ConformalFrame<T>& frame, std::size_t M);

// Zero-free analytic function on Omega given by its logarithm
//   log G = h(1/Phi_{z0}) + exponent_A E_A + exponent_B E_B,
// with h a power series and E_A, E_B the frame's endpoint logarithms. The
// real part of log G on the boundary is the prescribed log-modulus and
// Im log G(z0) is a prescribed phase (0 for Szego functions). A failed
// Szego condition gives the zero function.
template <class T>
class OuterFunction {
 public:
  OuterFunction() = default;
  OuterFunction(std::shared_ptr<const ConformalFrame<T>> frame, std::vector<cplx<T>> h, T exponent_A, T exponent_B);
  static OuterFunction zero(std::shared_ptr<const ConformalFrame<T>> frame);

  bool is_zero() const { return zero_; }
  cplx<T> log_value(const FramePoint<T>& p) const;
  cplx<T> log_value(const BoundaryPoint<T>& p) const { return log_value(p.own); }
  cplx<T> value(const FramePoint<T>& p) const;
  cplx<T> value(const BoundaryPoint<T>& p) const { return value(p.own); }
  // exp(log_value / 2), the branch that is positive at z0.
  cplx<T> sqrt_value(const FramePoint<T>& p) const;
  T log_at_base() const;
  T at_base() const;
  const std::vector<cplx<T>>& coefficients() const { return h_; }
  T exponent_A() const { return exp_A_; }
  T exponent_B() const { return exp_B_; }

 private:
  std::shared_ptr<const ConformalFrame<T>> frame_;
  std::vector<cplx<T>> h_;
  T exp_A_ = 0;
  T exp_B_ = 0;
  bool zero_ = false;
};

// Log-modulus data on the grid, split as log g = regular + exponent_A log|z-A|
// + exponent_B log|z-B|.
template <class T>
struct LogData {
  std::vector<T> regular;
  T exponent_A = 0;
  T exponent_B = 0;
  T phase = 0;
};

template <class T>
OuterFunction<T> outer_function(std::shared_ptr<const ConformalFrame<T>> frame, const SpectralGrid<T>& grid,
                                const LogData<T>& data);

struct SzegoCheck {
  bool ok = true;
  double log_integral = 0;
  std::size_t clipped_nodes = 0;
};

// Szego function R_g of a density (w.r.t. omega_{z0}), or the zero function
// when the condition fails: clipped integral below -1e6 or two adjacent
// grid nodes clipped. log_integral receives int log g d omega_{z0} in the
// working precision.
template <class T>
OuterFunction<T> szego_function(std::shared_ptr<const ConformalFrame<T>> frame, const SpectralGrid<T>& grid,
                                const Density<T>& g, SzegoCheck* check = nullptr, T* log_integral = nullptr);

template <class T>
struct SzegoFunctions {
  std::shared_ptr<const ConformalFrame<T>> frame;
  SpectralGrid<T> grid;
  OuterFunction<T> Rf;
  OuterFunction<T> Rrho;
  OuterFunction<T> R;
  // Phi'_{z0}/R_rho, built from its own boundary data; used only to cross-check.
  OuterFunction<T> dphi_over_Rrho;
  bool szego_condition_ok = true;
  T log_integral_f = 0;    // int log f d omega_{z0}, clipped
  T log_integral_rho = 0;  // int log rho d omega_{z0}
  std::size_t clipped_nodes = 0;

  cplx<T> R_mu(const FramePoint<T>& p) const { return Rf.value(p) * Rrho.value(p); }
};

template <class T>
std::shared_ptr<const SzegoFunctions<T>> build_szego(std::shared_ptr<const ConformalFrame<T>> frame,
                                                     const Density<T>& f, std::size_t M);

template <class T>
class KernelData {
 public:
  explicit KernelData(std::shared_ptr<const SzegoFunctions<T>> sz);

  // K_mu(z, w) through R R_f and through sqrt(Phi'/R_mu).
  cplx<T> kernel(const FramePoint<T>& z, const FramePoint<T>& w) const;
  cplx<T> kernel_cross(const FramePoint<T>& z, const FramePoint<T>& w) const;
  T diagonal() const { return diag_; }
  T omega_diagonal() const { return diag_omega_; }
  T nu() const { return T(1) / diag_; }
  // F_{mu,z0} and its boundary values from either side.
  cplx<T> extremal(const FramePoint<T>& p) const;
  // H_n at an arc point: Phi_+^n F_+ + Phi_-^n F_-.
  cplx<T> comparison(const BoundaryPoint<T>& p, std::size_t n) const;

  const SzegoFunctions<T>& szego() const { return *sz_; }
  // Walks F around the spectral grid; a phase jump above 0.5 rad between
  // same-side neighbours throws NumericalError.
  void check_branches() const;

 private:
  cplx<T> log_RRf(const FramePoint<T>& p, bool with_f) const;
  cplx<T> kernel_from_logs(const FramePoint<T>& z, const cplx<T>& Lz, const FramePoint<T>& w,
                           const cplx<T>& Lw) const;

  std::shared_ptr<const SzegoFunctions<T>> sz_;
  T diag_ = 0;
  T diag_omega_ = 0;
  cplx<T> log_base_{};
};

// Requires the Szego condition; runs check_branches().
template <class T>
KernelData<T> kernel(std::shared_ptr<const SzegoFunctions<T>> sz);

template <class T>
struct WidomLimit {
  T formula_A = 0;  // (1 - a^{-2}) (2 pi/|Phi'(z0)|) exp(int log(f rho) d omega)
  T formula_B = 0;  // R_f(z0)/K_omega(z0, z0)
  bool szego_condition_ok = true;
};

template <class T>
WidomLimit<T> widom_limit_rhs(std::shared_ptr<const SzegoFunctions<T>> sz);

}  // namespace arcszego
