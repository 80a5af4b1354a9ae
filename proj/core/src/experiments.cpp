#include "arcszego/experiments.hpp"

#include "arcszego/christoffel.hpp"
#include "arcszego/conformal.hpp"
#include "arcszego/error.hpp"
#include "arcszego/faber.hpp"
#include "arcszego/fourier.hpp"
#include "arcszego/geometry.hpp"
#include "arcszego/measure.hpp"
#include "arcszego/parallel.hpp"
#include "arcszego/summation.hpp"
#include "arcszego/szego.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>

namespace arcszego {

std::string DensitySpec::label() const {
  std::ostringstream os;
  os.precision(6);
  os << kind;
  if (kind == "custom-samples") {
    os << "[" << samples.size() << "]";
  } else if (!params.empty()) {
    os << "(";
    for (std::size_t i = 0; i < params.size(); ++i) os << (i ? "," : "") << params[i];
    os << ")";
  }
  if (normalize) os << " normalized";
  return os.str();
}

bool ConvergenceReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

const Verdict* ConvergenceReport::verdict(const std::string& name) const {
  for (const auto& v : verdicts)
    if (v.name == name) return &v;
  return nullptr;
}

bool non_increasing(const std::vector<double>& v, double floor) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (!std::isfinite(v[i]) || !std::isfinite(v[i + 1])) return false;
    if (v[i + 1] <= v[i]) continue;
    if (v[i] <= floor && v[i + 1] <= floor) continue;
    return false;
  }
  return true;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (!(v[i + 1] < v[i])) return false;
  return true;
}

namespace {

const std::vector<std::string> kDensityKinds{"one", "jacobi", "exp_cos", "poly", "exp_trig", "custom-samples"};

void validate_density(const DensitySpec& d, const std::string& where) {
  if (std::find(kDensityKinds.begin(), kDensityKinds.end(), d.kind) == kDensityKinds.end())
    throw DomainError(where + ": unknown density kind '" + d.kind + "'");
  const std::size_t np = d.params.size();
  if (d.kind == "jacobi") {
    if (np != 2) throw DomainError(where + ": jacobi needs two exponents");
    if (!(d.params[0] > -1 && d.params[1] > -1)) throw DomainError(where + ": jacobi exponents must exceed -1");
  } else if (d.kind == "exp_cos") {
    if (np != 1) throw DomainError(where + ": exp_cos needs one frequency");
  } else if (d.kind == "poly") {
    if (np == 0) throw DomainError(where + ": poly needs coefficients");
  } else if (d.kind == "exp_trig") {
    if (np == 0 || np % 2) throw DomainError(where + ": exp_trig needs cosine/sine coefficient pairs");
  } else if (d.kind == "custom-samples") {
    if (d.samples.size() < 2) throw DomainError(where + ": custom-samples density needs at least two samples");
    for (const auto& s : d.samples)
      if (!(s.first >= 0 && s.first <= 1) || !(s.second >= 0))
        throw DomainError(where + ": custom-samples entries need t in [0,1] and f >= 0");
  }
  for (double p : d.params)
    if (!std::isfinite(p)) throw DomainError(where + ": non-finite density parameter");
}

void validate_measure(const MeasureConfig& m, const std::string& where) {
  validate_density(m.density, where + ".density");
  for (const auto& a : m.atoms) {
    if (!(a.first > 0 && a.first < 1)) throw DomainError(where + ".atoms: atom parameter must lie in (0, 1)");
    if (!(a.second > 0)) throw DomainError(where + ".atoms: atom mass must be positive");
  }
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  const auto& a = cfg.arc;
  if (a.kind == "segment" || a.kind == "parabola") {
    if (a.A == a.B) throw DomainError("arc: degenerate arc");
    if (a.kind == "parabola" && !std::isfinite(a.bend)) throw DomainError("arc.bend: must be finite");
  } else if (a.kind == "circular") {
    if (!(a.half_angle > 0 && a.half_angle < 3.1)) throw DomainError("arc.half_angle: must lie in (0, 3.1)");
  } else if (a.kind == "general") {
    if (a.t.size() != a.z.size() || a.t.size() < 129)
      throw DomainError("arc.samples: need at least 129 [t, re, im] samples");
  } else {
    throw DomainError("arc.kind: unknown arc kind '" + a.kind + "'");
  }
  if (cfg.degrees.empty()) throw DomainError("degrees: at least one degree required");
  for (std::size_t i = 0; i + 1 < cfg.degrees.size(); ++i)
    if (cfg.degrees[i + 1] <= cfg.degrees[i]) throw DomainError("degrees: must be strictly increasing");
  if (cfg.nodes != 0 && (cfg.nodes < 64 || !is_power_of_two(cfg.nodes)))
    throw DomainError("nodes: must be a power of two >= 64");
  if (cfg.precision != "double" && cfg.precision != "high")
    throw DomainError("precision: must be 'double' or 'high'");
  if (cfg.placement != "harmonic" && cfg.placement != "poisson")
    throw DomainError("placement: must be 'harmonic' or 'poisson'");
  if (cfg.base && !(std::isfinite(cfg.base->real()) && std::isfinite(cfg.base->imag())))
    throw DomainError("base: must be finite or \"inf\"");
  validate_measure(cfg.measure, "measure");
  for (std::size_t i = 0; i < cfg.family.members.size(); ++i) {
    const auto& m = cfg.family.members[i];
    const std::string where = "family.members[" + std::to_string(i) + "]";
    validate_measure(m, where);
    double mass = 0;
    for (const auto& a : m.atoms) mass += a.second;
    if (mass >= 1) throw DomainError(where + ".atoms: atom masses of a probability measure must sum below 1");
  }
  const auto& t = cfg.tol;
  for (double v : {t.widom_rel, t.formula_rel, t.nu_rel, t.sup_err, t.kernel_rel, t.bound_equal, t.bound_gap,
                   t.closed_form, t.rhs_rel, t.faber_exterior, t.faber_radius, t.faber_leading})
    if (!(v > 0)) throw DomainError("tolerances: must be positive");
  for (std::size_t i = 0; i + 1 < cfg.faber.boundary_degrees.size(); ++i)
    if (cfg.faber.boundary_degrees[i + 1] <= cfg.faber.boundary_degrees[i])
      throw DomainError("faber.boundary_degrees: must be strictly increasing");
}

namespace {

using Clock = std::chrono::steady_clock;

template <class T>
cplx<T> lift(const std::complex<double>& z) {
  return from_cdouble<T>(z);
}

template <class T>
cplx<T> cpow(cplx<T> z, std::size_t n) {
  cplx<T> r(1);
  while (n) {
    if (n & 1) r *= z;
    z *= z;
    n >>= 1;
  }
  return r;
}

template <class T>
T rpow(T x, std::size_t n) {
  T r(1);
  while (n) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

std::string arc_key(const ArcSpec& a) {
  std::ostringstream os;
  os.precision(17);
  os << a.kind << '|' << a.A << '|' << a.B << '|' << a.bend << '|' << a.half_angle;
  for (std::size_t i = 0; i < a.t.size(); ++i) os << '|' << a.t[i] << ':' << a.z[i];
  return os.str();
}

template <class T>
ArcGeometry<T> make_arc(const ArcSpec& s) {
  using std::cos;
  if (s.kind == "segment") return ArcGeometry<T>::segment(lift<T>(s.A), lift<T>(s.B));
  std::vector<T> t;
  std::vector<cplx<T>> z;
  if (s.kind == "general") {
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      t.push_back(T(s.t[i]));
      z.push_back(lift<T>(s.z[i]));
    }
  } else {
    const std::size_t n = 257;
    const cplx<T> A = lift<T>(s.A), B = lift<T>(s.B);
    const cplx<T> mid = (A + B) / T(2), half = (B - A) / T(2);
    for (std::size_t j = 0; j < n; ++j) {
      const T tt = j + 1 == n ? T(1) : (T(1) - cos(pi<T>() * T(j) / T(n - 1))) / T(2);
      const T x = T(2) * tt - T(1);
      t.push_back(tt);
      if (s.kind == "parabola")
        z.push_back(mid + half * cplx<T>(x, T(s.bend) * (x * x - T(1))));
      else
        z.push_back(cis(T(s.half_angle) * x));
    }
  }
  return ArcGeometry<T>::from_samples(std::move(t), std::move(z));
}

// Arc, opened curve and exterior map, shared by every frame on the same arc.
template <class T>
struct ArcContext {
  ArcGeometry<T> arc;
  std::shared_ptr<const OpenedCurve<T>> curve;
  std::shared_ptr<const ExteriorMap<T>> psi;
};

template <class T>
std::shared_ptr<const ArcContext<T>> arc_context(const ArcSpec& spec) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const ArcContext<T>>> cache;
  const std::string key = arc_key(spec);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto arc = make_arc<T>(spec);
  arc.validate();
  auto oc = std::make_shared<const OpenedCurve<T>>(open_arc(arc));
  auto psi = std::make_shared<const ExteriorMap<T>>(exterior_map_of_opened_curve(*oc));
  auto ctx = std::make_shared<const ArcContext<T>>(ArcContext<T>{arc, oc, psi});
  cache.emplace(key, ctx);
  return ctx;
}

template <class T>
BasePoint<T> base_of(const ExperimentConfig& cfg) {
  return cfg.base ? BasePoint<T>::at(lift<T>(*cfg.base)) : BasePoint<T>::inf();
}

template <class T>
std::shared_ptr<const ConformalFrame<T>> frame_for(const ArcContext<T>& ctx, const BasePoint<T>& z0) {
  using std::abs;
  if (!z0.infinite && ctx.arc.distance(z0.z) <= T(1e-9) * abs(ctx.arc.B() - ctx.arc.A()))
    throw DomainError("base point on arc");
  return build_frame(ctx.curve, ctx.psi, z0);
}

template <class T>
Density<T> density_exp_trig(std::vector<T> c) {
  using std::cos;
  using std::exp;
  using std::sin;
  Density<T> d;
  d.name = "exp_trig";
  auto lg = [c](const ArcPoint<T>& p) {
    T acc(0);
    for (std::size_t k = 0; 2 * k + 1 < c.size(); ++k) {
      const T arg = two_pi<T>() * T(k + 1) * p.t;
      acc += c[2 * k] * cos(arg) + c[2 * k + 1] * sin(arg);
    }
    return acc;
  };
  d.log_value = lg;
  d.value = [lg](const ArcPoint<T>& p) { return T(exp(lg(p))); };
  return d;
}

template <class T>
Density<T> make_density(const DensitySpec& s) {
  std::vector<T> p;
  for (double v : s.params) p.push_back(T(v));
  if (s.kind == "one") return density_one<T>();
  if (s.kind == "jacobi") return density_jacobi<T>(p[0], p[1]);
  if (s.kind == "exp_cos") return density_exp_cos<T>(p[0]);
  if (s.kind == "poly") return density_poly<T>(p);
  if (s.kind == "exp_trig") return density_exp_trig<T>(p);
  if (s.kind == "custom-samples") {
    std::vector<std::pair<T, T>> smp;
    for (const auto& q : s.samples) smp.emplace_back(T(q.first), T(q.second));
    return density_samples<T>(std::move(smp));
  }
  throw DomainError("unknown density kind '" + s.kind + "'");
}

Placement placement_of(const ExperimentConfig& cfg) {
  return cfg.placement == "poisson" ? Placement::poisson : Placement::harmonic;
}

template <class T>
T ac_mass(const ConformalFrame<T>& frame, const MeasureSpec<T>& spec, std::size_t M) {
  MeasureSpec<T> bare = spec;
  bare.atoms.clear();
  return transplant_quadrature(frame, bare, M, Placement::poisson).total_mass(false);
}

template <class T>
std::size_t default_nodes() {
  return std::is_same_v<T, double> ? 4096 : 512;
}

template <class T>
MeasureSpec<T> measure_for(const ArcContext<T>& ctx, const ConformalFrame<T>& frame, const MeasureConfig& m,
                           std::size_t M) {
  std::vector<std::pair<T, T>> atoms;
  for (const auto& a : m.atoms) atoms.emplace_back(T(a.first), T(a.second));
  auto spec = make_measure(ctx.arc, frame.base(), make_density<T>(m.density), atoms);
  if (m.density.normalize) {
    const T mass = ac_mass(frame, spec, M);
    if (!(mass > 0)) throw NumericalError("density has zero mass; cannot normalize");
    spec.density = spec.density.scaled(T(1) / mass);
  }
  return spec;
}

template <class T>
struct Pipeline {
  DiscreteInnerProduct<T> ip;
  OrthonormalSystem<T> sys;
  std::size_t M = 0;
  double gram_defect = absent;
};

// Quadrature and orthonormal system up to degree nmax. Without a configured
// node count the double path doubles M until the Gram matrix against a 2M
// rule is the identity to 1e-10.
template <class T>
Pipeline<T> build_pipeline(const ExperimentConfig& cfg, const ConformalFrame<T>& frame, const MeasureSpec<T>& spec,
                           std::size_t nmax, ConvergenceReport& rep) {
  const Placement pl = placement_of(cfg);
  Pipeline<T> p;
  const bool refine = cfg.nodes == 0 && std::is_same_v<T, double>;
  std::size_t M = cfg.nodes ? cfg.nodes : default_nodes<T>();
  const std::size_t cap = std::size_t(1) << 15;
  for (;;) {
    p.M = M;
    p.ip = transplant_quadrature(frame, spec, M, pl);
    p.sys = orthonormalize(p.ip, nmax, frame.arc(), BreakdownPolicy::truncate);
    if (!refine) break;
    const auto check = transplant_quadrature(frame, spec, 2 * M, pl);
    p.gram_defect = to_double(gram_defect(gram_matrix(p.sys, check, p.sys.degree())));
    if (p.gram_defect < 1e-10 || 2 * M > cap) {
      if (!(p.gram_defect < 1e-10))
        rep.notes.push_back("node refinement stopped at M = " + std::to_string(M) + " with Gram defect " +
                            std::to_string(p.gram_defect));
      break;
    }
    M *= 2;
  }
  if (p.ip.under_resolved) rep.notes.push_back("density varies faster than the quadrature resolves");
  if (auto b = p.sys.breakdown())
    rep.notes.push_back("orthogonalization breakdown at degree " + std::to_string(*b) +
                        "; degree list truncated to " + std::to_string(p.sys.degree()));
  rep.nodes = p.M;
  return p;
}

std::vector<std::size_t> usable_degrees(const std::vector<std::size_t>& degrees, std::size_t available) {
  std::vector<std::size_t> out;
  for (auto n : degrees)
    if (n <= available) out.push_back(n);
  if (out.empty()) throw NumericalError("orthogonalization breakdown before the first requested degree");
  return out;
}

ConvergenceReport start_report(const std::string& experiment, const ExperimentConfig& cfg) {
  ConvergenceReport r;
  r.experiment = experiment;
  r.config_name = cfg.name;
  r.precision = cfg.precision;
  return r;
}

void add_verdict(ConvergenceReport& rep, std::string name, bool pass, double value, double tol,
                 std::string detail = {}) {
  rep.verdicts.push_back({std::move(name), pass, value, tol, std::move(detail)});
}

std::vector<double> column(const std::vector<DegreeRecord>& recs, double DegreeRecord::*field) {
  std::vector<double> v;
  for (const auto& r : recs) v.push_back(r.*field);
  return v;
}

// Errors below this sit at the rounding level of the working precision.
template <class T>
double noise_floor(double scale) {
  return 1e3 * to_double(epsilon<T>()) * std::max(1.0, std::abs(scale));
}

void trend_verdict(ConvergenceReport& rep, const std::string& name, const std::vector<double>& v, double floor,
                   bool strict) {
  const bool ok = strict ? strictly_decreasing(v) : non_increasing(v, floor);
  add_verdict(rep, name, ok, v.empty() ? absent : v.back(), strict ? 0.0 : floor,
              strict ? "strictly decreasing" : "non-increasing above the noise floor");
}

// ---------------------------------------------------------------------------

template <class T>
ConvergenceReport widom_impl(const ExperimentConfig& cfg) {
  using std::abs;
  auto rep = start_report("widom-sweep", cfg);
  auto ctx = arc_context<T>(cfg.arc);
  auto frame = frame_for(*ctx, base_of<T>(cfg));
  const std::size_t M0 = cfg.nodes ? cfg.nodes : default_nodes<T>();
  auto spec = measure_for(*ctx, *frame, cfg.measure, M0);

  auto pipe = build_pipeline(cfg, *frame, spec, cfg.degrees.back(), rep);
  const auto degrees = usable_degrees(cfg.degrees, pipe.sys.degree());
  const auto sweep = christoffel_sweep(pipe.sys, *frame, pipe.sys.degree());

  auto sz = build_szego(frame, spec.density, pipe.M);
  const auto lim = widom_limit_rhs(sz);
  const double A = to_double(lim.formula_A), B = to_double(lim.formula_B);
  if (!lim.szego_condition_ok) rep.notes.push_back("Szego condition fails; the limit is 0");

  for (auto n : degrees) {
    DegreeRecord r;
    r.n = n;
    r.lambda = to_double(sweep[n].lambda);
    r.widom_sq = to_double(sweep[n].widom_sq);
    r.limit_A = A;
    r.limit_B = B;
    const T e = abs(sweep[n].widom_sq - lim.formula_A);
    r.err_abs = to_double(e);
    r.err_rel = lim.formula_A > 0 ? to_double(e / lim.formula_A) : absent;
    rep.records.push_back(r);
  }
  rep.scalars["limit_A"] = A;
  rep.scalars["limit_B"] = B;
  rep.scalars["log_integral_f"] = to_double(sz->log_integral_f);
  rep.scalars["log_integral_rho"] = to_double(sz->log_integral_rho);
  rep.scalars["total_mass"] = to_double(pipe.ip.total_mass(true));
  rep.scalars["atom_mass"] = to_double(spec.atom_mass());
  if (std::isfinite(pipe.gram_defect)) rep.scalars["gram_defect"] = pipe.gram_defect;

  const double frel = lim.formula_B > 0 ? to_double(abs(lim.formula_A / lim.formula_B - T(1))) : absent;
  add_verdict(rep, "formula_agreement", lim.szego_condition_ok && frel <= cfg.tol.formula_rel, frel,
              cfg.tol.formula_rel, "|A/B - 1|");
  const double last = rep.records.back().err_rel;
  add_verdict(rep, "widom_limit", last <= cfg.tol.widom_rel, last, cfg.tol.widom_rel,
              "|W^2/limit - 1| at n = " + std::to_string(degrees.back()));
  trend_verdict(rep, "error_trend", column(rep.records, &DegreeRecord::err_abs), noise_floor<T>(A),
                cfg.tol.strict_trend);

  if (!spec.atoms.empty()) {
    MeasureSpec<T> bare = spec;
    bare.atoms.clear();
    ConvergenceReport scratch;
    auto pipe0 = build_pipeline(cfg, *frame, bare, pipe.sys.degree(), scratch);
    const auto sweep0 = christoffel_sweep(pipe0.sys, *frame, pipe0.sys.degree());
    // Separately built from the atom-free measure: the comparison is not a
    // self-comparison.
    const auto lim0 = widom_limit_rhs(build_szego(frame, bare.density, pipe0.M));
    const bool identical = lim0.formula_A == lim.formula_A && lim0.formula_B == lim.formula_B;
    add_verdict(rep, "singular_part_limit_identical", identical, to_double(abs(lim0.formula_A - lim.formula_A)), 0.0,
                "limit with atoms minus limit without");
    rep.scalars["limit_A_without_atoms"] = to_double(lim0.formula_A);
    const std::size_t top = std::min(pipe.sys.degree(), pipe0.sys.degree());
    bool mono = true;
    T worst = sweep[0].lambda - sweep0[0].lambda;
    for (std::size_t n = 0; n <= top; ++n) {
      const T d = sweep[n].lambda - sweep0[n].lambda;
      if (d < T(0)) mono = false;
      worst = std::min(worst, d);
    }
    add_verdict(rep, "atom_monotonicity", mono, to_double(worst), 0.0,
                "min over n of lambda_n(with atoms) - lambda_n(without)");
    for (auto& r : rep.records) {
      if (r.n > pipe0.sys.degree()) continue;
      r.extra["lambda_without_atoms"] = to_double(sweep0[r.n].lambda);
      r.extra["widom_sq_without_atoms"] = to_double(sweep0[r.n].widom_sq);
      r.extra["err_rel_without_atoms"] =
          lim.formula_A > 0 ? to_double(abs(sweep0[r.n].widom_sq / lim.formula_A - T(1))) : absent;
    }
  }
  return rep;
}

template <class T>
ConvergenceReport strong_impl(const ExperimentConfig& cfg) {
  using std::abs;
  auto rep = start_report("strong-asymptotics", cfg);
  auto ctx = arc_context<T>(cfg.arc);
  auto frame = frame_for(*ctx, base_of<T>(cfg));
  const std::size_t M0 = cfg.nodes ? cfg.nodes : default_nodes<T>();
  auto spec = measure_for(*ctx, *frame, cfg.measure, M0);

  auto sz = build_szego(frame, spec.density, M0);
  if (!sz->szego_condition_ok) throw NumericalError("strong asymptotics undefined (R_f = 0)");
  const auto K = kernel(sz);
  const auto lim = widom_limit_rhs(sz);
  const T nu = K.nu();

  auto pipe = build_pipeline(cfg, *frame, spec, cfg.degrees.back(), rep);
  const auto degrees = usable_degrees(cfg.degrees, pipe.sys.degree());
  const auto& pts = pipe.ip.points;
  const std::size_t M = pts.size();

  std::vector<cplx<T>> F_own(M), F_mate(M);
  parallel_for(M, [&](std::size_t j) {
    F_own[j] = K.extremal(pts[j].own);
    F_mate[j] = K.extremal(pts[j].mate);
  });
  std::vector<FramePoint<T>> ring;
  std::vector<cplx<T>> ring_z, ring_F;
  for (std::size_t j = 0; j < 16; ++j) {
    ring.push_back(frame->from_zeta(T(2) * cis(two_pi<T>() * (T(j) + T(0.5)) / T(16))));
    ring_z.push_back(ring.back().z);
    ring_F.push_back(K.extremal(ring.back()));
  }

  const T a = frame->phi_at_base();
  for (auto n : degrees) {
    const auto res = christoffel_value(pipe.sys, *frame, n);
    const T an = rpow(a, n);
    std::vector<T> sq(M);
    parallel_for(M, [&](std::size_t j) {
      cplx<T> P(0);
      for (std::size_t k = 0; k <= n; ++k) P += res.coefficients[k] * pipe.sys.node_values(k)[j];
      const cplx<T> H = cpow<T>(pts[j].own.zeta, n) * F_own[j] + cpow<T>(pts[j].mate.zeta, n) * F_mate[j];
      sq[j] = pipe.ip.weights[j] * norm(an * P - H);
    });
    const T l2 = pairwise_sum(sq);
    const auto Pw = minimizing_polynomial_eval(res, pipe.sys, ring_z);
    T sup(0);
    for (std::size_t j = 0; j < ring.size(); ++j)
      sup = std::max(sup, T(abs(an * Pw[j] / cpow<T>(ring[j].zeta, n) - ring_F[j])));

    DegreeRecord r;
    r.n = n;
    r.lambda = to_double(res.lambda);
    r.widom_sq = to_double(res.widom_sq);
    r.limit_A = to_double(lim.formula_A);
    r.limit_B = to_double(lim.formula_B);
    r.err_abs = to_double(abs(res.widom_sq - nu));
    r.err_rel = to_double(abs(res.widom_sq / nu - T(1)));
    r.l2_err = to_double(l2);
    r.sup_err = to_double(sup);
    rep.records.push_back(r);
  }

  const double nud = to_double(nu);
  rep.scalars["nu"] = nud;
  rep.scalars["limit_A"] = to_double(lim.formula_A);
  rep.scalars["limit_B"] = to_double(lim.formula_B);
  const double f0 = to_double(abs(K.extremal(frame->base_point()) - cplx<T>(1)));
  rep.scalars["extremal_at_base_err"] = f0;

  const auto& last = rep.records.back();
  add_verdict(rep, "nu_limit", last.err_rel <= cfg.tol.nu_rel, last.err_rel, cfg.tol.nu_rel,
              "|C^{-2n} lambda_n / nu - 1| at n = " + std::to_string(last.n));
  const double nl = to_double(abs(nu / lim.formula_A - T(1)));
  add_verdict(rep, "nu_equals_limit", nl <= cfg.tol.formula_rel, nl, cfg.tol.formula_rel, "|nu/A - 1|");
  add_verdict(rep, "extremal_at_base", f0 <= 1e-10, f0, 1e-10, "|F(z0) - 1|");
  const double floor = noise_floor<T>(nud);
  trend_verdict(rep, "nu_trend", column(rep.records, &DegreeRecord::err_abs), floor, false);
  trend_verdict(rep, "l2_trend", column(rep.records, &DegreeRecord::l2_err), floor * floor, cfg.tol.strict_trend);
  trend_verdict(rep, "sup_trend", column(rep.records, &DegreeRecord::sup_err), floor, false);
  add_verdict(rep, "sup_limit", last.sup_err <= cfg.tol.sup_err, last.sup_err, cfg.tol.sup_err,
              "sup over |Phi| = 2 at n = " + std::to_string(last.n));
  return rep;
}

template <class T>
ConvergenceReport maximizer_impl(const ExperimentConfig& cfg) {
  using std::abs;
  auto rep = start_report("maximizer-scan", cfg);
  auto ctx = arc_context<T>(cfg.arc);
  auto frame = frame_for(*ctx, base_of<T>(cfg));
  const std::size_t M = cfg.nodes ? cfg.nodes : default_nodes<T>();
  rep.nodes = M;

  std::vector<MeasureConfig> members;
  members.push_back({});
  const auto& fam = cfg.family;
  for (const auto& m : fam.members) members.push_back(m);
  if (fam.members.empty() && (cfg.measure.density.kind != "one" || !cfg.measure.atoms.empty()))
    members.push_back(cfg.measure);
  std::mt19937_64 rng(fam.seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (std::size_t i = 0; i < fam.random_members; ++i) {
    MeasureConfig m;
    m.density.kind = "exp_trig";
    for (std::size_t k = 1; k <= fam.random_order; ++k)
      for (int c = 0; c < 2; ++c) m.density.params.push_back(fam.random_amplitude * coef(rng) / double(k));
    members.push_back(m);
  }

  struct Row {
    T limit_A, limit_B, mass_ac, atoms;
  };
  std::vector<Row> rows(members.size());
  parallel_for(members.size(), [&](std::size_t i) {
    auto spec = measure_for(*ctx, *frame, members[i], M);
    // Atoms keep their mass; the density takes up the rest.
    const T mac = ac_mass(*frame, spec, M);
    const T c = (T(1) - spec.atom_mass()) / mac;
    const auto lim = widom_limit_rhs(build_szego(frame, spec.density.scaled(c), M));
    rows[i] = {lim.formula_A, lim.formula_B, mac * c, spec.atom_mass()};
  });

  const auto K1 = kernel(build_szego(frame, density_one<T>(), M));
  const T bound = T(1) / K1.omega_diagonal();
  rep.scalars["bound"] = to_double(bound);

  bool bounded = true;
  double min_gap = std::numeric_limits<double>::infinity();
  double equal_err = absent;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& m = members[i];
    const bool harmonic = m.density.kind == "one" && m.atoms.empty();
    std::string label = m.density.label();
    if (!m.atoms.empty()) label += " + " + std::to_string(m.atoms.size()) + " atom(s)";
    if (i == 0) label = "harmonic";
    const T gap = bound - rows[i].limit_A;
    const double g = to_double(std::min(gap, gap / bound));
    ReportRow row;
    row.label = label;
    row.values = {{"limit_A", to_double(rows[i].limit_A)}, {"limit_B", to_double(rows[i].limit_B)},
                  {"bound", to_double(bound)},             {"gap", to_double(gap)},
                  {"mass_ac", to_double(rows[i].mass_ac)}, {"mass_atoms", to_double(rows[i].atoms)}};
    rep.rows.push_back(row);
    if (rows[i].limit_A > bound * (T(1) + T(1e3) * epsilon<T>())) bounded = false;
    if (harmonic) {
      const double e = to_double(abs(rows[i].limit_A / bound - T(1)));
      equal_err = std::isnan(equal_err) ? e : std::max(equal_err, e);
    } else {
      min_gap = std::min(min_gap, g);
    }
  }
  add_verdict(rep, "bounded", bounded, to_double(bound), absent, "every limit <= 1/K_omega(z0, z0)");
  add_verdict(rep, "harmonic_attains_bound", equal_err <= cfg.tol.bound_equal, equal_err, cfg.tol.bound_equal,
              "|limit/bound - 1| for f = 1");
  if (members.size() > 1)
    add_verdict(rep, "strict_gap", min_gap > cfg.tol.bound_gap, min_gap, cfg.tol.bound_gap,
                "min over nonconstant members of min(gap, gap/bound)");
  return rep;
}

template <class T>
ConvergenceReport circle_impl(const ExperimentConfig& cfg) {
  using std::abs;
  using std::exp;
  using std::log;
  auto rep = start_report("circle-oracle", cfg);
  const BasePoint<T> z0 = base_of<T>(cfg);
  T r0(0);
  if (!z0.infinite) {
    r0 = abs(z0.z);
    if (abs(r0 - T(1)) <= T(1e-9)) throw DomainError("base point on arc");
    if (r0 < T(1)) throw DomainError("base point inside the unit circle");
  }
  const std::size_t nmax = cfg.degrees.back();
  std::size_t M = cfg.nodes;
  if (!M) {
    M = 512;
    while (M < 4 * (nmax + 2)) M *= 2;
  }
  rep.nodes = M;
  if (!cfg.measure.atoms.empty()) rep.notes.push_back("atoms are ignored by the circle oracle");

  const auto dens = make_density<T>(cfg.measure.density);
  auto at = [&](const T& theta) {
    const T t = theta / two_pi<T>();
    return ArcPoint<T>{t, T(1) - t, cis(theta), Side::plus};
  };
  auto ip = circle_quadrature<T>(M, [&](const T& th) { return dens(at(th)); });
  const auto sys = orthonormalize(ip, nmax, cplx<T>(0), T(1), BreakdownPolicy::truncate);
  if (auto b = sys.breakdown()) rep.notes.push_back("orthogonalization breakdown at degree " + std::to_string(*b));
  const auto degrees = usable_degrees(cfg.degrees, sys.degree());
  const auto lam = christoffel_lambdas(sys, z0, sys.degree());

  // Poisson-weighted mean of log f on a fine trapezoid grid.
  const std::size_t G = std::max<std::size_t>(M, 4096);
  std::vector<T> terms(G);
  for (std::size_t j = 0; j < G; ++j) {
    const T th = two_pi<T>() * (T(j) + T(0.5)) / T(G);
    const auto p = at(th);
    const T lf = dens.log_value ? dens.log_value(p) : T(log(std::max(dens(p), density_floor<T>())));
    const T P = z0.infinite ? T(1) : (r0 * r0 - T(1)) / norm(cis(th) - z0.z);
    terms[j] = lf * P / T(G);
  }
  const T mean_log = pairwise_sum(terms);
  const T rhs = z0.infinite ? T(exp(mean_log)) : (T(1) - T(1) / (r0 * r0)) * exp(mean_log);
  rep.scalars["rhs"] = to_double(rhs);
  rep.scalars["mean_log_f"] = to_double(mean_log);

  const bool one = cfg.measure.density.kind == "one";
  auto scaled = [&](std::size_t n) { return z0.infinite ? lam[n] : lam[n] * rpow(r0 * r0, n); };
  auto closed = [&](std::size_t n) {
    if (z0.infinite) return T(1);
    const T q = rpow(r0 * r0, n);
    return q * (r0 * r0 - T(1)) / (q * r0 * r0 - T(1));
  };
  for (auto n : degrees) {
    DegreeRecord r;
    r.n = n;
    r.lambda = to_double(lam[n]);
    r.widom_sq = to_double(scaled(n));
    r.limit_A = to_double(rhs);
    r.err_abs = to_double(abs(scaled(n) - rhs));
    r.err_rel = to_double(abs(scaled(n) / rhs - T(1)));
    if (one) r.limit_B = to_double(closed(n));
    rep.records.push_back(r);
  }
  if (one) {
    T worst(0);
    for (std::size_t n = 0; n <= sys.degree(); ++n) worst = std::max(worst, T(abs(scaled(n) / closed(n) - T(1))));
    add_verdict(rep, "closed_form", worst <= T(cfg.tol.closed_form), to_double(worst), cfg.tol.closed_form,
                "max over n <= " + std::to_string(sys.degree()) + " of relative error");
  }
  const double last = rep.records.back().err_rel;
  add_verdict(rep, "rhs_limit", last <= cfg.tol.rhs_rel, last, cfg.tol.rhs_rel,
              "|scaled lambda_n / rhs - 1| at n = " + std::to_string(degrees.back()));
  return rep;
}

template <class T>
ConvergenceReport faber_impl(const ExperimentConfig& cfg) {
  using std::abs;
  using std::sqrt;
  auto rep = start_report("faber-check", cfg);
  auto ctx = arc_context<T>(cfg.arc);
  auto frame = frame_for(*ctx, base_of<T>(cfg));
  const std::size_t M0 = cfg.nodes ? cfg.nodes : default_nodes<T>();
  rep.nodes = M0;
  auto spec = measure_for(*ctx, *frame, cfg.measure, M0);
  auto sz = build_szego(frame, spec.density, M0);
  if (!sz->szego_condition_ok) throw NumericalError("Faber weight undefined (R_f = 0)");
  auto K = std::make_shared<const KernelData<T>>(kernel(sz));

  const AnalyticFunction<T> one = [](const FramePoint<T>&) { return cplx<T>(1); };
  const AnalyticFunction<T> Fmu = [K](const FramePoint<T>& p) { return K->extremal(p); };
  const cplx<T> branch = cis(T(cfg.faber.holder_angle));
  const AnalyticFunction<T> holder = [branch](const FramePoint<T>& p) {
    return p.infinite ? cplx<T>(1) : cplx<T>(sqrt(cplx<T>(1) - branch / p.zeta));
  };

  const cplx<T> A = ctx->arc.A(), B = ctx->arc.B();
  const cplx<T> mid = (A + B) / T(2), half = (B - A) / T(2);
  std::vector<cplx<T>> inner;
  for (auto u : {std::complex<double>(0, 0), {0.3, 0.2}, {-0.4, -0.1}, {0.1, 0.6}}) inner.push_back(mid + half * lift<T>(u));
  const cplx<T> d_inf = frame->phi_derivative_at_infinity();

  // Degree 0 and 1.
  {
    FaberPolynomial<T> T0(frame, one, 0, default_contour_radius(*frame, 0, inner));
    T e(0);
    for (const auto& w : inner) e = std::max(e, T(abs(T0(w) - cplx<T>(1))));
    add_verdict(rep, "degree_zero", e <= T(1e-10), to_double(e), 1e-10, "F = 1, n = 0: T = 1");
  }
  if (ctx->arc.kind() == ArcKind::segment) {
    FaberPolynomial<T> T1(frame, one, 1, default_contour_radius(*frame, 1, inner));
    T e(0);
    for (const auto& w : inner) e = std::max(e, T(abs(T1(w) - d_inf * (w - mid)) / abs(d_inf * half)));
    add_verdict(rep, "degree_one", e <= T(1e-10), to_double(e), 1e-10, "F = 1, n = 1: T = Phi'(inf)(w - mid)");
  }

  // Divided difference of order n+1 over n+2 points around the center.
  {
    const std::size_t n = cfg.faber.divided_difference_degree;
    std::mt19937_64 rng(cfg.faber.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const T r = abs(half) / T(2);
    const T rot = two_pi<T>() * T(u(rng));
    std::vector<cplx<T>> w;
    for (std::size_t j = 0; j < n + 2; ++j) w.push_back(mid + r * cis(rot + two_pi<T>() * T(j) / T(n + 2)));
    FaberPolynomial<T> Tn(frame, Fmu, n, default_contour_radius(*frame, n, w));
    const auto v = Tn(w);
    cplx<T> dd(0);
    for (std::size_t j = 0; j < w.size(); ++j) {
      cplx<T> den(1);
      for (std::size_t k = 0; k < w.size(); ++k)
        if (k != j) den *= w[j] - w[k];
      dd += v[j] / den;
    }
    const T rel = abs(dd) * r / abs(Tn.leading_coefficient());
    add_verdict(rep, "divided_difference", rel <= T(1e-6), to_double(rel), 1e-6,
                "order n+1 divided difference * r / leading coefficient, n = " + std::to_string(n));
  }

  // Exterior regime.
  {
    const std::size_t n = cfg.faber.exterior_degree;
    std::vector<FramePoint<T>> ring;
    std::vector<cplx<T>> z;
    for (std::size_t j = 0; j < 16; ++j) {
      ring.push_back(frame->from_zeta(T(2) * cis(two_pi<T>() * (T(j) + T(0.5)) / T(16))));
      z.push_back(ring.back().z);
    }
    FaberPolynomial<T> Tn(frame, Fmu, n, default_contour_radius(*frame, n, z));
    const auto v = Tn(z);
    T e(0);
    for (std::size_t j = 0; j < z.size(); ++j)
      e = std::max(e, T(abs(v[j] / (Fmu(ring[j]) * cpow<T>(ring[j].zeta, n)) - cplx<T>(1))));
    add_verdict(rep, "exterior_regime", e <= T(cfg.tol.faber_exterior), to_double(e), cfg.tol.faber_exterior,
                "max |T/(F Phi^n) - 1| on |Phi| = 2, n = " + std::to_string(n));
    rep.scalars["exterior_degree"] = double(n);
  }

  // Boundary regime, leading coefficients and radius independence.
  const auto grid = make_spectral_grid(*frame, 512);
  std::vector<cplx<T>> gz;
  for (const auto& bp : grid.points) gz.push_back(bp.z());
  const auto& bdeg = cfg.faber.boundary_degrees;
  const auto& rdeg = cfg.faber.radius_degrees;
  T worst_lead(0), worst_radius(0);
  for (auto n : bdeg) {
    FaberPolynomial<T> Tn(frame, holder, n, default_contour_radius(*frame, n, gz));
    const auto v = Tn(gz);
    std::vector<T> e(grid.size());
    parallel_for(grid.size(), [&](std::size_t j) {
      const auto& bp = grid.points[j];
      const cplx<T> ref = holder(bp.own) * cpow<T>(bp.own.zeta, n) + holder(bp.mate) * cpow<T>(bp.mate.zeta, n);
      e[j] = abs(v[j] - ref);
    });
    DegreeRecord r;
    r.n = n;
    r.sup_err = to_double(*std::max_element(e.begin(), e.end()));

    FaberPolynomial<T> Tm(frame, Fmu, n, default_contour_radius(*frame, n, {}));
    const T lead = abs(Tm.leading_coefficient() / (Fmu(frame->infinity()) * cpow<T>(d_inf, n)) - cplx<T>(1));
    r.extra["leading_rel"] = to_double(lead);
    worst_lead = std::max(worst_lead, lead);
    if (std::find(rdeg.begin(), rdeg.end(), n) != rdeg.end()) {
      FaberPolynomial<T> T2(frame, holder, n, T(1.1) * Tn.radius());
      const auto v2 = T2(gz);
      T d(0), mx(0);
      for (std::size_t j = 0; j < v.size(); ++j) {
        d = std::max(d, T(abs(v[j] - v2[j])));
        mx = std::max(mx, T(abs(v[j])));
      }
      r.extra["radius_diff"] = to_double(d / mx);
      worst_radius = std::max(worst_radius, T(d / mx));
    }
    rep.records.push_back(r);
  }
  for (auto n : rdeg) {
    if (std::find(bdeg.begin(), bdeg.end(), n) != bdeg.end()) continue;
    FaberPolynomial<T> Ta(frame, holder, n, default_contour_radius(*frame, n, gz));
    FaberPolynomial<T> Tb(frame, holder, n, T(1.1) * Ta.radius());
    const auto va = Ta(gz), vb = Tb(gz);
    T d(0), mx(0);
    for (std::size_t j = 0; j < va.size(); ++j) {
      d = std::max(d, T(abs(va[j] - vb[j])));
      mx = std::max(mx, T(abs(va[j])));
    }
    worst_radius = std::max(worst_radius, T(d / mx));
  }
  add_verdict(rep, "leading_coefficient", worst_lead <= T(cfg.tol.faber_leading), to_double(worst_lead),
              cfg.tol.faber_leading, "|lead/(F(inf) Phi'(inf)^n) - 1|, F = F_mu");
  add_verdict(rep, "boundary_trend", strictly_decreasing(column(rep.records, &DegreeRecord::sup_err)),
              rep.records.empty() ? absent : rep.records.back().sup_err, absent,
              "max |T - (F+ Phi+^n + F- Phi-^n)| strictly decreasing");
  if (!rdeg.empty())
    add_verdict(rep, "radius_independence", worst_radius <= T(cfg.tol.faber_radius), to_double(worst_radius),
                cfg.tol.faber_radius, "max |T_R - T_{1.1R}| / max |T_R|");
  return rep;
}

template <class T>
ConvergenceReport kernel_impl(const ExperimentConfig& cfg) {
  using std::abs;
  auto rep = start_report("kernel-check", cfg);
  auto ctx = arc_context<T>(cfg.arc);
  auto frame = frame_for(*ctx, base_of<T>(cfg));
  const std::size_t M = cfg.nodes ? cfg.nodes : default_nodes<T>();
  rep.nodes = M;
  auto spec = measure_for(*ctx, *frame, cfg.measure, M);
  auto sz = build_szego(frame, spec.density, M);
  if (!sz->szego_condition_ok) throw NumericalError("kernel undefined: Szego condition fails (R_f = 0)");
  const auto K = kernel(sz);
  const auto lim = widom_limit_rhs(sz);

  std::vector<FramePoint<T>> w;
  if (cfg.kernel_points.empty()) {
    for (double th : {0.4, 1.9, 3.3, 5.1}) w.push_back(frame->from_zeta(T(1.5) * cis(T(th))));
  } else {
    const T scale = abs(ctx->arc.B() - ctx->arc.A());
    for (const auto& z : cfg.kernel_points) {
      const cplx<T> zz = lift<T>(z);
      if (ctx->arc.distance(zz) <= T(1e-6) * scale) throw DomainError("kernel_points: point on arc");
      w.push_back(frame->locate(zz));
    }
  }

  const T frel = abs(lim.formula_A / lim.formula_B - T(1));
  add_verdict(rep, "formula_agreement", frel <= T(cfg.tol.formula_rel), to_double(frel), cfg.tol.formula_rel,
              "|A/B - 1|");
  T cross(0);
  for (const auto& p : w)
    for (const auto& q : w) cross = std::max(cross, T(abs(K.kernel(p, q) / K.kernel_cross(p, q) - cplx<T>(1))));
  add_verdict(rep, "kernel_formulas", cross <= T(cfg.tol.kernel_rel), to_double(cross), cfg.tol.kernel_rel,
              "max |K/K_cross - 1| over point pairs");

  const auto ip = transplant_quadrature(*frame, spec, M, placement_of(cfg));
  const std::vector<std::function<cplx<T>(const FramePoint<T>&)>> tests{
      [](const FramePoint<T>&) { return cplx<T>(1); },
      [](const FramePoint<T>& p) { return p.infinite ? cplx<T>(0) : cplx<T>(1) / p.zeta; },
      [](const FramePoint<T>& p) { return p.infinite ? cplx<T>(0) : cplx<T>(1) / (p.zeta * p.zeta); }};
  const char* names[] = {"1", "1/Phi", "1/Phi^2"};
  T worst(0);
  for (std::size_t g = 0; g < tests.size(); ++g) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      const auto& G = tests[g];
      const auto& wi = w[i];
      const cplx<T> r = contour_inner_product<T>(
          ip, [&](const BoundaryPoint<T>& p) { return G(p.own); },
          [&](const BoundaryPoint<T>& p) { return K.kernel(p.own, wi); }, false, ContourMode::two_sided);
      const T e = abs(r - G(wi)) / abs(G(wi));
      worst = std::max(worst, e);
      ReportRow row;
      row.label = std::string("G = ") + names[g] + ", w" + std::to_string(i);
      row.values = {{"re_w", to_double(wi.z.real())}, {"im_w", to_double(wi.z.imag())}, {"rel_err", to_double(e)}};
      rep.rows.push_back(row);
    }
  }
  add_verdict(rep, "reproduction", worst <= T(cfg.tol.kernel_rel), to_double(worst), cfg.tol.kernel_rel,
              "max |<G, K(., w)> - G(w)| / |G(w)|");
  const double f0 = to_double(abs(K.extremal(frame->base_point()) - cplx<T>(1)));
  add_verdict(rep, "extremal_at_base", f0 <= 1e-10, f0, 1e-10, "|F(z0) - 1|");
  rep.scalars["limit_A"] = to_double(lim.formula_A);
  rep.scalars["limit_B"] = to_double(lim.formula_B);
  rep.scalars["nu"] = to_double(K.nu());
  return rep;
}

template <template <class> class Impl>
ConvergenceReport dispatch(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto t0 = Clock::now();
  ConvergenceReport rep = cfg.precision == "high" ? Impl<HighReal>::run(cfg) : Impl<double>::run(cfg);
  rep.runtime_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return rep;
}

#define ARCSZEGO_DRIVER(Name, fn)                                                 \
  template <class T>                                                              \
  struct Name {                                                                   \
    static ConvergenceReport run(const ExperimentConfig& cfg) { return fn<T>(cfg); } \
  };
ARCSZEGO_DRIVER(WidomDriver, widom_impl)
ARCSZEGO_DRIVER(StrongDriver, strong_impl)
ARCSZEGO_DRIVER(MaximizerDriver, maximizer_impl)
ARCSZEGO_DRIVER(CircleDriver, circle_impl)
ARCSZEGO_DRIVER(FaberDriver, faber_impl)
ARCSZEGO_DRIVER(KernelDriver, kernel_impl)
#undef ARCSZEGO_DRIVER

}  // namespace

ConvergenceReport run_widom_sweep(const ExperimentConfig& cfg) { return dispatch<WidomDriver>(cfg); }
ConvergenceReport run_strong_asymptotics(const ExperimentConfig& cfg) { return dispatch<StrongDriver>(cfg); }
ConvergenceReport run_maximizer_scan(const ExperimentConfig& cfg) { return dispatch<MaximizerDriver>(cfg); }
ConvergenceReport run_circle_oracle(const ExperimentConfig& cfg) { return dispatch<CircleDriver>(cfg); }
ConvergenceReport run_faber_check(const ExperimentConfig& cfg) { return dispatch<FaberDriver>(cfg); }
ConvergenceReport run_kernel_check(const ExperimentConfig& cfg) { return dispatch<KernelDriver>(cfg); }

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"widom-sweep",  "strong-asymptotics", "maximizer-scan",
                                              "circle-oracle", "faber-check",        "kernel-check"};
  return names;
}

ConvergenceReport run_experiment(const std::string& name, const ExperimentConfig& cfg) {
  if (name == "widom-sweep") return run_widom_sweep(cfg);
  if (name == "strong-asymptotics") return run_strong_asymptotics(cfg);
  if (name == "maximizer-scan") return run_maximizer_scan(cfg);
  if (name == "circle-oracle") return run_circle_oracle(cfg);
  if (name == "faber-check") return run_faber_check(cfg);
  if (name == "kernel-check") return run_kernel_check(cfg);
  throw DomainError("unknown experiment '" + name + "'");
}

}  // namespace arcszego
