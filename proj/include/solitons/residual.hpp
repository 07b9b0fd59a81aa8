#pragma once

// PDE and reduced-ODE residual evaluation.
//
// PDE residuals use 4th-order central differences in x and t with Delta t = h;
// the sampler is evaluated directly at the shifted times, so no time stepping
// is involved. Convergence order is the least-squares slope of log(sup) over
// log(h) and is only reported for three or more resolutions.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "solitons/errors.hpp"
#include "solitons/waves.hpp"

namespace solitons {

struct ResidualReport {
  std::vector<double> spacings;
  std::vector<double> sup;
  std::vector<double> l2;
  std::optional<double> order;

  double sup_norm() const { return sup.empty() ? 0.0 : sup.back(); }
  double l2_norm() const { return l2.empty() ? 0.0 : l2.back(); }
};

inline std::optional<double> fit_order(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() < 3) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(err[i] > 0)) return std::nullopt;
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// PDE kinds.

namespace pde {
struct Transport { double c; };                    // u_t + c u_x
struct KdV {};                                     // u_t + 6 u u_x + u_xxx
struct MKdV {};                                    // u_t + 6 u^2 u_x + u_xxx
struct GmKdV { double alpha, beta; };              // u_t + alpha u^2 u_x + beta u_xxx
struct NLS { double lambda; };                     // i u_t + u_xx + lambda |u|^2 u
struct SineGordon {};                              // u_xx - u_tt - sin u
struct RosenauHyman { double m, n; };              // u_t + (u^m)_x + (u^n)_xxx
}  // namespace pde

using PdeKind = std::variant<pde::Transport, pde::KdV, pde::MKdV, pde::GmKdV, pde::NLS, pde::SineGordon,
                             pde::RosenauHyman>;

inline void validate(const PdeKind& k) {
  if (auto g = std::get_if<pde::GmKdV>(&k); g && g->beta == 0) throw ParameterError("gmkdv: beta must be nonzero");
  if (auto r = std::get_if<pde::RosenauHyman>(&k); r && !(r->m > 1 && r->n > 1 && r->n <= 3))
    throw ParameterError("rosenau-hyman: require m > 1 and 1 < n <= 3");
}

inline std::string pde_name(const PdeKind& k) {
  struct V {
    std::string operator()(const pde::Transport&) const { return "transport"; }
    std::string operator()(const pde::KdV&) const { return "kdv"; }
    std::string operator()(const pde::MKdV&) const { return "mkdv"; }
    std::string operator()(const pde::GmKdV&) const { return "gmkdv"; }
    std::string operator()(const pde::NLS&) const { return "nls"; }
    std::string operator()(const pde::SineGordon&) const { return "sine-gordon"; }
    std::string operator()(const pde::RosenauHyman&) const { return "rosenau-hyman"; }
  };
  return std::visit(V{}, k);
}

using SpaceTimeSampler = std::function<cplx(double x, double t)>;

struct Window {
  double lo, hi;
};

namespace detail {

// 4th-order central stencils on offsets -3..3.
template <class F>
cplx stencil_d1(const F& f, double h) {
  return (-f(2) + 8.0 * f(1) - 8.0 * f(-1) + f(-2)) / (12 * h);
}
template <class F>
cplx stencil_d2(const F& f, double h) {
  return (-f(2) + 16.0 * f(1) - 30.0 * f(0) + 16.0 * f(-1) - f(-2)) / (12 * h * h);
}
template <class F>
cplx stencil_d3(const F& f, double h) {
  return (-f(3) + 8.0 * f(2) - 13.0 * f(1) + 13.0 * f(-1) - 8.0 * f(-2) + f(-3)) / (8 * h * h * h);
}

inline cplx powc(cplx u, double p) {
  // Real powers of real fields keep their sign for odd integers.
  if (u.imag() == 0 && p == std::round(p)) return std::pow(u.real(), p);
  return std::pow(u, p);
}

inline double pde_point_residual(const PdeKind& kind, const SpaceTimeSampler& u, double x, double t, double h) {
  const double dt = h;
  auto ux = [&](int k) { return u(x + k * h, t); };
  auto ut = [&](int k) { return u(x, t + k * dt); };
  const cplx v = u(x, t);
  struct Visitor {
    const SpaceTimeSampler& u;
    double x, t, h, dt;
    cplx v;
    decltype(ux)& fx;
    decltype(ut)& ft;
    double operator()(const pde::Transport& p) const {
      return std::abs(stencil_d1(ft, dt) + p.c * stencil_d1(fx, h));
    }
    double operator()(const pde::KdV&) const {
      return std::abs(stencil_d1(ft, dt) + 6.0 * v * stencil_d1(fx, h) + stencil_d3(fx, h));
    }
    double operator()(const pde::MKdV&) const {
      return std::abs(stencil_d1(ft, dt) + 6.0 * v * v * stencil_d1(fx, h) + stencil_d3(fx, h));
    }
    double operator()(const pde::GmKdV& p) const {
      return std::abs(stencil_d1(ft, dt) + p.alpha * v * v * stencil_d1(fx, h) + p.beta * stencil_d3(fx, h));
    }
    double operator()(const pde::NLS& p) const {
      const cplx r = cplx(0, 1) * stencil_d1(ft, dt) + stencil_d2(fx, h) + p.lambda * std::norm(v) * v;
      return std::max(std::abs(r.real()), std::abs(r.imag()));
    }
    double operator()(const pde::SineGordon&) const {
      return std::abs(stencil_d2(fx, h) - stencil_d2(ft, dt) - std::sin(v));
    }
    double operator()(const pde::RosenauHyman& p) const {
      auto gm = [&](int k) { return powc(u(x + k * h, t), p.m); };
      auto gn = [&](int k) { return powc(u(x + k * h, t), p.n); };
      return std::abs(stencil_d1(ft, dt) + stencil_d1(gm, h) + stencil_d3(gn, h));
    }
  };
  return std::visit(Visitor{u, x, t, h, dt, v, ux, ut}, kind);
}

}  // namespace detail

// `poles` lists singular x positions of the sampler at time t; the window
// widened by the stencil reach must stay clear of them.
inline ResidualReport pde_residual(const PdeKind& kind, const SpaceTimeSampler& u, Window w, double t,
                                   const std::vector<std::size_t>& resolutions = {256, 512, 1024},
                                   const std::vector<double>& poles = {}) {
  validate(kind);
  if (!(w.hi > w.lo)) throw DomainError("pde_residual: empty window");
  if (resolutions.empty()) throw DomainError("pde_residual: no resolutions given");
  ResidualReport rep;
  for (std::size_t n : resolutions) {
    if (n < 4) throw GridError("pde_residual: resolution must be at least 4");
    const double h = (w.hi - w.lo) / double(n);
    for (double p : poles)
      if (p > w.lo - 3 * h && p < w.hi + 3 * h) {
        std::ostringstream os;
        os << "pde_residual: window touches the pole at x = " << p;
        throw PoleError(os.str(), p);
      }
    double sup = 0, sum = 0;
    for (std::size_t i = 0; i <= n; ++i) {
      const double x = w.lo + double(i) * h;
      const double r = detail::pde_point_residual(kind, u, x, t, h);
      if (!std::isfinite(r)) throw DomainError("pde_residual: non-finite residual");
      sup = std::max(sup, r);
      sum += r * r;
    }
    rep.spacings.push_back(h);
    rep.sup.push_back(sup);
    rep.l2.push_back(std::sqrt(sum * h));
  }
  rep.order = fit_order(rep.spacings, rep.sup);
  return rep;
}

// ---------------------------------------------------------------------------
// Reduced ODEs in the travelling coordinate.

namespace ode {
struct KdVReduced { double c; };                          // f'' + 3 f^2 - c f
struct SineGordonReduced { double gamma; };               // G'' - gamma^2 sin G
struct SineGordonFirstIntegral { double gamma, A; };      // G'^2/2 - A + gamma^2 cos G
struct Duffing { double a, b; };                          // f'' - a f + b f^3
struct DuffingNls { double lambda, eta, c; };             // nu'' - (eta + c^2/4) nu + lambda nu^3
struct DuffingCubic { double kappa1, kappa3; };           // q'' + k1 q + k3 q^3
}  // namespace ode

using OdeKind = std::variant<ode::KdVReduced, ode::SineGordonReduced, ode::SineGordonFirstIntegral, ode::Duffing,
                             ode::DuffingNls, ode::DuffingCubic>;

inline std::string ode_name(const OdeKind& k) {
  struct V {
    std::string operator()(const ode::KdVReduced&) const { return "kdv-reduced"; }
    std::string operator()(const ode::SineGordonReduced&) const { return "sg-reduced"; }
    std::string operator()(const ode::SineGordonFirstIntegral&) const { return "sg-first-integral"; }
    std::string operator()(const ode::Duffing&) const { return "duffing-gmkdv"; }
    std::string operator()(const ode::DuffingNls&) const { return "duffing-nls"; }
    std::string operator()(const ode::DuffingCubic&) const { return "duffing-cubic"; }
  };
  return std::visit(V{}, k);
}

// Residual at one point, normalized by max(1, largest term) so that profiles
// growing towards a pole are judged relative to their own size.
inline double ode_point_residual(const OdeKind& kind, const Jet& j) {
  const cplx f = j.d[0], f1 = j.d[1], f2 = j.d[2];
  struct V {
    cplx f, f1, f2;
    std::pair<cplx, double> operator()(const ode::KdVReduced& o) const {
      const cplx t1 = 3.0 * f * f, t2 = o.c * f;
      return {f2 + t1 - t2, std::max({std::abs(f2), std::abs(t1), std::abs(t2)})};
    }
    std::pair<cplx, double> operator()(const ode::SineGordonReduced& o) const {
      const cplx t = o.gamma * o.gamma * std::sin(f);
      return {f2 - t, std::max(std::abs(f2), std::abs(t))};
    }
    std::pair<cplx, double> operator()(const ode::SineGordonFirstIntegral& o) const {
      const cplx k = 0.5 * f1 * f1, p = o.gamma * o.gamma * std::cos(f);
      return {k - o.A + p, std::max({std::abs(k), std::abs(o.A), std::abs(p)})};
    }
    std::pair<cplx, double> operator()(const ode::Duffing& o) const {
      const cplx t1 = o.a * f, t3 = o.b * f * f * f;
      return {f2 - t1 + t3, std::max({std::abs(f2), std::abs(t1), std::abs(t3)})};
    }
    std::pair<cplx, double> operator()(const ode::DuffingNls& o) const {
      const cplx t1 = (o.eta + 0.25 * o.c * o.c) * f, t3 = o.lambda * f * f * f;
      return {f2 - t1 + t3, std::max({std::abs(f2), std::abs(t1), std::abs(t3)})};
    }
    std::pair<cplx, double> operator()(const ode::DuffingCubic& o) const {
      const cplx t1 = o.kappa1 * f, t3 = o.kappa3 * f * f * f;
      return {f2 + t1 + t3, std::max({std::abs(f2), std::abs(t1), std::abs(t3)})};
    }
  };
  const auto [r, scale] = std::visit(V{f, f1, f2}, kind);
  return std::abs(r) / std::max(1.0, scale);
}

struct OdeProbe {
  double xi;
  double residual;
};

struct OdeResidualReport {
  double sup_norm = 0;
  std::vector<OdeProbe> probes;
  // Probes dropped because they lie within the pole margin.
  std::size_t skipped = 0;
};

// Probes are evenly spaced over the window; probes closer than `pole_margin`
// to a real pole of the profile are skipped. A margin of zero lets the
// profile raise its pole error instead.
inline OdeResidualReport ode_residual(const OdeKind& kind, const Profile& f, Window w, std::size_t n_probes,
                                      double pole_margin = 0.0) {
  if (n_probes < 2) throw DomainError("ode_residual: at least two probes required");
  OdeResidualReport rep;
  for (std::size_t i = 0; i < n_probes; ++i) {
    const double xi = w.lo + (w.hi - w.lo) * double(i) / double(n_probes - 1);
    if (pole_margin > 0 && f.pole_distance(xi) < pole_margin) {
      ++rep.skipped;
      continue;
    }
    const double r = ode_point_residual(kind, f.jet(xi));
    rep.probes.push_back({xi, r});
    rep.sup_norm = std::max(rep.sup_norm, r);
  }
  return rep;
}

}  // namespace solitons
