#pragma once

// Miura map, Cole-Hopf substitution and the Schrodinger relation between
// them. Fields are either sampled on a uniform grid or analytic with derivative
// access; analytic inputs produce analytic outputs.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include "solitons/grid.hpp"
#include "solitons/residual.hpp"
#include "solitons/waves.hpp"

namespace solitons {

class FieldFunction {
 public:
  using JetFn = std::function<Jet(double)>;

  // Periodic samples are differentiated spectrally, non-periodic ones by
  // 6th-order finite differences.
  static FieldFunction sampled(const Grid& g, std::vector<cplx> values, bool periodic = true) {
    if (values.size() != g.n()) throw GridError("field: sample count does not match the grid");
    FieldFunction f(g);
    f.values_ = std::move(values);
    f.periodic_ = periodic;
    return f;
  }
  static FieldFunction sampled(const std::vector<double>& x, std::vector<cplx> values, bool periodic = true) {
    return sampled(grid_from_points(x), std::move(values), periodic);
  }
  // `order` is the highest derivative the jet provides.
  static FieldFunction analytic(const Grid& g, JetFn jet, int order = 3) {
    FieldFunction f(g);
    f.jet_ = std::move(jet);
    f.order_ = order;
    return f;
  }
  static FieldFunction from_profile(const Grid& g, const Profile& p) {
    return analytic(g, [p](double x) { return p.jet(x); });
  }

  const Grid& grid() const { return grid_; }
  bool is_analytic() const { return bool(jet_); }
  bool periodic() const { return periodic_; }
  int analytic_order() const { return order_; }
  const JetFn& jet_fn() const { return jet_; }

  std::vector<cplx> values() const { return derivative(0); }

  std::vector<cplx> derivative(int k) const {
    if (jet_) {
      if (k > order_) throw DomainError("field: derivative order not available analytically");
      std::vector<cplx> out(grid_.n());
      for (std::size_t i = 0; i < grid_.n(); ++i) out[i] = jet_(grid_.x(i)).d[k];
      return out;
    }
    if (k == 0) return values_;
    if (periodic_) {
      Spectral s(grid_);
      return s.derivative(values_, k);
    }
    return fd_derivative(values_, grid_.h(), k);
  }

 private:
  explicit FieldFunction(const Grid& g) : grid_(g) {}
  Grid grid_;
  std::vector<cplx> values_;
  JetFn jet_;
  int order_ = 0;
  bool periodic_ = true;
};

namespace detail {
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

// V = phi^2 + s phi_x with s = 1 for the real map and s = i for the variant
// relating focusing mKdV to KdV.
inline FieldFunction miura_scaled(const FieldFunction& phi, cplx s) {
  if (phi.is_analytic()) {
    if (phi.analytic_order() < 1) throw DomainError("miura: input needs a first derivative");
    const auto jet = phi.jet_fn();
    const int order = phi.analytic_order() - 1;
    return FieldFunction::analytic(
        phi.grid(),
        [jet, s, order](double x) {
          const Jet p = jet(x);
          Jet v;
          v.d[0] = p.d[0] * p.d[0] + s * p.d[1];
          v.d[1] = order >= 1 ? 2.0 * p.d[0] * p.d[1] + s * p.d[2] : detail::kNaN;
          v.d[2] = order >= 2 ? 2.0 * p.d[1] * p.d[1] + 2.0 * p.d[0] * p.d[2] + s * p.d[3] : detail::kNaN;
          v.d[3] = detail::kNaN;
          return v;
        },
        order);
  }
  const auto u = phi.values();
  const auto ux = phi.derivative(1);
  std::vector<cplx> v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[i] * u[i] + s * ux[i];
  return FieldFunction::sampled(phi.grid(), std::move(v), phi.periodic());
}

inline FieldFunction miura(const FieldFunction& phi) { return miura_scaled(phi, 1.0); }
inline FieldFunction miura_complex(const FieldFunction& phi) { return miura_scaled(phi, cplx(0, 1)); }

// phi = psi_x / psi. Points with |psi| < 1e-12 max|psi| are rejected.
inline FieldFunction cole_hopf(const FieldFunction& psi) {
  const auto v = psi.values();
  double vmax = 0;
  for (auto z : v) vmax = std::max(vmax, std::abs(z));
  const double thresh = 1e-12 * vmax;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(std::abs(v[i]) >= thresh) || vmax == 0) {
      std::ostringstream os;
      os << "cole_hopf: |psi| below " << thresh << " at x = " << psi.grid().x(i);
      throw NearZeroError(os.str(), psi.grid().x(i));
    }
  if (psi.is_analytic()) {
    if (psi.analytic_order() < 1) throw DomainError("cole_hopf: input needs a first derivative");
    const auto jet = psi.jet_fn();
    const int order = psi.analytic_order() - 1;
    return FieldFunction::analytic(
        psi.grid(),
        [jet, order, thresh](double x) {
          const Jet p = jet(x);
          if (std::abs(p.d[0]) < thresh) {
            std::ostringstream os;
            os << "cole_hopf: |psi| below " << thresh << " at x = " << x;
            throw NearZeroError(os.str(), x);
          }
          Jet f;
          f.d[0] = p.d[1] / p.d[0];
          f.d[1] = order >= 1 ? p.d[2] / p.d[0] - f.d[0] * f.d[0] : detail::kNaN;
          f.d[2] = order >= 2 ? p.d[3] / p.d[0] - 3.0 * f.d[0] * f.d[1] - f.d[0] * f.d[0] * f.d[0] : detail::kNaN;
          f.d[3] = detail::kNaN;
          return f;
        },
        order);
  }
  const auto vx = psi.derivative(1);
  std::vector<cplx> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = vx[i] / v[i];
  return FieldFunction::sampled(psi.grid(), std::move(out), psi.periodic());
}

// Sup and L2 norms of psi_xx - V psi on the shared grid.
inline ResidualReport schrodinger_residual(const FieldFunction& psi, const FieldFunction& V) {
  if (!(psi.grid() == V.grid())) throw GridError("schrodinger_residual: psi and V live on different grids");
  const auto p = psi.values();
  const auto pxx = psi.derivative(2);
  const auto v = V.values();
  ResidualReport rep;
  double sup = 0, sum = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double r = std::abs(pxx[i] - v[i] * p[i]);
    sup = std::max(sup, r);
    sum += r * r;
  }
  rep.spacings.push_back(psi.grid().h());
  rep.sup.push_back(sup);
  rep.l2.push_back(std::sqrt(sum * psi.grid().h()));
  return rep;
}

}  // namespace solitons
