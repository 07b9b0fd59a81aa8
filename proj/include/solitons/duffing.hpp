#pragma once

// Adaptive Dormand-Prince 5(4) integration of the non-dissipative Duffing
// oscillator f'' = a f - b f^3. Used as a brute-force reference for the
// closed-form elliptic travelling waves.

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "solitons/errors.hpp"

namespace solitons {

struct DuffingTrajectory {
  std::vector<double> xi;
  std::vector<double> f;
  std::vector<double> df;
  double a = 0;
  double b = 0;
  double energy0 = 0;
  // max |E(xi) - E(0)| / energy scale along the accepted steps.
  double max_energy_drift = 0;

  double energy_scale() const;
};

inline double duffing_energy(double a, double b, double f, double df) {
  return 0.5 * df * df - 0.5 * a * f * f + 0.25 * b * f * f * f * f;
}

namespace detail {

struct DuffingState {
  double f, v;
};

inline DuffingState duffing_rhs(double a, double b, DuffingState s) {
  return {s.v, a * s.f - b * s.f * s.f * s.f};
}

}  // namespace detail

// Integrates from xi = 0 to xi_max (either sign). Every entry of `stations`
// lying between 0 and xi_max is hit exactly and recorded.
inline DuffingTrajectory duffing_oracle(double a, double b, double f0, double df0, double xi_max,
                                        double tol, const std::vector<double>& stations = {}) {
  if (!(tol >= 1e-12 && tol <= 1e-6)) throw DomainError("duffing_oracle: tol must lie in [1e-12, 1e-6]");
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(f0) || !std::isfinite(df0) ||
      !std::isfinite(xi_max))
    throw DomainError("duffing_oracle: non-finite input");

  // Butcher tableau (Dormand & Prince 1980).
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  (void)c2; (void)c3; (void)c4; (void)c5;  // autonomous system

  DuffingTrajectory out;
  const double dir = xi_max >= 0 ? 1.0 : -1.0;
  std::vector<double> stops;
  for (double s : stations)
    if (s * dir > 0 && s * dir < xi_max * dir) stops.push_back(s);
  std::sort(stops.begin(), stops.end(), [dir](double x, double y) { return x * dir < y * dir; });
  stops.push_back(xi_max);

  double xi = 0;
  detail::DuffingState y{f0, df0};
  out.xi.push_back(0);
  out.f.push_back(f0);
  out.df.push_back(df0);
  out.a = a;
  out.b = b;
  out.energy0 = duffing_energy(a, b, f0, df0);
  const double escale = out.energy_scale();
  if (xi_max == 0) return out;

  double h = dir * std::min(1e-2, std::abs(xi_max));
  auto k1 = detail::duffing_rhs(a, b, y);
  std::size_t next = 0;
  while (next < stops.size()) {
    const double target = stops[next];
    bool clipped = false;
    const double h_free = h;
    if ((xi + h - target) * dir >= 0) {
      h = target - xi;
      clipped = true;
    }
    auto add = [](detail::DuffingState s, double h_, std::initializer_list<std::pair<double, detail::DuffingState>> ks) {
      for (auto& [w, k] : ks) {
        s.f += h_ * w * k.f;
        s.v += h_ * w * k.v;
      }
      return s;
    };
    const auto k2 = detail::duffing_rhs(a, b, add(y, h, {{a21, k1}}));
    const auto k3 = detail::duffing_rhs(a, b, add(y, h, {{a31, k1}, {a32, k2}}));
    const auto k4 = detail::duffing_rhs(a, b, add(y, h, {{a41, k1}, {a42, k2}, {a43, k3}}));
    const auto k5 = detail::duffing_rhs(a, b, add(y, h, {{a51, k1}, {a52, k2}, {a53, k3}, {a54, k4}}));
    const auto k6 =
        detail::duffing_rhs(a, b, add(y, h, {{a61, k1}, {a62, k2}, {a63, k3}, {a64, k4}, {a65, k5}}));
    const auto y5 = add(y, h, {{b1, k1}, {b3, k3}, {b4, k4}, {b5, k5}, {b6, k6}});
    const auto k7 = detail::duffing_rhs(a, b, y5);
    const double ef = h * (e1 * k1.f + e3 * k3.f + e4 * k4.f + e5 * k5.f + e6 * k6.f + e7 * k7.f);
    const double ev = h * (e1 * k1.v + e3 * k3.v + e4 * k4.v + e5 * k5.v + e6 * k6.v + e7 * k7.v);
    const double sf = tol * (1.0 + std::max(std::abs(y.f), std::abs(y5.f)));
    const double sv = tol * (1.0 + std::max(std::abs(y.v), std::abs(y5.v)));
    const double err = std::sqrt(0.5 * ((ef / sf) * (ef / sf) + (ev / sv) * (ev / sv)));

    if (!std::isfinite(err) || std::abs(y5.f) > 1e150) {
      std::ostringstream os;
      os << "duffing_oracle: solution blew up near xi = " << xi;
      throw DivergenceError(os.str(), xi);
    }
    if (err <= 1.0) {
      xi = clipped ? target : xi + h;
      y = y5;
      k1 = k7;
      out.xi.push_back(xi);
      out.f.push_back(y.f);
      out.df.push_back(y.v);
      out.max_energy_drift = std::max(
          out.max_energy_drift, std::abs(duffing_energy(a, b, y.f, y.v) - out.energy0) / escale);
      if (clipped) {
        ++next;
        h = h_free;
        continue;
      }
    }
    const double fac = err == 0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= fac;
    if (std::abs(h) < 1e-13 * std::max(1.0, std::abs(xi))) {
      std::ostringstream os;
      os << "duffing_oracle: step size underflow near xi = " << xi;
      throw DivergenceError(os.str(), xi);
    }
  }
  return out;
}

inline double DuffingTrajectory::energy_scale() const {
  // max(|E0|, size of the individual energy terms) so a zero-energy orbit
  // still gets a meaningful relative drift.
  const double f0 = f.front(), v0 = df.front();
  return std::max({std::abs(energy0),
                   0.5 * v0 * v0 + 0.5 * std::abs(a) * f0 * f0 + 0.25 * std::abs(b) * f0 * f0 * f0 * f0,
                   1e-300});
}

// Value of the trajectory at a recorded station.
inline double duffing_value_at(const DuffingTrajectory& tr, double xi) {
  for (std::size_t i = 0; i < tr.xi.size(); ++i)
    if (tr.xi[i] == xi) return tr.f[i];
  throw DomainError("duffing_value_at: xi was not a recorded station");
}

}  // namespace solitons
