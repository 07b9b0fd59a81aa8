#pragma once

// Jacobi elliptic functions and the elliptic integral of the first kind.
//
// Convention: m is the PARAMETER, i.e. the square of the modulus k (m = k^2).
// sn(u, m) with m = 0 is sin(u) and with m = 1 is tanh(u). This is the
// convention used by Mathematica (JacobiSN[u, m]) and by Abramowitz & Stegun
// chapter 16; it is NOT the modulus convention of std::comp_ellint_1(k).
//
// The core evaluators accept 0 <= m <= 1 only. Parameters outside that range
// go through the explicit reciprocal / negative-parameter helpers at the end
// of this header.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "solitons/errors.hpp"

namespace solitons::elliptic {

using cplx = std::complex<double>;

inline constexpr double kAgmRelTol = 1e-15;
// Landen recursion cutoffs: m below kTrigLimit takes the circular limit,
// 1 - m below kHyperbolicLimit takes the hyperbolic limit.
inline constexpr double kTrigLimit = 1e-14;
inline constexpr double kHyperbolicLimit = 1e-14;
// Complex evaluation refuses arguments this close to a pole of sn.
inline constexpr double kPoleRadius = 1e-8;

// Contract tolerances, checked by the test suite.
inline constexpr double kIdentityTol = 1e-12;
inline constexpr double kInversionTol = 1e-10;
inline constexpr double kDerivativeRelTol = 1e-8;
inline constexpr double kPeriodicityTol = 1e-10;

template <class T>
struct EllipticValue {
  T u;
  double m;
  T sn;
  T cn;
  T dn;
};

namespace detail {

inline void require_parameter(double m, const char* where) {
  if (!std::isfinite(m) || m < 0.0 || m > 1.0) {
    std::ostringstream os;
    os << where << ": parameter m = " << m << " outside [0, 1]";
    throw DomainError(os.str());
  }
}

// Carlson's symmetric integral R_F(x, y, z) by duplication.
inline double carlson_rf(double x, double y, double z) {
  constexpr double errtol = 1e-3;
  double xn = x, yn = y, zn = z;
  double mu = 0, dx = 0, dy = 0, dz = 0;
  for (int iter = 0; iter < 100; ++iter) {
    mu = (xn + yn + zn) / 3.0;
    dx = 1.0 - xn / mu;
    dy = 1.0 - yn / mu;
    dz = 1.0 - zn / mu;
    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < errtol) break;
    const double sx = std::sqrt(xn), sy = std::sqrt(yn), sz = std::sqrt(zn);
    const double lambda = sx * (sy + sz) + sy * sz;
    xn = 0.25 * (xn + lambda);
    yn = 0.25 * (yn + lambda);
    zn = 0.25 * (zn + lambda);
  }
  const double e2 = dx * dy - dz * dz;
  const double e3 = dx * dy * dz;
  return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / std::sqrt(mu);
}

}  // namespace detail

inline double agm(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw DomainError("agm: arguments must be finite and positive");
  for (int iter = 0; iter < 64; ++iter) {
    if (std::abs(a - b) <= kAgmRelTol * std::max(a, b)) break;
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return 0.5 * (a + b);
}

// K(m) for 0 <= m < 1.
inline double complete_K(double m) {
  detail::require_parameter(m, "complete_K");
  if (m >= 1.0) throw DomainError("complete_K: K(m) diverges at m = 1");
  return std::numbers::pi / (2.0 * agm(1.0, std::sqrt(1.0 - m)));
}

// F(phi, m) for any real phi, using F(phi + j*pi) = F(phi) + 2j*K(m).
// At m = 1 only |phi| < pi/2 is finite.
inline double incomplete_F(double phi, double m) {
  detail::require_parameter(m, "incomplete_F");
  if (!std::isfinite(phi)) throw DomainError("incomplete_F: non-finite angle");
  constexpr double pi = std::numbers::pi;
  if (m == 1.0) {
    if (std::abs(phi) >= 0.5 * pi)
      throw DomainError("incomplete_F: F(phi, 1) diverges for |phi| >= pi/2");
    return std::atanh(std::sin(phi));
  }
  const double j = std::round(phi / pi);
  const double r = phi - j * pi;  // r in [-pi/2, pi/2]
  const double s = std::sin(r);
  const double c = std::cos(r);
  const double base = s * detail::carlson_rf(c * c, 1.0 - m * s * s, 1.0);
  return j == 0.0 ? base : base + 2.0 * j * complete_K(m);
}

// sn, cn, dn for real u by the descending Landen (AGM) scheme.
inline EllipticValue<double> jacobi_sn_cn_dn(double u, double m) {
  detail::require_parameter(m, "jacobi_sn_cn_dn");
  if (!std::isfinite(u)) throw DomainError("jacobi_sn_cn_dn: non-finite argument");
  if (m <= kTrigLimit) return {u, m, std::sin(u), std::cos(u), 1.0};
  if (1.0 - m <= kHyperbolicLimit) {
    const double sech = 1.0 / std::cosh(u);
    return {u, m, std::tanh(u), sech, sech};
  }
  std::array<double, 32> a{}, c{};
  a[0] = 1.0;
  c[0] = std::sqrt(m);
  double b = std::sqrt(1.0 - m);
  int n = 0;
  while (std::abs(c[n]) > std::numeric_limits<double>::epsilon() && n + 1 < int(a.size())) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);
  for (int j = n; j > 0; --j) phi = 0.5 * (phi + std::asin(c[j] / a[j] * std::sin(phi)));
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  // dn^2 = (1 - m) + m cn^2 has no cancellation and keeps dn^2 + m sn^2 = 1.
  const double dn = std::sqrt((1.0 - m) + m * cn * cn);
  return {u, m, sn, cn, dn};
}

// Nearest pole of sn(., m) to u. Poles sit at 2jK + i(2k+1)K'.
// Returns false when there are none (m = 0).
inline bool nearest_pole(cplx u, double m, cplx& pole) {
  detail::require_parameter(m, "nearest_pole");
  if (m <= kTrigLimit) return false;
  const double kp = complete_K(1.0 - m);
  double x = 0.0;
  if (1.0 - m > kHyperbolicLimit) {
    const double k = complete_K(m);
    x = 2.0 * k * std::round(u.real() / (2.0 * k));
  }
  const double y = kp * (2.0 * std::round((u.imag() / kp - 1.0) / 2.0) + 1.0);
  pole = {x, y};
  return true;
}

// sn, cn, dn for u = x + iy through Jacobi's imaginary transformation and the
// addition theorem.
inline EllipticValue<cplx> jacobi_complex(cplx u, double m) {
  detail::require_parameter(m, "jacobi_complex");
  const double x = u.real(), y = u.imag();
  if (!std::isfinite(x) || !std::isfinite(y))
    throw DomainError("jacobi_complex: non-finite argument");
  if (y == 0.0) {
    const auto r = jacobi_sn_cn_dn(x, m);
    return {u, m, r.sn, r.cn, r.dn};
  }
  cplx pole;
  if (nearest_pole(u, m, pole) && std::abs(u - pole) < kPoleRadius) {
    std::ostringstream os;
    os << "jacobi_complex: argument (" << x << ", " << y << ") within " << kPoleRadius
       << " of the pole (" << pole.real() << ", " << pole.imag() << ") at m = " << m;
    throw PoleError(os.str(), pole.real(), pole.imag());
  }
  const auto p = jacobi_sn_cn_dn(x, m);
  const auto q = jacobi_sn_cn_dn(y, 1.0 - m);
  const double delta = q.cn * q.cn + m * p.sn * p.sn * q.sn * q.sn;
  const cplx i(0.0, 1.0);
  const cplx sn = (p.sn * q.dn + i * (p.cn * p.dn * q.sn * q.cn)) / delta;
  const cplx cn = (p.cn * q.cn - i * (p.sn * p.dn * q.sn * q.dn)) / delta;
  const cplx dn = (p.dn * q.cn * q.dn - i * (m * p.sn * p.cn * q.sn)) / delta;
  return {u, m, sn, cn, dn};
}

// ---------------------------------------------------------------------------
// Parameters outside [0, 1].

// m > 1: sn(u|m) = sn(u sqrt(m) | 1/m) / sqrt(m), cn <-> dn swap.
inline EllipticValue<cplx> jacobi_reciprocal(cplx u, double m) {
  if (!(m > 1.0) || !std::isfinite(m))
    throw DomainError("jacobi_reciprocal: requires finite m > 1");
  const double r = std::sqrt(m);
  const auto v = jacobi_complex(u * r, 1.0 / m);
  return {u, m, v.sn / r, v.dn, v.cn};
}

// m < 0: with mu = -m/(1-m) and v = u sqrt(1-m),
// sn(u|m) = sd(v|mu)/sqrt(1-m), cn(u|m) = cd(v|mu), dn(u|m) = nd(v|mu).
inline EllipticValue<cplx> jacobi_negative(cplx u, double m) {
  if (!(m < 0.0) || !std::isfinite(m))
    throw DomainError("jacobi_negative: requires finite m < 0");
  const double s = std::sqrt(1.0 - m);
  const double mu = -m / (1.0 - m);
  const auto v = jacobi_complex(u * s, mu);
  if (std::abs(v.dn) < kPoleRadius)
    throw PoleError("jacobi_negative: zero of dn in the transformed argument", u.real(), u.imag());
  return {u, m, v.sn / (s * v.dn), v.cn / v.dn, 1.0 / v.dn};
}

// Dispatches to the core evaluator or one of the transformations.
inline EllipticValue<cplx> jacobi_extended(cplx u, double m) {
  if (m > 1.0) return jacobi_reciprocal(u, m);
  if (m < 0.0) return jacobi_negative(u, m);
  return jacobi_complex(u, m);
}

// K(m) for m < 0 via K(m) = K(mu)/sqrt(1-m), mu = -m/(1-m).
inline double complete_K_negative(double m) {
  if (!(m < 0.0) || !std::isfinite(m))
    throw DomainError("complete_K_negative: requires finite m < 0");
  return complete_K(-m / (1.0 - m)) / std::sqrt(1.0 - m);
}

}  // namespace solitons::elliptic
