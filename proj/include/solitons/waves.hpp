#pragma once

// Closed-form travelling waves and solitons.
//
// Every family is available two ways: a scalar evaluator (kdv_soliton(p, xi))
// and a Profile, which carries the value together with analytic derivatives
// in the travelling coordinate xi = x - c t up to third order plus a JSON
// descriptor. Profiles are immutable and cheap to copy.
//
// All reductions take vanishing integration constants.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "solitons/duffing.hpp"
#include "solitons/elliptic.hpp"
#include "solitons/errors.hpp"

namespace solitons {

using cplx = std::complex<double>;
using json = nlohmann::json;

struct TravellingFrame {
  double c = 0;
  double xi(double x, double t) const { return x - c * t; }
};

// Value and xi-derivatives 0..3.
struct Jet {
  std::array<cplx, 4> d{};
  cplx value() const { return d[0]; }
};

// Poles on the real xi axis at offset + k * period, k integer.
struct PoleLattice {
  double offset = 0;
  double period = 0;
};

// A recorded comparison between a nominal closed form and the form that
// actually satisfies the reduced equation.
struct DiscrepancyNote {
  std::string quantity;
  cplx nominal;
  cplx used;
  bool nominal_verified;
  std::string detail;
};

inline json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

class Profile {
 public:
  using JetFn = std::function<Jet(double)>;

  Profile(std::string family, json parameters, json derived, JetFn jet, bool real_valued)
      : family_(std::move(family)),
        parameters_(std::move(parameters)),
        derived_(std::move(derived)),
        jet_(std::move(jet)),
        real_valued_(real_valued) {}

  const std::string& family() const { return family_; }
  const json& parameters() const { return parameters_; }
  const json& derived() const { return derived_; }
  bool real_valued() const { return real_valued_; }
  const std::vector<DiscrepancyNote>& notes() const { return notes_; }
  const std::optional<PoleLattice>& poles() const { return poles_; }

  Jet jet(double xi) const {
    if (poles_) {
      const double k = std::round((xi - poles_->offset) / poles_->period);
      const double p = poles_->offset + k * poles_->period;
      if (std::abs(xi - p) < elliptic::kPoleRadius) {
        std::ostringstream os;
        os << family_ << ": xi = " << xi << " is within " << elliptic::kPoleRadius
           << " of the pole at " << p;
        throw PoleError(os.str(), p);
      }
    }
    return jet_(xi);
  }
  cplx operator()(double xi) const { return jet(xi).d[0]; }

  double real_at(double xi) const {
    if (!real_valued_) throw DomainError(family_ + ": profile is complex-valued");
    return jet(xi).d[0].real();
  }

  // Real poles inside [lo, hi].
  std::vector<double> poles_in(double lo, double hi) const {
    std::vector<double> out;
    if (!poles_) return out;
    const double kmin = std::ceil((lo - poles_->offset) / poles_->period);
    for (double k = kmin; poles_->offset + k * poles_->period <= hi; k += 1.0)
      out.push_back(poles_->offset + k * poles_->period);
    return out;
  }
  // Distance from xi to the nearest real pole (infinity if none).
  double pole_distance(double xi) const {
    if (!poles_) return std::numeric_limits<double>::infinity();
    const double k = std::round((xi - poles_->offset) / poles_->period);
    return std::abs(xi - (poles_->offset + k * poles_->period));
  }

  Profile with_poles(PoleLattice p) const {
    Profile q = *this;
    p.period = std::abs(p.period);
    p.offset = std::fmod(p.offset, p.period);
    q.poles_ = p;
    return q;
  }
  Profile with_note(DiscrepancyNote n) const {
    Profile q = *this;
    q.notes_.push_back(std::move(n));
    return q;
  }
  // Amplitude-rescaled copy. Used to check that verification detects a
  // corrupted profile.
  Profile scaled(double factor) const {
    Profile q = *this;
    auto inner = jet_;
    q.jet_ = [inner, factor](double xi) {
      Jet j = inner(xi);
      for (auto& v : j.d) v *= factor;
      return j;
    };
    q.derived_["amplitude_scale"] = factor;
    return q;
  }

  json descriptor() const {
    json notes = json::array();
    for (const auto& n : notes_)
      notes.push_back({{"quantity", n.quantity},
                       {"nominal", cplx_json(n.nominal)},
                       {"used", cplx_json(n.used)},
                       {"nominal_verified", n.nominal_verified},
                       {"detail", n.detail}});
    json d = {{"family", family_}, {"parameters", parameters_}, {"derived", derived_},
              {"real_valued", real_valued_}, {"notes", notes}};
    if (poles_) d["poles"] = {{"offset", poles_->offset}, {"period", poles_->period}};
    return d;
  }

 private:
  std::string family_;
  json parameters_;
  json derived_;
  JetFn jet_;
  bool real_valued_;
  std::optional<PoleLattice> poles_;
  std::vector<DiscrepancyNote> notes_;
};

namespace detail {

using Derivs = std::array<cplx, 4>;

// f(xi) = A g(k xi + u0): f^(n) = A k^n g^(n).
inline Jet chain(const Derivs& g, cplx A, cplx k) {
  Jet j;
  cplx kn = 1.0;
  for (int n = 0; n < 4; ++n) {
    j.d[n] = A * kn * g[n];
    kn *= k;
  }
  return j;
}

inline Derivs sech_derivs(double u) {
  const double s = 1.0 / std::cosh(u), t = std::tanh(u);
  return {s, -s * t, s - 2 * s * s * s, s * t * (6 * s * s - 1)};
}

inline Derivs sech2_derivs(double u) {
  const double s = 1.0 / std::cosh(u), t = std::tanh(u), s2 = s * s;
  return {s2, -2 * s2 * t, 4 * s2 - 6 * s2 * s2, -8 * s2 * t + 24 * s2 * s2 * t};
}

inline Derivs tanh_derivs(double u) {
  const double t = std::tanh(u), s2 = 1 - t * t;
  return {t, s2, -2 * t * s2, s2 * (6 * t * t - 2)};
}

inline Derivs tan_derivs(double u) {
  const double t = std::tan(u), p = 1 + t * t;
  return {t, p, 2 * t * p, p * (2 + 6 * t * t)};
}

inline Derivs sn_derivs(const elliptic::EllipticValue<cplx>& v) {
  const double m = v.m;
  const cplx cd = v.cn * v.dn;
  return {v.sn, cd, -(1 + m) * v.sn + 2 * m * v.sn * v.sn * v.sn, cd * (-(1 + m) + 6 * m * v.sn * v.sn)};
}

inline Derivs cn_derivs(const elliptic::EllipticValue<double>& v) {
  const double m = v.m;
  const double sd = v.sn * v.dn;
  return {v.cn, -sd, (2 * m - 1) * v.cn - 2 * m * v.cn * v.cn * v.cn,
          -sd * ((2 * m - 1) - 6 * m * v.cn * v.cn)};
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

// sqrt(x) snapped to zero for discriminants that vanish up to rounding.
inline cplx discriminant_root(double disc, double scale) {
  if (std::abs(disc) <= 16 * std::numeric_limits<double>::epsilon() * scale) return 0.0;
  return std::sqrt(cplx(disc, 0.0));
}

// Clears a negative-zero imaginary part so principal square roots of
// negative reals land on +i.
inline cplx unsigned_zero(cplx z) { return {z.real(), z.imag() + 0.0}; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Parameter records.

class KdVSolitonParams {
 public:
  explicit KdVSolitonParams(double c) : c_(c) {
    detail::require(std::isfinite(c) && c > 0, "kdv soliton: speed c must be > 0");
  }
  double c() const { return c_; }

 private:
  double c_;
};

class MKdVWaveParams {
 public:
  explicit MKdVWaveParams(double c) : c_(c) {
    detail::require(std::isfinite(c) && c > 0, "mkdv wave: speed c must be > 0");
  }
  double c() const { return c_; }

 private:
  double c_;
};

enum class Polarity { Kink = +1, Antikink = -1 };

class SineGordonKinkParams {
 public:
  // gamma = (1 - c^2)^(-1/2), so |c| < 1 is required.
  static SineGordonKinkParams from_speed(double c, Polarity p) {
    detail::require(std::isfinite(c) && std::abs(c) < 1, "sine-Gordon kink: |c| must be < 1");
    return SineGordonKinkParams(1.0 / std::sqrt(1 - c * c), c, p);
  }
  // Profile-only parameterization by the xi-scale. gamma < 1 has no real
  // Lorentz speed; such kinks exist as solutions of the reduced ODE only.
  static SineGordonKinkParams from_gamma(double gamma, Polarity p) {
    detail::require(std::isfinite(gamma) && gamma > 0, "sine-Gordon kink: gamma must be > 0");
    return SineGordonKinkParams(gamma, std::nullopt, p);
  }
  double gamma() const { return gamma_; }
  std::optional<double> c() const { return c_; }
  Polarity polarity() const { return polarity_; }
  int sign() const { return static_cast<int>(polarity_); }

 private:
  SineGordonKinkParams(double g, std::optional<double> c, Polarity p) : gamma_(g), c_(c), polarity_(p) {}
  double gamma_;
  std::optional<double> c_;
  Polarity polarity_;
};

// Generalized mKdV  phi_t + alpha phi^2 phi_x + beta phi_xxx = 0 at speed c.
// Travelling waves obey the Duffing equation f'' - a f + b f^3 = 0 with
// a = c/beta, b = alpha/(3 beta).
class GmkdvParams {
 public:
  GmkdvParams(double alpha, double beta, double c) : alpha_(alpha), beta_(beta), c_(c) {
    detail::require(std::isfinite(alpha) && alpha != 0, "gmkdv: alpha must be nonzero");
    detail::require(std::isfinite(beta) && beta != 0, "gmkdv: beta must be nonzero");
    detail::require(std::isfinite(c), "gmkdv: c must be finite");
  }
  // Parameters reproducing the Duffing coefficients (a, b) for a given beta.
  static GmkdvParams from_duffing(double a, double b, double beta = 1.0) {
    return GmkdvParams(3 * beta * b, beta, a * beta);
  }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double c() const { return c_; }
  double a() const { return c_ / beta_; }
  double b() const { return alpha_ / (3 * beta_); }
  double discriminant() const { return a() * a() + 2 * b(); }
  cplx root() const { return detail::discriminant_root(discriminant(), a() * a() + 2 * std::abs(b())); }
  cplx delta_plus() const { return detail::unsigned_zero(a() + root()); }
  cplx delta_minus() const { return detail::unsigned_zero(a() - root()); }
  cplx m() const { return delta_plus() / delta_minus(); }

  json to_json() const { return {{"alpha", alpha_}, {"beta", beta_}, {"c", c_}}; }
  json derived_json() const {
    return {{"a", a()}, {"b", b()}, {"delta_plus", cplx_json(delta_plus())},
            {"delta_minus", cplx_json(delta_minus())}, {"m", cplx_json(m())}};
  }

 private:
  double alpha_, beta_, c_;
};

// NLS  i u_t + u_xx + lambda |u|^2 u = 0 with carrier u = e^{i(c x/2 + eta t)} nu(x - c t).
class NLSParams {
 public:
  NLSParams(double lambda, double c, double eta) : lambda_(lambda), c_(c), eta_(eta) {
    detail::require(std::isfinite(lambda) && std::isfinite(c) && std::isfinite(eta),
                    "nls: parameters must be finite");
  }
  double lambda() const { return lambda_; }
  double c() const { return c_; }
  double eta() const { return eta_; }
  // Linear coefficient of the reduced ODE  nu'' - (eta + c^2/4) nu + lambda nu^3 = 0.
  double duffing_a() const { return eta_ + 0.25 * c_ * c_; }
  double s() const { return c_ * c_ + 4 * eta_; }
  cplx root() const {
    return detail::discriminant_root(s() * s() - 32 * lambda_, s() * s() + 32 * std::abs(lambda_));
  }
  cplx mu_plus() const { return detail::unsigned_zero(s() + root()); }
  cplx mu_minus() const { return detail::unsigned_zero(s() - root()); }
  cplx m_n() const { return mu_plus() / mu_minus(); }

  json to_json() const { return {{"lambda", lambda_}, {"c", c_}, {"eta", eta_}}; }
  json derived_json() const {
    return {{"duffing_a", duffing_a()}, {"mu_plus", cplx_json(mu_plus())},
            {"mu_minus", cplx_json(mu_minus())}, {"m_n", cplx_json(m_n())}};
  }

 private:
  double lambda_, c_, eta_;
};

// ---------------------------------------------------------------------------
// KdV soliton  f = (c/2) sech^2(sqrt(c) xi / 2).

inline Profile kdv_soliton_profile(const KdVSolitonParams& p) {
  const double c = p.c(), k = 0.5 * std::sqrt(c);
  return Profile("kdv-soliton", {{"c", c}}, {{"peak", c / 2}, {"width_scale", k}},
                 [c, k](double xi) { return detail::chain(detail::sech2_derivs(k * xi), c / 2, k); }, true);
}

inline double kdv_soliton(const KdVSolitonParams& p, double xi) {
  const double s = 1.0 / std::cosh(0.5 * std::sqrt(p.c()) * xi);
  return 0.5 * p.c() * s * s;
}

// Inverse of the soliton profile on the xi <= 0 branch:
// xi = -(2/sqrt c) artanh(sqrt(c - 2f)/sqrt c).
inline double kdv_profile_inverse(const KdVSolitonParams& p, double f) {
  const double c = p.c();
  if (!(f > 0 && f < 0.5 * c)) {
    std::ostringstream os;
    os << "kdv_profile_inverse: f = " << f << " outside (0, c/2) = (0, " << 0.5 * c << ")";
    throw DomainError(os.str());
  }
  return -2.0 / std::sqrt(c) * std::atanh(std::sqrt(c - 2 * f) / std::sqrt(c));
}

// ---------------------------------------------------------------------------
// mKdV travelling wave  2c e^{xi sqrt c} / (c + e^{2 xi sqrt c}),
// evaluated as sqrt(c) sech(sqrt(c) xi - ln sqrt(c)) to avoid overflow.

inline double mkdv_wave(const MKdVWaveParams& p, double xi) {
  const double r = std::sqrt(p.c());
  return r / std::cosh(r * xi - std::log(r));
}

inline double mkdv_wave_argmax(const MKdVWaveParams& p) { return std::log(p.c()) / (2 * std::sqrt(p.c())); }

inline Profile mkdv_wave_profile(const MKdVWaveParams& p) {
  const double r = std::sqrt(p.c()), shift = std::log(r);
  return Profile("mkdv-wave", {{"c", p.c()}}, {{"peak", r}, {"argmax", mkdv_wave_argmax(p)}},
                 [r, shift](double xi) { return detail::chain(detail::sech_derivs(r * xi - shift), r, r); },
                 true);
}

// ---------------------------------------------------------------------------
// Sine-Gordon kink / antikink  G = 4 arctan(exp(+-gamma xi)).

inline double sg_kink(const SineGordonKinkParams& p, double xi) {
  return 4.0 * std::atan(std::exp(p.sign() * p.gamma() * xi));
}

inline Profile sg_kink_profile(const SineGordonKinkParams& p) {
  const double g = p.gamma();
  const int s = p.sign();
  json params = {{"gamma", g}, {"polarity", s}};
  if (p.c()) params["c"] = *p.c();
  return Profile(s > 0 ? "sg-kink" : "sg-antikink", params, {{"first_integral_A", g * g}},
                 [g, s](double xi) {
                   // G' = 2 s gamma sech(gamma xi); integrate the sech jet.
                   const auto h = detail::sech_derivs(g * xi);
                   Jet j;
                   j.d[0] = 4.0 * std::atan(std::exp(s * g * xi));
                   j.d[1] = 2.0 * s * g * h[0];
                   j.d[2] = 2.0 * s * g * g * h[1];
                   j.d[3] = 2.0 * s * g * g * g * h[2];
                   return j;
                 },
                 true);
}

// ---------------------------------------------------------------------------
// sn-type Duffing waves.

namespace detail {

// f = A sn(kappa xi, m) solving f'' - a f + b f^3 = 0 (holomorphically, so
// complex amplitudes are allowed). The nominal amplitude is checked against
// the analytic residual and, where f is real or purely imaginary on the real
// axis, against a direct integration of the Duffing equation. On failure the
// amplitude implied by the sn ansatz, A^2 = -2 m kappa^2 / b, is substituted.
struct SnWaveSpec {
  std::string family;
  json parameters;
  json derived;
  double a, b;
  cplx nominal_amplitude;
  cplx kappa;
  double m;
};

inline Profile sn_profile_with_amplitude(const SnWaveSpec& s, cplx A) {
  const cplx kappa = s.kappa;
  const double m = s.m;
  // sn(real, m) is real and sn(i y, m) is imaginary for every real m.
  const bool kappa_imag = std::abs(kappa.real()) <= 1e-14 * std::abs(kappa);
  const cplx phase = (kappa_imag ? cplx(0, 1) : cplx(1, 0)) * A / std::abs(A);
  const bool real = std::abs(phase.imag()) <= 1e-14;
  json derived = s.derived;
  derived["amplitude"] = cplx_json(A);
  derived["kappa"] = cplx_json(kappa);
  derived["m"] = m;
  Profile prof(s.family, s.parameters, derived,
               [A, kappa, m](double xi) {
                 const auto v = elliptic::jacobi_extended(kappa * xi, m);
                 return chain(sn_derivs(v), A, kappa);
               },
               real);
  if (kappa_imag && m > 0) {
    // Poles of sn(i y, m) at y = (2k+1) K'.
    const double ki = std::abs(kappa.imag());
    double kp = 0;
    if (m <= 1) kp = elliptic::complete_K(1 - m);
    if (m > 1) kp = elliptic::complete_K(1 - 1 / m) / std::sqrt(m);
    prof = prof.with_poles({kp / ki, 2 * kp / ki});
  }
  return prof;
}

inline double sn_residual(const Profile& p, double a, double b, double xi) {
  const Jet j = p.jet(xi);
  const cplx f = j.d[0];
  const cplx r = j.d[2] - a * f + b * f * f * f;
  const double scale = std::max({1.0, std::abs(j.d[2]), std::abs(a * f), std::abs(b * f * f * f)});
  return std::abs(r) / scale;
}

// True when the profile passes both checks.
inline bool verify_sn_profile(const Profile& p, double a, double b, std::string& why) {
  const double half = std::min(1.0, 0.45 * p.pole_distance(0.0));
  std::vector<double> probes;
  for (int i = -8; i <= 8; ++i) probes.push_back(half * i / 8.0);
  for (double xi : probes) {
    if (sn_residual(p, a, b, xi) > 1e-10) {
      std::ostringstream os;
      os << "reduced ODE residual " << sn_residual(p, a, b, xi) << " at xi = " << xi;
      why = os.str();
      return false;
    }
  }
  // Purely real or imaginary on the real axis: f = P w with w real and
  // w'' = a w - b P^2 w^3.
  const Jet j0 = p.jet(0.0);
  const cplx d0 = j0.d[1];
  if (std::abs(d0) == 0) return true;
  const cplx P = d0 / std::abs(d0);
  const cplx P2 = P * P;
  if (std::abs(P2.imag()) > 1e-12) return true;
  const double bw = b * P2.real();
  for (double dir : {1.0, -1.0}) {
    std::vector<double> stations;
    for (double xi : probes)
      if (xi * dir > 0) stations.push_back(xi);
    const auto tr = duffing_oracle(a, bw, 0.0, std::abs(d0), dir * half, 1e-12, stations);
    for (double xi : stations) {
      const double w = (p(xi) / P).real();
      const double ref = duffing_value_at(tr, xi);
      if (std::abs(w - ref) > 1e-8 * std::max(1.0, std::abs(ref))) {
        std::ostringstream os;
        os << "Duffing integration differs by " << std::abs(w - ref) << " at xi = " << xi;
        why = os.str();
        return false;
      }
    }
  }
  return true;
}

inline Profile build_sn_profile(const SnWaveSpec& s, const std::string& quantity) {
  Profile nominal = sn_profile_with_amplitude(s, s.nominal_amplitude);
  std::string why;
  if (verify_sn_profile(nominal, s.a, s.b, why))
    return nominal.with_note({quantity, s.nominal_amplitude, s.nominal_amplitude, true,
                              "nominal amplitude satisfies the reduced ODE"});
  const cplx A = std::sqrt(-2.0 * s.m * s.kappa * s.kappa / s.b);
  Profile fixed = sn_profile_with_amplitude(s, A);
  std::string why2;
  if (!verify_sn_profile(fixed, s.a, s.b, why2))
    throw ParameterError(s.family + ": no amplitude satisfies the reduced ODE (" + why2 + ")");
  return fixed.with_note({quantity, s.nominal_amplitude, A, false,
                          "nominal amplitude rejected: " + why + "; sn-ansatz amplitude substituted"});
}

inline double real_parameter(cplx m, const std::string& family) {
  if (std::abs(m.imag()) > 1e-14 * std::max(1.0, std::abs(m)))
    throw ParameterError(family + ": elliptic parameter is complex (negative discriminant); not supported");
  return m.real();
}

}  // namespace detail

// f_g = (2/delta-) sqrt(b/delta+) sn(-i sqrt(delta-/2) xi, m), m = delta+/delta-.
// `prefactor_scale` perturbs the nominal amplitude; it exists for testing the
// fallback path and is 1 otherwise.
inline Profile gmkdv_sn_profile(const GmkdvParams& p, double prefactor_scale = 1.0) {
  const cplx dp = p.delta_plus(), dm = p.delta_minus();
  if (std::abs(dp) == 0 || std::abs(dm) == 0)
    throw ParameterError("gmkdv_sn: degenerate parameters (delta+ or delta- is zero)");
  const double m = detail::real_parameter(p.m(), "gmkdv_sn");
  const cplx i(0, 1);
  detail::SnWaveSpec s{"gmkdv-sn",
                       p.to_json(),
                       p.derived_json(),
                       p.a(),
                       p.b(),
                       prefactor_scale * (2.0 / dm) * std::sqrt(p.b() / dp),
                       -i * std::sqrt(dm / 2.0),
                       m};
  return detail::build_sn_profile(s, "sn amplitude (2/delta-) sqrt(b/delta+)");
}

inline cplx gmkdv_sn(const GmkdvParams& p, double xi) { return gmkdv_sn_profile(p)(xi); }

struct ConstraintSpeeds {
  double c_plus;
  double c_minus;
};

// Speeds making m = 1, i.e. a^2 + 2b = 0: c = +-sqrt(-2 alpha beta / 3).
inline ConstraintSpeeds gmkdv_constraint_speed(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha * beta >= 0)
    throw ConstraintError("gmkdv constraint: alpha*beta must be negative for a real speed (one of them must be negative)");
  const double c = std::sqrt(-2.0 * alpha * beta / 3.0);
  return {c, -c};
}

enum class KinkBranch { Plus, Minus };

// Modulus-one degenerations of the sn wave.
//   Plus : tanh kink, speed with c/beta < 0,
//   Minus: tan-type wave, speed with c/beta > 0.
// Amplitude and scale are fixed by the reduced ODE: f = A S(k xi) with
// k = (|alpha|/(6|beta|))^(1/4) and A = 1/k. The unit-amplitude closed form
// is kept in the profile notes.
inline Profile gmkdv_kink_profile(double alpha, double beta, KinkBranch branch) {
  const auto speeds = gmkdv_constraint_speed(alpha, beta);
  const bool plus = branch == KinkBranch::Plus;
  const double c = (plus == (beta > 0)) ? speeds.c_minus : speeds.c_plus;
  const GmkdvParams p(alpha, beta, c);
  const double a = p.a(), b = p.b();
  const double k = std::sqrt(std::abs(a) / 2.0);
  const double A = std::sqrt(std::abs(a / b));
  json params = {{"alpha", alpha}, {"beta", beta}, {"branch", plus ? "+" : "-"}};
  json derived = p.derived_json();
  derived["c"] = c;
  derived["amplitude"] = A;
  derived["scale"] = k;
  Profile prof = plus ? Profile("gmkdv-kink", params, derived,
                                [A, k](double xi) { return detail::chain(detail::tanh_derivs(k * xi), A, k); }, true)
                      : Profile("gmkdv-tan", params, derived,
                                [A, k](double xi) { return detail::chain(detail::tan_derivs(k * xi), A, k); }, true)
                            .with_poles({std::numbers::pi / (2 * k), std::numbers::pi / k});
  std::ostringstream os;
  os << "unit-amplitude form " << (plus ? "tanh(k xi)" : "i tan(k xi)")
     << " leaves reduced-ODE residual; amplitude 1/k = " << A << " required";
  return prof.with_note({"kink amplitude", plus ? cplx(1, 0) : cplx(0, 1), A, false, os.str()});
}

inline cplx gmkdv_kink(double alpha, double beta, KinkBranch branch, double xi) {
  return gmkdv_kink_profile(alpha, beta, branch)(xi);
}

// Index of the eta branch returned by nls_eta_constraint.
enum class NlsBranch { One = 1, Two = 2 };

struct EtaPair {
  double eta_1;
  double eta_2;
};

// eta values making m_n = 1, i.e. (c^2 + 4 eta)^2 = 32 lambda.
inline EtaPair nls_eta_constraint(double lambda, double c) {
  if (!std::isfinite(lambda) || !(lambda > 0))
    throw DomainError("nls_eta_constraint: lambda must be > 0 (sqrt(2 lambda) must be real)");
  const double r = std::sqrt(2 * lambda);
  return {-0.25 * (c * c + 4 * r), -0.25 * (c * c - 4 * r)};
}

// nu = 2 sqrt(2/mu-) sn(2i sqrt(lambda/mu+) xi, m_n).
inline Profile nls_sn_profile(const NLSParams& p, double prefactor_scale = 1.0) {
  if (p.lambda() == 0) throw ParameterError("nls_sn: lambda must be nonzero");
  const cplx mp = p.mu_plus(), mm = p.mu_minus();
  if (std::abs(mp) == 0 || std::abs(mm) == 0)
    throw ParameterError("nls_sn: degenerate parameters (mu+ or mu- is zero)");
  const double m = detail::real_parameter(p.m_n(), "nls_sn");
  const cplx i(0, 1);
  detail::SnWaveSpec s{"nls-sn",
                       p.to_json(),
                       p.derived_json(),
                       p.duffing_a(),
                       p.lambda(),
                       prefactor_scale * 2.0 * std::sqrt(2.0 / mm),
                       2.0 * i * std::sqrt(p.lambda() / mp),
                       m};
  return detail::build_sn_profile(s, "sn amplitude 2 sqrt(2/mu-)");
}

inline cplx nls_sn(const NLSParams& p, double xi) { return nls_sn_profile(p)(xi); }

// Modulus-one NLS kinks with c = 0:
//   One: i (2/lambda)^(1/4) tanh((lambda/2)^(1/4) xi)       at eta_1
//   Two: (2/lambda)^(1/4) tanh(i (lambda/2)^(1/4) xi)       at eta_2
// Both are purely imaginary on the real axis.
inline Profile nls_kink_profile(double lambda, NlsBranch branch) {
  if (!std::isfinite(lambda) || !(lambda > 0)) throw DomainError("nls_kink: lambda must be > 0");
  const double A = std::pow(2.0 / lambda, 0.25), k = std::pow(lambda / 2.0, 0.25);
  const auto etas = nls_eta_constraint(lambda, 0.0);
  const bool one = branch == NlsBranch::One;
  json params = {{"lambda", lambda}, {"branch", one ? 1 : 2}};
  json derived = {{"eta", one ? etas.eta_1 : etas.eta_2}, {"c", 0.0}, {"amplitude", A}, {"scale", k}};
  const cplx i(0, 1);
  Profile prof = one ? Profile("nls-kink", params, derived,
                               [=](double xi) { return detail::chain(detail::tanh_derivs(k * xi), i * A, k); }, false)
                     : Profile("nls-tan", params, derived,
                               [=](double xi) { return detail::chain(detail::tan_derivs(k * xi), i * A, k); }, false)
                           .with_poles({std::numbers::pi / (2 * k), std::numbers::pi / k});
  return prof.with_note({"nonlinearity", i * A, i * A, true,
                         "imaginary profile: solves the reduced ODE with nu^3, but nu^3 = -|nu|^2 nu, so the "
                         "assembled field solves the NLS with lambda -> -lambda"});
}

inline cplx nls_kink(double lambda, NlsBranch branch, double xi) { return nls_kink_profile(lambda, branch)(xi); }

inline cplx nls_ansatz(const Profile& nu, const NLSParams& p, double x, double t) {
  const cplx phase = std::exp(cplx(0, 0.5 * p.c() * x + p.eta() * t));
  return phase * nu(x - p.c() * t);
}

// ---------------------------------------------------------------------------
// cn-type Duffing waves and bell solitons.

namespace detail {

inline Profile cn_profile(std::string family, json params, double A, double k, double m) {
  json derived = {{"amplitude", A}, {"scale", k}, {"m", m}};
  return Profile(std::move(family), std::move(params), derived,
                 [A, k, m](double xi) { return chain(cn_derivs(elliptic::jacobi_sn_cn_dn(k * xi, m)), A, k); },
                 true);
}

inline void require_cn(double k2, double m, const std::string& who) {
  if (!(k2 > 0) || !std::isfinite(k2)) throw ParameterError(who + ": frequency squared must be > 0");
  if (!(m >= 0 && m <= 1)) {
    std::ostringstream os;
    os << who << ": modulus parameter " << m << " outside [0, 1]";
    throw ParameterError(os.str());
  }
}

}  // namespace detail

// q'' + k1 q + k3 q^3 = 0, q(0) = q0, q'(0) = 0.
inline Profile duffing_cn_profile(double kappa1, double kappa3, double q0) {
  const double k2 = kappa1 + kappa3 * q0 * q0;
  const double m = kappa3 * q0 * q0 / (2 * k2);
  detail::require_cn(k2, m, "duffing_cn");
  return detail::cn_profile("duffing-cn", {{"kappa1", kappa1}, {"kappa3", kappa3}, {"q0", q0}}, q0,
                            std::sqrt(k2), m);
}

inline double duffing_cn(double kappa1, double kappa3, double q0, double t) {
  return duffing_cn_profile(kappa1, kappa3, q0)(t).real();
}

// cn(sqrt(b - a) xi, b/(2(b - a))). Satisfies f(0) = 1 and f'(0) = 0.
inline Profile mkdv_cn_profile(const GmkdvParams& p) {
  const double a = p.a(), b = p.b();
  const double k2 = b - a;
  const double m = b / (2 * k2);
  detail::require_cn(k2, m, "mkdv_cn");
  json params = p.to_json();
  return detail::cn_profile("mkdv-cn", params, 1.0, std::sqrt(k2), m);
}

inline double mkdv_cn(const GmkdvParams& p, double xi) { return mkdv_cn_profile(p)(xi).real(); }

inline Profile mkdv_bell_profile(double c, double beta) {
  if (!(beta != 0) || !(c / beta > 0) || !std::isfinite(c / beta))
    throw ParameterError("mkdv_bell: c/beta must be > 0");
  const double k = std::sqrt(c / beta);
  return Profile("mkdv-bell", {{"c", c}, {"beta", beta}}, {{"scale", k}, {"alpha", 6 * c}},
                 [k](double xi) { return detail::chain(detail::sech_derivs(k * xi), 1.0, k); }, true);
}

inline double mkdv_bell(double c, double beta, double xi) {
  if (!(beta != 0) || !(c / beta > 0)) throw ParameterError("mkdv_bell: c/beta must be > 0");
  return 1.0 / std::cosh(std::sqrt(c / beta) * xi);
}

// cn(xi sqrt(lambda - eta - c^2/4), lambda/(2(lambda - eta - c^2/4))); the
// argument `beta` plays the role of the carrier frequency eta.
inline Profile nls_cn_profile(double lambda, double beta, double c) {
  const double k2 = lambda - beta - 0.25 * c * c;
  const double m = lambda / (2 * k2);
  detail::require_cn(k2, m, "nls_cn");
  return detail::cn_profile("nls-cn", {{"lambda", lambda}, {"beta", beta}, {"c", c}}, 1.0, std::sqrt(k2), m);
}

inline double nls_cn(double lambda, double beta, double c, double xi) {
  return nls_cn_profile(lambda, beta, c)(xi).real();
}

// Carrier frequency at which nls_cn degenerates to the bell: modulus one
// gives eta = lambda/2 - c^2/4.
inline double nls_bell_eta(double lambda, double c) { return 0.5 * lambda - 0.25 * c * c; }

inline Profile nls_bell_profile(double lambda) {
  if (!std::isfinite(lambda) || !(lambda > 0)) throw DomainError("nls_bell: lambda must be > 0");
  const double k = std::sqrt(lambda / 2);
  return Profile("nls-bell", {{"lambda", lambda}}, {{"scale", k}},
                 [k](double xi) { return detail::chain(detail::sech_derivs(k * xi), 1.0, k); }, true);
}

inline double nls_bell(double lambda, double xi) {
  if (!std::isfinite(lambda) || !(lambda > 0)) throw DomainError("nls_bell: lambda must be > 0");
  return 1.0 / std::cosh(std::sqrt(lambda / 2) * xi);
}

}  // namespace solitons
