#pragma once

// Named simulation presets and figure data sets with their default grids and
// pass/fail checks. The command-line tool and the acceptance runner both call
// these, so the numbers in a manifest are the numbers that are tested.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "solitons/io.hpp"
#include "solitons/sim.hpp"
#include "solitons/waves.hpp"

namespace solitons {

struct Check {
  std::string name;
  double value;
  double limit;
  bool pass;
};

struct ExperimentResult {
  std::string preset;
  Trajectory trajectory;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<Check> checks{};

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  nlohmann::json checks_json() const {
    auto a = nlohmann::json::array();
    for (const auto& c : checks) a.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", c.pass}});
    return a;
  }
};

namespace detail {

inline Check at_most(std::string name, double v, double limit) { return {std::move(name), v, limit, v <= limit}; }
inline Check near(std::string name, double v, double target, double tol) {
  return {std::move(name), v, tol, std::abs(v - target) <= tol};
}
inline Check positive(std::string name, double v) { return {std::move(name), v, 0.0, v > 0}; }
inline Check negative(std::string name, double v) { return {std::move(name), v, 0.0, v < 0}; }

inline void drift_checks(ExperimentResult& r, double mass_tol, double momentum_tol, double energy_tol) {
  const auto& a = r.trajectory.frames.front().conserved;
  const auto& b = r.trajectory.frames.back().conserved;
  r.checks.push_back(at_most("mass_drift", relative_drift(b.mass, a.mass), mass_tol));
  if (momentum_tol > 0) r.checks.push_back(at_most("momentum_drift", relative_drift(b.momentum, a.momentum), momentum_tol));
  if (energy_tol > 0) r.checks.push_back(at_most("energy_drift", relative_drift(b.energy, a.energy), energy_tol));
}

}  // namespace detail

// KdV soliton c = 1 on [-20, 20), n = 512, dt = 1e-4, t in [0, 5].
inline ExperimentResult run_kdv_soliton(double c = 1.0) {
  const Grid g(-20, 20, 512);
  const KdVSolitonParams p(c);
  Field f{g, std::vector<cplx>(g.n())};
  for (std::size_t i = 0; i < g.n(); ++i) f.u[i] = kdv_soliton(p, g.x(i));
  const SimConfig cfg{pde::KdV{}, g, 1e-4, 5.0, Scheme::SpectralRK4, 0.5};
  ExperimentResult r{"kdv-soliton", integrate(cfg, f)};
  const double speed = measure_speed(r.trajectory);
  const auto peaks = track_peak(r.trajectory);
  const double shift = peaks.back().x - peaks.front().x;
  const double shape = shape_error(g, r.trajectory.frames.back().u, [&](double x) { return kdv_soliton(p, x); },
                                   peaks.back().x);
  r.summary = {{"speed", speed}, {"shift", shift}, {"shape_error", shape}, {"c", c}};
  r.checks.push_back(detail::near("speed", speed, c, 0.01));
  r.checks.push_back(detail::near("shift", shift, c * 5.0, 0.05));
  r.checks.push_back(detail::at_most("shape_error", shape, 1e-3));
  detail::drift_checks(r, 1e-6, 1e-6, 1e-5);
  return r;
}

// Stationary NLS bell sech(x), lambda = 2, eta = 1, on [-20, 20), n = 512.
inline ExperimentResult run_nls_bell() {
  const Grid g(-20, 20, 512);
  const double lambda = 2;
  const auto bell = nls_bell_profile(lambda);
  const NLSParams p(lambda, 0.0, nls_bell_eta(lambda, 0.0));
  Field f{g, std::vector<cplx>(g.n())};
  for (std::size_t i = 0; i < g.n(); ++i) f.u[i] = nls_ansatz(bell, p, g.x(i), 0.0);
  const SimConfig cfg{pde::NLS{lambda}, g, 1e-3, 2.0, Scheme::SplitStep, 0.25};
  ExperimentResult r{"nls-bell", integrate(cfg, f)};
  double shape = 0;
  for (const auto& fr : r.trajectory.frames)
    shape = std::max(shape, shape_error(g, fr.u, [](double x) { return 1 / std::cosh(x); }, 0.0));
  const double speed = measure_speed(r.trajectory);
  r.summary = {{"speed", speed},
               {"shape_error", shape},
               {"max_step_mass_change", r.trajectory.max_step_mass_change},
               {"eta", p.eta()}};
  r.checks.push_back(detail::at_most("shape_error", shape, 1e-3));
  r.checks.push_back(detail::at_most("max_step_mass_change", r.trajectory.max_step_mass_change, 1e-10));
  r.checks.push_back(detail::near("speed", speed, 0.0, 0.01));
  return r;
}

// Kink-antikink pair, c = +-0.5 from x = -+10, on [-40, 40), n = 512,
// dt = 0.9 h, t in [0, 20].
inline ExperimentResult run_sg_kink_pair() {
  const Grid g(-40, 40, 512);
  const SimConfig cfg{pde::SineGordon{}, g, 0.9 * g.h(), 20.0, Scheme::Leapfrog, 0.5};
  ExperimentResult r{"sg-kink-pair", integrate(cfg, sg_kink_pair(g, 0.5, 10.0))};
  const double e0 = r.trajectory.frames.front().conserved.energy;
  double worst = 0;
  for (const auto& f : r.trajectory.frames) worst = std::max(worst, relative_drift(f.conserved.energy, e0));
  r.summary = {{"energy_initial", e0}, {"energy_max_drift", worst}};
  r.checks.push_back(detail::at_most("energy_max_drift", worst, 1e-2));
  return r;
}

// cos^4(x/4) bump on |x| < 2 pi for K(2,2), [-20, 20), n = 512, dt = 2e-4,
// hyperviscosity 1e-2, t in [0, 1].
inline Field compacton_bump(const Grid& g, double amplitude = 1.0) {
  Field f{g, std::vector<cplx>(g.n())};
  for (std::size_t i = 0; i < g.n(); ++i) {
    const double x = g.x(i);
    f.u[i] = std::abs(x) < 2 * std::numbers::pi ? amplitude * std::pow(std::cos(x / 4), 4) : 0.0;
  }
  return f;
}

inline ExperimentResult run_compacton_22() {
  const Grid g(-20, 20, 512);
  SimConfig cfg{pde::RosenauHyman{2, 2}, g, 2e-4, 1.0, Scheme::FiniteDifference, 0.1};
  cfg.hyperviscosity = 1e-2;
  auto run = compacton_run(2, 2, compacton_bump(g), cfg);
  ExperimentResult r{"compacton-22", std::move(run.trajectory)};
  const double widest = *std::max_element(run.support.width.begin(), run.support.width.end());
  r.summary = {{"support_width", run.support.width},
               {"t", run.support.t},
               {"mass", run.support.mass},
               {"max_mass_drift", run.support.max_mass_drift},
               {"window", run.support.window}};
  r.checks.push_back({"support_width", widest, run.support.window, widest < run.support.window});
  r.checks.push_back(detail::at_most("max_mass_drift", run.support.max_mass_drift, 1e-4));
  return r;
}

inline ExperimentResult run_kdv_collision(double c1 = 1.0, double c2 = 0.5, double separation = 48.0) {
  auto rep = collide_kdv(c1, c2, separation);
  ExperimentResult r{"kdv-collision", std::move(rep.trajectory)};
  r.summary = {{"c1", c1},
               {"c2", c2},
               {"separation", separation},
               {"t_end", rep.t_end},
               {"frame_speed", rep.frame_speed},
               {"initial_overlap", rep.initial_overlap},
               {"pre_amplitudes", {rep.pre_amplitude_fast, rep.pre_amplitude_slow}},
               {"post_amplitudes", {rep.post_amplitude_fast, rep.post_amplitude_slow}},
               {"post_speeds", {rep.post_speed_fast, rep.post_speed_slow}},
               {"phase_shifts", {rep.phase_shift_fast, rep.phase_shift_slow}},
               {"mass_drift", rep.mass_drift},
               {"momentum_drift", rep.momentum_drift}};
  r.checks.push_back(detail::near("post_amplitude_fast", rep.post_amplitude_fast, c1 / 2, 0.01 * c1 / 2));
  r.checks.push_back(detail::near("post_amplitude_slow", rep.post_amplitude_slow, c2 / 2, 0.01 * c2 / 2));
  r.checks.push_back(detail::positive("phase_shift_fast", rep.phase_shift_fast));
  r.checks.push_back(detail::negative("phase_shift_slow", rep.phase_shift_slow));
  return r;
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> v = {"kdv-soliton", "kdv-collision", "nls-bell", "sg-kink-pair",
                                             "compacton-22"};
  return v;
}

inline ExperimentResult run_preset(const std::string& name) {
  if (name == "kdv-soliton") return run_kdv_soliton();
  if (name == "kdv-collision") return run_kdv_collision();
  if (name == "nls-bell") return run_nls_bell();
  if (name == "sg-kink-pair") return run_sg_kink_pair();
  if (name == "compacton-22") return run_compacton_22();
  throw ParameterError("unknown preset '" + name + "'");
}

// ---------------------------------------------------------------------------
// Figure data sets.

struct FigureData {
  std::string id;
  std::string description;
  Table table;
};

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n < 2) return {a};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * double(i) / double(n - 1);
  // symmetric ranges hit zero exactly in the middle
  if (n % 2 == 1 && a == -b) v[n / 2] = 0.0;
  return v;
}

// Sine-Gordon kink scale and gmKdV parameters used by the figure presets.
inline constexpr double kFigureGamma = 0.4;
inline constexpr double kFigureAlpha = -2.0;
inline constexpr double kFigureBeta = 2.0;
inline constexpr double kSurfaceSpeed = 1.0;

inline const std::vector<std::string>& profile_figure_ids() {
  static const std::vector<std::string> v = {"1a", "1b", "1c", "2", "4"};
  return v;
}
inline const std::vector<std::string>& surface_figure_ids() {
  static const std::vector<std::string> v = {"3a", "3b", "5a", "5b"};
  return v;
}

inline FigureData profile_figure(const std::string& id) {
  if (id == "1a" || id == "1b" || id == "1c") {
    const double c = id == "1a" ? 0.2 : id == "1b" ? 0.6 : 1.0;
    const KdVSolitonParams kp(c);
    const MKdVWaveParams mp(c);
    FigureData f{id, "KdV soliton and mKdV wave, c = " + format_number(c), {{"xi", "kdv", "mkdv"}, {}}};
    for (double xi : linspace(-20, 20, 401)) f.table.add({xi, kdv_soliton(kp, xi), mkdv_wave(mp, xi)});
    return f;
  }
  if (id == "2") {
    const auto k = SineGordonKinkParams::from_gamma(kFigureGamma, Polarity::Kink);
    const auto a = SineGordonKinkParams::from_gamma(kFigureGamma, Polarity::Antikink);
    FigureData f{id, "sine-Gordon kink and antikink, gamma = 0.4", {{"xi", "kink", "antikink"}, {}}};
    for (double xi : linspace(-20, 20, 401)) f.table.add({xi, sg_kink(k, xi), sg_kink(a, xi)});
    return f;
  }
  if (id == "4") {
    const auto p = gmkdv_kink_profile(kFigureAlpha, kFigureBeta, KinkBranch::Plus);
    FigureData f{id, "gmKdV kink and its negative, alpha = -2, beta = 2", {{"xi", "plus", "minus"}, {}}};
    for (double xi : linspace(-10, 10, 201)) {
      const double v = p.real_at(xi);
      f.table.add({xi, v, -v});
    }
    return f;
  }
  throw ParameterError("unknown profile figure '" + id + "' (expected 1a, 1b, 1c, 2 or 4)");
}

inline Table surface_table(const std::function<double(double)>& profile, double c, double x0, double x1,
                           std::size_t nx, double t0, double t1, std::size_t nt) {
  if (nx < 2 || nt < 1) throw ParameterError("surface: need nx >= 2 and nt >= 1");
  Table t{{"x", "t", "value"}, {}};
  for (double tt : linspace(t0, t1, nt))
    for (double x : linspace(x0, x1, nx)) t.add({x, tt, profile(x - c * tt)});
  return t;
}

inline FigureData surface_figure(const std::string& id) {
  std::function<double(double)> prof;
  std::string what;
  if (id == "3a" || id == "3b") {
    const auto p = SineGordonKinkParams::from_gamma(kFigureGamma, id == "3a" ? Polarity::Kink : Polarity::Antikink);
    prof = [p](double xi) { return sg_kink(p, xi); };
    what = id == "3a" ? "sine-Gordon kink" : "sine-Gordon antikink";
  } else if (id == "5a" || id == "5b") {
    const auto p = gmkdv_kink_profile(kFigureAlpha, kFigureBeta, KinkBranch::Plus);
    const double s = id == "5a" ? 1.0 : -1.0;
    prof = [p, s](double xi) { return s * p.real_at(xi); };
    what = id == "5a" ? "gmKdV kink" : "negative gmKdV kink";
  } else {
    throw ParameterError("unknown surface figure '" + id + "' (expected 3a, 3b, 5a or 5b)");
  }
  return {id, what + " on x in [-10, 10], t in [0, 5], frame speed 1",
          surface_table(prof, kSurfaceSpeed, -10, 10, 41, 0, 5, 11)};
}

}  // namespace solitons
