#pragma once

// The verification matrix: every catalog profile paired with its reduced ODE
// and its PDE.

#include <algorithm>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "solitons/residual.hpp"
#include "solitons/waves.hpp"

namespace solitons {

inline constexpr double kOdeThreshold = 1e-10;
inline constexpr double kPdeThreshold = 1e-6;
inline constexpr double kOrderTarget = 4.0;
inline constexpr double kOrderTolerance = 0.5;

struct VerificationRow {
  std::string label;
  std::string family;
  std::string equation;
  std::string type;  // "ode" or "pde"
  double sup_norm = 0;
  double threshold = 0;
  std::optional<double> order{};
  bool pass = false;
  std::string error{};
  json notes = json::array();
  json diagnostics = json::object();

  json to_json() const {
    json j = {{"label", label}, {"family", family}, {"equation", equation}, {"type", type},
              {"sup_norm", sup_norm}, {"threshold", threshold}, {"pass", pass}, {"notes", notes}};
    j["order"] = order ? json(*order) : json(nullptr);
    if (!error.empty()) j["error"] = error;
    if (!diagnostics.empty()) j["diagnostics"] = diagnostics;
    return j;
  }
};

struct OdeCheck {
  OdeKind kind;
  Window window{-5, 5};
  std::size_t probes = 201;
  double pole_margin = 0.0;
};

struct PdeCheck {
  PdeKind kind;
  // Builds u(x, t) from the (possibly corrupted) profile.
  std::function<SpaceTimeSampler(const Profile&)> field;
  double speed = 0;
  Window window{-10, 10};
  double t = 0.3;
  // Starting resolutions; refined by doubling while the finest residual
  // exceeds the threshold.
  std::vector<std::size_t> resolutions{256, 512, 1024};
  // Optional second kind evaluated for information only.
  std::optional<PdeKind> diagnostic_kind{};
};

struct CatalogEntry {
  std::string label;
  Profile profile;
  std::vector<OdeCheck> odes;
  std::vector<PdeCheck> pdes;
};

namespace detail {

inline std::function<SpaceTimeSampler(const Profile&)> travelling(double c) {
  return [c](const Profile& p) { return SpaceTimeSampler([p, c](double x, double t) { return p(x - c * t); }); };
}

inline std::function<SpaceTimeSampler(const Profile&)> nls_field(const NLSParams& np) {
  return [np](const Profile& p) { return SpaceTimeSampler([p, np](double x, double t) { return nls_ansatz(p, np, x, t); }); };
}

inline const std::vector<std::size_t> kFullWindow{256, 512, 1024};
// Windows squeezed between poles are short; coarser grids keep the third
// difference clear of rounding.
inline const std::vector<std::size_t> kPoleWindow{32, 64, 128};
inline constexpr int kMaxRefinements = 3;

// Window around the travelling centre x = c t, inside the nearest poles.
inline Window inside_poles(const Profile& p, double fraction, double c, double t = 0.3) {
  const double d = fraction * p.pole_distance(0.0);
  return {c * t - d, c * t + d};
}

}  // namespace detail

inline std::vector<CatalogEntry> catalog_entries() {
  std::vector<CatalogEntry> out;
  using detail::travelling;

  {
    const double c = 1.0;
    out.push_back({"kdv-soliton[c=1]", kdv_soliton_profile(KdVSolitonParams(c)), {{ode::KdVReduced{c}}},
                   {{pde::KdV{}, travelling(c), c}}});
  }
  {
    const double c = 1.0;
    out.push_back({"mkdv-wave[c=1]", mkdv_wave_profile(MKdVWaveParams(c)), {{ode::Duffing{c, 2}}},
                   {{pde::MKdV{}, travelling(c), c}}});
  }
  for (auto pol : {Polarity::Kink, Polarity::Antikink}) {
    const double c = 0.5;
    const auto k = SineGordonKinkParams::from_speed(c, pol);
    const double g = k.gamma();
    out.push_back({std::string(pol == Polarity::Kink ? "sg-kink" : "sg-antikink") + "[c=0.5]", sg_kink_profile(k),
                   {{ode::SineGordonReduced{g}}, {ode::SineGordonFirstIntegral{g, g * g}}},
                   {{pde::SineGordon{}, travelling(c), c}}});
  }
  {
    const auto k = SineGordonKinkParams::from_gamma(0.4, Polarity::Kink);
    out.push_back({"sg-kink[gamma=0.4]", sg_kink_profile(k),
                   {{ode::SineGordonReduced{0.4}}, {ode::SineGordonFirstIntegral{0.4, 0.16}}}, {}});
  }
  {
    const GmkdvParams p(6, 1, 0.8);
    out.push_back({"gmkdv-sn[alpha=6,beta=1,c=0.8]", gmkdv_sn_profile(p), {{ode::Duffing{p.a(), p.b()}}},
                   {{pde::GmKdV{p.alpha(), p.beta()}, travelling(p.c()), p.c()}}});
  }
  {
    const GmkdvParams p(-6, 1, 3);
    const Profile f = gmkdv_sn_profile(p);
    out.push_back({"gmkdv-sn[alpha=-6,beta=1,c=3]", f, {{ode::Duffing{p.a(), p.b()}, {-5, 5}, 201, 0.05}},
                   {{pde::GmKdV{p.alpha(), p.beta()}, travelling(p.c()), p.c(), detail::inside_poles(f, 0.4, p.c()), 0.3,
                     detail::kPoleWindow}}});
  }
  {
    const auto s = gmkdv_constraint_speed(-2, 2);
    const GmkdvParams plus(-2, 2, s.c_minus), minus(-2, 2, s.c_plus);
    out.push_back({"gmkdv-kink[alpha=-2,beta=2]", gmkdv_kink_profile(-2, 2, KinkBranch::Plus),
                   {{ode::Duffing{plus.a(), plus.b()}}}, {{pde::GmKdV{-2, 2}, travelling(plus.c()), plus.c()}}});
    const Profile t = gmkdv_kink_profile(-2, 2, KinkBranch::Minus);
    out.push_back({"gmkdv-tan[alpha=-2,beta=2]", t, {{ode::Duffing{minus.a(), minus.b()}, {-5, 5}, 201, 0.05}},
                   {{pde::GmKdV{-2, 2}, travelling(minus.c()), minus.c(), detail::inside_poles(t, 0.4, minus.c()), 0.3,
                     detail::kPoleWindow}}});
  }
  {
    const GmkdvParams p(9, 1, 1);
    out.push_back({"mkdv-cn[a=1,b=3]", mkdv_cn_profile(p), {{ode::Duffing{p.a(), p.b()}}},
                   {{pde::GmKdV{p.alpha(), p.beta()}, travelling(p.c()), p.c()}}});
  }
  {
    const double c = 2, beta = 0.5, alpha = 6 * c;
    const GmkdvParams p(alpha, beta, c);
    out.push_back({"mkdv-bell[c=2,beta=0.5]", mkdv_bell_profile(c, beta), {{ode::Duffing{p.a(), p.b()}}},
                   {{pde::GmKdV{alpha, beta}, travelling(c), c}}});
  }
  {
    const double lambda = 2;
    const auto e = nls_eta_constraint(lambda, 0);
    for (const NLSParams& np : {NLSParams(lambda, 0, e.eta_1), NLSParams(lambda, 2, 3)}) {
      const Profile nu = nls_sn_profile(np);
      std::ostringstream label;
      label << "nls-sn[lambda=" << np.lambda() << ",c=" << np.c() << ",eta=" << np.eta() << "]";
      const Window w = nu.poles() ? detail::inside_poles(nu, 0.4, np.c()) : Window{-10, 10};
      const auto& res = nu.poles() ? detail::kPoleWindow : detail::kFullWindow;
      out.push_back({label.str(), nu, {{ode::DuffingNls{np.lambda(), np.eta(), np.c()}, {-5, 5}, 201, 0.05}},
                     {{pde::NLS{lambda}, detail::nls_field(np), np.c(), w, 0.3, res, pde::NLS{-lambda}}}});
    }
    const NLSParams k1(lambda, 0, e.eta_1), k2(lambda, 0, e.eta_2);
    out.push_back({"nls-kink[lambda=2]", nls_kink_profile(lambda, NlsBranch::One),
                   {{ode::DuffingNls{lambda, e.eta_1, 0}}},
                   {{pde::NLS{lambda}, detail::nls_field(k1), 0, {-10, 10}, 0.3, detail::kFullWindow, pde::NLS{-lambda}}}});
    const Profile t = nls_kink_profile(lambda, NlsBranch::Two);
    out.push_back({"nls-tan[lambda=2]", t, {{ode::DuffingNls{lambda, e.eta_2, 0}, {-5, 5}, 201, 0.05}},
                   {{pde::NLS{lambda}, detail::nls_field(k2), 0, detail::inside_poles(t, 0.4, 0.0), 0.3, detail::kPoleWindow,
                     pde::NLS{-lambda}}}});
  }
  {
    const NLSParams rest(2, 0, -1), moving(3, 0.6, 0.2);
    out.push_back({"nls-cn[lambda=2,eta=-1,c=0]", nls_cn_profile(2, -1, 0), {{ode::DuffingNls{2, -1, 0}}},
                   {{pde::NLS{2}, detail::nls_field(rest), 0}}});
    out.push_back({"nls-cn[lambda=3,eta=0.2,c=0.6]", nls_cn_profile(3, 0.2, 0.6), {{ode::DuffingNls{3, 0.2, 0.6}}},
                   {{pde::NLS{3}, detail::nls_field(moving), 0.6}}});
    const NLSParams bell(2, 0, nls_bell_eta(2, 0));
    out.push_back({"nls-bell[lambda=2]", nls_bell_profile(2), {{ode::DuffingNls{2, bell.eta(), 0}}},
                   {{pde::NLS{2}, detail::nls_field(bell), 0}}});
  }
  out.push_back({"duffing-cn[k1=1,k3=1,q0=1]", duffing_cn_profile(1, 1, 1), {{ode::DuffingCubic{1, 1}}}, {}});
  return out;
}

namespace detail {

inline json notes_json(const Profile& p) { return p.descriptor()["notes"]; }

inline VerificationRow run_ode(const CatalogEntry& e, const Profile& p, const OdeCheck& c) {
  VerificationRow r{e.label, p.family(), ode_name(c.kind), "ode"};
  r.threshold = kOdeThreshold;
  r.notes = notes_json(p);
  try {
    const auto rep = ode_residual(c.kind, p, c.window, c.probes, c.pole_margin);
    r.sup_norm = rep.sup_norm;
    r.pass = rep.sup_norm <= r.threshold;
    if (rep.skipped) r.diagnostics["probes_skipped_near_poles"] = rep.skipped;
  } catch (const Error& ex) {
    r.error = ex.what();
  }
  return r;
}

inline std::vector<double> poles_at(const Profile& p, double c, Window w, double t) {
  std::vector<double> out;
  for (double xi : p.poles_in(w.lo - c * t - 1, w.hi - c * t + 1)) out.push_back(xi + c * t);
  return out;
}

inline VerificationRow run_pde(const CatalogEntry& e, const Profile& p, const PdeCheck& c) {
  VerificationRow r{e.label, p.family(), pde_name(c.kind), "pde"};
  r.threshold = kPdeThreshold;
  r.notes = notes_json(p);
  try {
    const auto u = c.field(p);
    const auto poles = poles_at(p, c.speed, c.window, c.t);
    auto res = c.resolutions;
    auto rep = pde_residual(c.kind, u, c.window, c.t, res, poles);
    for (int k = 0; k < detail::kMaxRefinements && rep.sup_norm() > r.threshold; ++k) {
      for (auto& n : res) n *= 2;
      rep = pde_residual(c.kind, u, c.window, c.t, res, poles);
    }
    r.diagnostics["resolutions"] = res;
    r.sup_norm = rep.sup_norm();
    r.order = rep.order;
    r.pass = rep.sup_norm() <= r.threshold && rep.order &&
             std::abs(*rep.order - kOrderTarget) <= kOrderTolerance;
    r.diagnostics["window"] = {c.window.lo, c.window.hi};
    r.diagnostics["sup_by_resolution"] = rep.sup;
    if (c.diagnostic_kind) {
      const auto alt = pde_residual(*c.diagnostic_kind, u, c.window, c.t, res, poles);
      const auto& nls = std::get<pde::NLS>(*c.diagnostic_kind);
      r.diagnostics["sup_norm_with_lambda"] = {{"lambda", nls.lambda}, {"sup_norm", alt.sup_norm()}};
    }
  } catch (const Error& ex) {
    r.error = ex.what();
  }
  return r;
}

inline bool matches(const std::string& scope, const CatalogEntry& e) {
  if (scope == "all") return true;
  if (e.profile.family() == scope) return true;
  for (const auto& c : e.pdes)
    if (pde_name(c.kind) == scope) return true;
  for (const auto& c : e.odes)
    if (ode_name(c.kind) == scope) return true;
  return false;
}

}  // namespace detail

// Rows for every catalog pairing selected by `scope`: "all", a family name
// (an entry's profile family), or an equation name (only rows using that
// equation). `amplitude_scale` corrupts every profile and exists so callers
// can confirm that failures are detected.
inline std::vector<VerificationRow> verify_catalog(const std::string& scope = "all", double amplitude_scale = 1.0) {
  const auto entries = catalog_entries();
  std::vector<std::future<std::vector<VerificationRow>>> jobs;
  bool is_equation = false;
  for (const auto& e : entries) {
    for (const auto& c : e.pdes) is_equation |= pde_name(c.kind) == scope;
    for (const auto& c : e.odes) is_equation |= ode_name(c.kind) == scope;
  }
  for (const auto& e : entries) {
    if (!detail::matches(scope, e)) continue;
    jobs.push_back(std::async(std::launch::async, [&e, amplitude_scale, scope, is_equation] {
      const Profile p = amplitude_scale == 1.0 ? e.profile : e.profile.scaled(amplitude_scale);
      const bool by_family = e.profile.family() == scope;
      std::vector<VerificationRow> rows;
      for (const auto& c : e.odes)
        if (scope == "all" || by_family || !is_equation || ode_name(c.kind) == scope)
          rows.push_back(detail::run_ode(e, p, c));
      for (const auto& c : e.pdes)
        if (scope == "all" || by_family || !is_equation || pde_name(c.kind) == scope)
          rows.push_back(detail::run_pde(e, p, c));
      return rows;
    }));
  }
  std::vector<VerificationRow> rows;
  for (auto& j : jobs)
    for (auto& r : j.get()) rows.push_back(std::move(r));
  std::stable_sort(rows.begin(), rows.end(), [](const VerificationRow& a, const VerificationRow& b) {
    return std::tie(a.family, a.label, a.type, a.equation) < std::tie(b.family, b.label, b.type, b.equation);
  });
  return rows;
}

}  // namespace solitons
