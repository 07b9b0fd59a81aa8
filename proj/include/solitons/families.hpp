#pragma once

// Builds catalog profiles from a family name and a JSON parameter object, the
// common entry point of the command-line tool and simulation config files.

#include <optional>
#include <string>
#include <vector>

#include "solitons/waves.hpp"

namespace solitons {

struct NamedProfile {
  Profile profile;
  // Speed of the travelling frame, when the family has one.
  std::optional<double> speed;
  // NLS families carry the carrier parameters for the envelope ansatz.
  std::optional<NLSParams> nls;
};

inline const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names = {"kdv",       "mkdv",      "sg-kink",   "gmkdv-sn", "gmkdv-kink",
                                                 "nls-sn",    "nls-kink",  "mkdv-cn",   "mkdv-bell", "nls-cn",
                                                 "nls-bell",  "duffing-cn"};
  return names;
}

namespace detail {

inline double param(const json& p, const std::string& key) {
  if (!p.contains(key)) throw ParameterError("missing parameter '" + key + "'");
  if (!p[key].is_number()) throw ParameterError("parameter '" + key + "' must be a number");
  return p[key].get<double>();
}

inline double param_or(const json& p, const std::string& key, double fallback) {
  return p.contains(key) ? param(p, key) : fallback;
}

inline void only_keys(const json& p, std::initializer_list<const char*> keys, const std::string& family) {
  for (auto it = p.begin(); it != p.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) throw ParameterError("family " + family + " does not take parameter '" + it.key() + "'");
  }
}

inline int sign_param(const json& p, const std::string& key, int fallback) {
  if (!p.contains(key)) return fallback;
  const auto& v = p[key];
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "+" || s == "+1" || s == "1") return +1;
    if (s == "-" || s == "-1") return -1;
  } else if (v.is_number()) {
    const double d = v.get<double>();
    if (d == 1) return +1;
    if (d == -1) return -1;
  }
  throw ParameterError("parameter '" + key + "' must be +1 or -1");
}

}  // namespace detail

inline NamedProfile make_profile(const std::string& family, const json& p) {
  using detail::param;
  using detail::param_or;
  using detail::only_keys;
  if (!p.is_object()) throw ParameterError("parameters must be a JSON object");
  if (family == "kdv") {
    only_keys(p, {"c"}, family);
    const double c = param(p, "c");
    return {kdv_soliton_profile(KdVSolitonParams(c)), c, std::nullopt};
  }
  if (family == "mkdv") {
    only_keys(p, {"c"}, family);
    const double c = param(p, "c");
    return {mkdv_wave_profile(MKdVWaveParams(c)), c, std::nullopt};
  }
  if (family == "sg-kink" || family == "sg-antikink") {
    only_keys(p, {"gamma", "c", "polarity"}, family);
    const int fallback = family == "sg-kink" ? +1 : -1;
    const auto pol = detail::sign_param(p, "polarity", fallback) > 0 ? Polarity::Kink : Polarity::Antikink;
    if (p.contains("gamma") && p.contains("c")) throw ParameterError("sine-Gordon kink: give gamma or c, not both");
    if (p.contains("c")) {
      const double c = param(p, "c");
      return {sg_kink_profile(SineGordonKinkParams::from_speed(c, pol)), c, std::nullopt};
    }
    return {sg_kink_profile(SineGordonKinkParams::from_gamma(param(p, "gamma"), pol)), std::nullopt, std::nullopt};
  }
  if (family == "gmkdv-sn") {
    only_keys(p, {"alpha", "beta", "c"}, family);
    const GmkdvParams g(param(p, "alpha"), param(p, "beta"), param(p, "c"));
    return {gmkdv_sn_profile(g), g.c(), std::nullopt};
  }
  if (family == "gmkdv-kink") {
    only_keys(p, {"alpha", "beta", "branch"}, family);
    const double a = param(p, "alpha"), b = param(p, "beta");
    const auto br = detail::sign_param(p, "branch", +1) > 0 ? KinkBranch::Plus : KinkBranch::Minus;
    const auto prof = gmkdv_kink_profile(a, b, br);
    return {prof, prof.derived().at("c").get<double>(), std::nullopt};
  }
  if (family == "nls-sn") {
    only_keys(p, {"lambda", "c", "eta"}, family);
    const NLSParams n(param(p, "lambda"), param(p, "c"), param(p, "eta"));
    return {nls_sn_profile(n), n.c(), n};
  }
  if (family == "nls-kink") {
    only_keys(p, {"lambda", "branch"}, family);
    const double lambda = param(p, "lambda");
    const double b = param_or(p, "branch", 1);
    if (b != 1 && b != 2) throw ParameterError("nls-kink: branch must be 1 or 2");
    const auto br = b == 1 ? NlsBranch::One : NlsBranch::Two;
    const auto eta = nls_eta_constraint(lambda, 0.0);
    return {nls_kink_profile(lambda, br), 0.0, NLSParams(lambda, 0.0, br == NlsBranch::One ? eta.eta_1 : eta.eta_2)};
  }
  if (family == "mkdv-cn") {
    only_keys(p, {"alpha", "beta", "c"}, family);
    const GmkdvParams g(param(p, "alpha"), param(p, "beta"), param(p, "c"));
    return {mkdv_cn_profile(g), g.c(), std::nullopt};
  }
  if (family == "mkdv-bell") {
    only_keys(p, {"c", "beta"}, family);
    const double c = param(p, "c");
    return {mkdv_bell_profile(c, param_or(p, "beta", 1.0)), c, std::nullopt};
  }
  if (family == "nls-cn") {
    only_keys(p, {"lambda", "beta", "c"}, family);
    const double lambda = param(p, "lambda"), beta = param(p, "beta"), c = param(p, "c");
    return {nls_cn_profile(lambda, beta, c), c, NLSParams(lambda, c, beta)};
  }
  if (family == "nls-bell") {
    only_keys(p, {"lambda", "c"}, family);
    const double lambda = param(p, "lambda"), c = param_or(p, "c", 0.0);
    return {nls_bell_profile(lambda), c, NLSParams(lambda, c, nls_bell_eta(lambda, c))};
  }
  if (family == "duffing-cn") {
    only_keys(p, {"kappa1", "kappa3", "q0"}, family);
    return {duffing_cn_profile(param(p, "kappa1"), param(p, "kappa3"), param(p, "q0")), std::nullopt, std::nullopt};
  }
  throw ParameterError("unknown family '" + family + "'");
}

}  // namespace solitons
