#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "solitons/solitons.hpp"

using namespace solitons;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kOther = 1, kParameter = 2, kVerification = 3, kBlowUp = 4 };

struct Output {
  std::string dir;
  std::string format = "csv";

  bool to_dir() const { return !dir.empty(); }

  // Writes `content` as DIR/name, or to stdout without --out.
  void emit(RunManifest& m, const std::string& name, const std::string& content) const {
    if (!to_dir()) {
      std::cout << content;
      return;
    }
    fs::create_directories(dir);
    const fs::path p = fs::path(dir) / name;
    write_file(p, content);
    m.outputs.push_back(p.string());
  }

  // The manifest goes to DIR/manifest.json, or to stderr without --out.
  void finish(const RunManifest& m, bool to_stdout = false) const {
    const std::string text = m.to_json().dump(2) + "\n";
    if (to_dir()) {
      write_file(fs::path(dir) / "manifest.json", text);
      if (to_stdout) std::cout << text;
    } else {
      (to_stdout ? std::cout : std::cerr) << text;
    }
  }

  std::string table(const Table& t) const {
    std::ostringstream os;
    if (format == "json")
      os << table_json(t).dump(2) << "\n";
    else
      write_csv(os, t);
    return os.str();
  }
  std::string extension() const { return format == "json" ? ".json" : ".csv"; }
};

// Family parameters given as named flags and/or repeated --param key=value.
struct ParamFlags {
  std::map<std::string, double> numbers;
  std::map<std::string, std::string> signs;
  std::vector<std::string> extra;
  std::map<std::string, CLI::Option*> opts;

  void attach(CLI::App* app) {
    for (const char* k : {"c", "gamma", "alpha", "beta", "lambda", "eta", "kappa1", "kappa3", "q0"})
      opts[k] = app->add_option(std::string("--") + k, numbers[k], std::string("family parameter ") + k);
    for (const char* k : {"polarity", "branch"})
      opts[k] = app->add_option(std::string("--") + k, signs[k], std::string("family parameter ") + k + " (+1/-1, or 1/2)");
    app->add_option("--param", extra, "extra parameter as key=value");
  }

  json to_json() const {
    json p = json::object();
    for (const auto& [k, v] : numbers)
      if (opts.at(k)->count()) p[k] = v;
    for (const auto& [k, v] : signs)
      if (opts.at(k)->count()) {
        try {
          std::size_t used = 0;
          const double d = std::stod(v, &used);
          if (used != v.size()) throw std::invalid_argument(v);
          p[k] = d;
        } catch (const std::logic_error&) {
          p[k] = v;
        }
      }
    for (const auto& kv : extra) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ParameterError("--param expects key=value, got '" + kv + "'");
      const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
      try {
        p[key] = std::stod(val);
      } catch (const std::logic_error&) {
        throw ParameterError("--param " + key + ": '" + val + "' is not a number");
      }
    }
    return p;
  }
};

std::vector<double> samples(const std::vector<double>& range, std::size_t n) {
  if (range.size() != 2 || !(range[1] > range[0])) throw ParameterError("range must be LO HI with LO < HI");
  if (n < 1) throw ParameterError("need at least one sample");
  if (n == 1) return {0.5 * (range[0] + range[1])};
  return linspace(range[0], range[1], n);
}

// ---------------------------------------------------------------------------

struct ProfileCmd {
  std::string family;
  std::string figure;
  std::vector<double> range{-10, 10};
  std::size_t n = 201;
  ParamFlags params;
};

int run_profile(const ProfileCmd& c, const Output& out) {
  RunManifest m{"profile"};
  if (!c.figure.empty()) {
    if (!c.family.empty()) throw ParameterError("profile: give a family or --figure, not both");
    const auto fig = profile_figure(c.figure);
    m.parameters = {{"figure", fig.id}, {"description", fig.description}};
    m.summary = {{"rows", fig.table.rows.size()}, {"columns", fig.table.header}};
    out.emit(m, "figure_" + fig.id + out.extension(), out.table(fig.table));
    out.finish(m);
    return kOk;
  }
  if (c.family.empty()) throw ParameterError("profile: a family or --figure is required");
  const json p = c.params.to_json();
  const auto np = make_profile(c.family, p);
  const bool real = np.profile.real_valued();
  Table t{real ? std::vector<std::string>{"xi", "value"} : std::vector<std::string>{"xi", "value", "imag"}, {}};
  for (double xi : samples(c.range, c.n)) {
    const cplx v = np.profile(xi);
    if (real)
      t.add({xi, v.real()});
    else
      t.add({xi, v.real(), v.imag()});
  }
  m.parameters = {{"family", c.family}, {"parameters", p}, {"range", c.range}, {"n", c.n}};
  m.summary = {{"rows", t.rows.size()}, {"profile", np.profile.descriptor()}};
  out.emit(m, "profile_" + np.profile.family() + out.extension(), out.table(t));
  out.finish(m);
  return kOk;
}

struct SurfaceCmd {
  std::string family;
  std::string figure;
  std::vector<double> x_range{-10, 10};
  std::vector<double> t_range{0, 5};
  std::size_t nx = 41, nt = 11;
  std::optional<double> speed;
  ParamFlags params;
};

int run_surface(const SurfaceCmd& c, const Output& out) {
  RunManifest m{"surface"};
  if (!c.figure.empty()) {
    if (!c.family.empty()) throw ParameterError("surface: give a family or --figure, not both");
    const auto fig = surface_figure(c.figure);
    m.parameters = {{"figure", fig.id}, {"description", fig.description}};
    m.summary = {{"rows", fig.table.rows.size()}};
    out.emit(m, "surface_" + fig.id + out.extension(), out.table(fig.table));
    out.finish(m);
    return kOk;
  }
  if (c.family.empty()) throw ParameterError("surface: a family or --figure is required");
  const json p = c.params.to_json();
  const auto np = make_profile(c.family, p);
  const auto speed = c.speed ? c.speed : np.speed;
  if (!speed) throw ParameterError("surface: family " + c.family + " has no wave speed here; pass --speed");
  const bool real = np.profile.real_valued();
  Table t{real ? std::vector<std::string>{"x", "t", "value"} : std::vector<std::string>{"x", "t", "value", "imag"}, {}};
  for (double tt : samples(c.t_range, c.nt))
    for (double x : samples(c.x_range, c.nx)) {
      const cplx v = np.profile(x - *speed * tt);
      if (real)
        t.add({x, tt, v.real()});
      else
        t.add({x, tt, v.real(), v.imag()});
    }
  m.parameters = {{"family", c.family}, {"parameters", p}, {"x_range", c.x_range}, {"t_range", c.t_range},
                  {"nx", c.nx},         {"nt", c.nt},       {"speed", *speed}};
  m.summary = {{"rows", t.rows.size()}, {"profile", np.profile.descriptor()}};
  out.emit(m, "surface_" + np.profile.family() + out.extension(), out.table(t));
  out.finish(m);
  return kOk;
}

struct VerifyCmd {
  std::string scope = "all";
  double amplitude_scale = 1.0;
};

int run_verify(const VerifyCmd& c, const Output& out) {
  const auto rows = verify_catalog(c.scope, c.amplitude_scale);
  if (rows.empty()) throw ParameterError("verify: nothing matches scope '" + c.scope + "'");
  json matrix = json::array();
  std::size_t passed = 0;
  for (const auto& r : rows) {
    matrix.push_back(r.to_json());
    passed += r.pass ? 1 : 0;
  }
  RunManifest m{"verify"};
  m.parameters = {{"scope", c.scope}, {"amplitude_scale", c.amplitude_scale}};
  m.pass = passed == rows.size();
  m.summary = {{"rows", rows.size()}, {"passed", passed}, {"failed", rows.size() - passed}};
  json doc = {{"scope", c.scope}, {"pass", m.pass}, {"rows", matrix}};
  out.emit(m, "verify.json", doc.dump(2) + "\n");
  out.finish(m);
  return m.pass ? kOk : kVerification;
}

// ---------------------------------------------------------------------------

PdeKind pde_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ParameterError("config: pde needs a kind");
  const auto k = j.at("kind").get<std::string>();
  auto num = [&](const char* key) { return detail::param(j, key); };
  PdeKind kind;
  if (k == "transport") kind = pde::Transport{num("c")};
  else if (k == "kdv") kind = pde::KdV{};
  else if (k == "mkdv") kind = pde::MKdV{};
  else if (k == "gmkdv") kind = pde::GmKdV{num("alpha"), num("beta")};
  else if (k == "nls") kind = pde::NLS{num("lambda")};
  else if (k == "sine-gordon") kind = pde::SineGordon{};
  else if (k == "rosenau-hyman") kind = pde::RosenauHyman{num("m"), num("n")};
  else throw ParameterError("config: unknown pde kind '" + k + "'");
  validate(kind);
  return kind;
}

Field initial_from_json(const json& j, const Grid& g, const PdeKind& kind) {
  if (!j.is_object() || !j.contains("family")) throw ParameterError("config: initial needs a family");
  const auto fam = j.at("family").get<std::string>();
  const double x0 = detail::param_or(j, "x0", 0.0);
  if (fam == "sg-kink-pair") return sg_kink_pair(g, detail::param(j, "c"), detail::param_or(j, "x0", 10.0));
  if (fam == "bump") {
    Field f = compacton_bump(g, detail::param_or(j, "amplitude", 1.0));
    if (x0 != 0) throw ParameterError("config: the bump is centred at 0");
    return f;
  }
  const auto np = make_profile(fam, j.value("parameters", json::object()));
  const bool nls = std::holds_alternative<pde::NLS>(kind);
  Field f{g, std::vector<cplx>(g.n())};
  for (std::size_t i = 0; i < g.n(); ++i) {
    const double x = g.x(i) - x0;
    if (nls && np.nls)
      f.u[i] = nls_ansatz(np.profile, *np.nls, x, 0.0);
    else
      f.u[i] = nls ? np.profile(x) : cplx(np.profile.real_at(x));
  }
  if (std::holds_alternative<pde::SineGordon>(kind)) {
    // Travelling initial velocity U_t = -c U_x.
    const double c = np.speed.value_or(0.0);
    f.ut.assign(g.n(), 0.0);
    for (std::size_t i = 0; i < g.n(); ++i) f.ut[i] = -c * np.profile.jet(g.x(i) - x0).d[1].real();
  }
  return f;
}

ExperimentResult run_config(const json& j) {
  const PdeKind kind = pde_from_json(j.at("pde"));
  const auto& gj = j.at("grid");
  const Grid g(detail::param(gj, "x_min"), detail::param(gj, "x_max"), std::size_t(detail::param(gj, "n")));
  const Scheme scheme = j.contains("scheme") ? scheme_from_name(j.at("scheme").get<std::string>()) : default_scheme(kind);
  SimConfig cfg{kind,
                g,
                detail::param(j, "dt"),
                detail::param(j, "t_end"),
                scheme,
                detail::param_or(j, "cadence", detail::param(j, "t_end") / 10),
                detail::param_or(j, "frame_speed", 0.0),
                detail::param_or(j, "hyperviscosity", 0.0)};
  if (j.contains("check_stability")) cfg.check_stability = j.at("check_stability").get<bool>();
  ExperimentResult r{"config", integrate(cfg, initial_from_json(j.at("initial"), g, kind))};
  try {
    r.summary["speed"] = measure_speed(r.trajectory);
  } catch (const AmbiguityError& e) {
    r.summary["speed"] = nullptr;
    r.summary["speed_error"] = e.what();
  }
  return r;
}

struct SimulateCmd {
  std::string preset;
  std::string config;
  std::size_t every = 1;
};

int run_simulate(const SimulateCmd& c, const Output& out) {
  if (c.preset.empty() == c.config.empty()) throw ParameterError("simulate: give a preset or --config, not both");
  if (c.every < 1) throw ParameterError("simulate: --every must be >= 1");
  RunManifest m{"simulate"};
  std::optional<ExperimentResult> res;
  json cfg_json;
  if (!c.config.empty()) {
    std::ifstream f(c.config);
    if (!f) throw ParameterError("simulate: cannot read " + c.config);
    try {
      cfg_json = json::parse(f);
    } catch (const json::exception& e) {
      throw ParameterError(std::string("simulate: bad config: ") + e.what());
    }
    res = run_config(cfg_json);
    m.parameters = {{"config", cfg_json}};
  } else {
    res = run_preset(c.preset);
    m.parameters = {{"preset", c.preset}};
  }
  const ExperimentResult& r = *res;
  m.pass = r.pass();
  m.summary = r.summary;
  m.summary["config"] = config_json(r.trajectory.config);
  m.summary["conserved"] = conserved_series(r.trajectory);
  m.summary["checks"] = r.checks_json();
  m.summary["steps"] = r.trajectory.steps;
  if (out.to_dir()) {
    Trajectory kept{r.trajectory.config, {}, r.trajectory.max_step_mass_change, r.trajectory.steps};
    for (std::size_t k = 0; k < r.trajectory.frames.size(); ++k)
      if (k % c.every == 0 || k + 1 == r.trajectory.frames.size()) kept.frames.push_back(r.trajectory.frames[k]);
    for (const auto& p : write_trajectory(fs::path(out.dir) / "frames", kept)) m.outputs.push_back(p.string());
    json times = json::array();
    for (const auto& f : kept.frames) times.push_back(f.t);
    m.summary["frame_times"] = times;
  }
  out.finish(m, true);
  return m.pass ? kOk : kVerification;
}

// ---------------------------------------------------------------------------

struct EllipticCmd {
  std::string function;
  std::vector<double> args;
};

int run_elliptic(const EllipticCmd& c, const Output& out) {
  auto need = [&](std::size_t n, const char* usage) {
    if (c.args.size() != n) throw ParameterError(std::string("elliptic: usage ") + usage);
  };
  double v = 0;
  if (c.function == "sn" || c.function == "cn" || c.function == "dn") {
    need(2, "sn|cn|dn U M");
    const auto e = elliptic::jacobi_sn_cn_dn(c.args[0], c.args[1]);
    v = c.function == "sn" ? e.sn : c.function == "cn" ? e.cn : e.dn;
  } else if (c.function == "K") {
    need(1, "K M");
    v = elliptic::complete_K(c.args[0]);
  } else if (c.function == "F") {
    need(2, "F PHI M");
    v = elliptic::incomplete_F(c.args[0], c.args[1]);
  } else {
    throw ParameterError("elliptic: unknown function '" + c.function + "' (sn, cn, dn, K, F)");
  }
  RunManifest m{"elliptic"};
  m.parameters = {{"function", c.function}, {"args", c.args}};
  m.summary = {{"value", v}};
  out.emit(m, "elliptic.txt", format_fixed(v, 15) + "\n");
  out.finish(m);
  return kOk;
}

// ---------------------------------------------------------------------------

struct TransformCmd {
  std::string op;
  std::string field = "tanh";
  std::string psi = "cosh";
  bool complex = false;
  std::vector<double> range{-10, 10};
  std::size_t n = 201;
};

FieldFunction named_field(const Grid& g, const std::string& name) {
  if (name == "tanh")
    return FieldFunction::analytic(g, [](double x) {
      const double t = std::tanh(x), s2 = 1 - t * t;
      return Jet{{t, s2, -2 * t * s2, -2 * s2 * (s2 - 2 * t * t)}};
    });
  if (name == "sech")
    return FieldFunction::analytic(g, [](double x) {
      const double s = 1 / std::cosh(x), t = std::tanh(x);
      return Jet{{s, -s * t, s * (1 - 2 * s * s), s * t * (6 * s * s - 1)}};
    });
  if (name == "cosh")
    return FieldFunction::analytic(g, [](double x) {
      const double ch = std::cosh(x), sh = std::sinh(x);
      return Jet{{ch, sh, ch, sh}};
    });
  throw ParameterError("transform: unknown field '" + name + "' (tanh, sech, cosh)");
}

int run_transform(const TransformCmd& c, const Output& out) {
  if (c.range.size() != 2 || !(c.range[1] > c.range[0])) throw ParameterError("range must be LO HI with LO < HI");
  if (c.n < 16) throw ParameterError("transform: need n >= 16");
  const Grid g(c.range[0], c.range[1], c.n);
  RunManifest m{"transform"};
  m.parameters = {{"op", c.op}, {"range", c.range}, {"n", c.n}};
  if (c.op == "schrodinger") {
    const auto psi = named_field(g, c.psi);
    const auto V = miura(named_field(g, c.field));
    const auto rep = schrodinger_residual(psi, V);
    m.parameters["psi"] = c.psi;
    m.parameters["phi"] = c.field;
    m.summary = {{"sup_norm", rep.sup_norm()}, {"l2_norm", rep.l2_norm()}};
    out.emit(m, "schrodinger.json", m.summary.dump(2) + "\n");
    out.finish(m);
    return kOk;
  }
  FieldFunction result = [&] {
    if (c.op == "miura") return c.complex ? miura_complex(named_field(g, c.field)) : miura(named_field(g, c.field));
    if (c.op == "cole-hopf") return cole_hopf(named_field(g, c.field));
    throw ParameterError("transform: unknown operation '" + c.op + "' (miura, cole-hopf, schrodinger)");
  }();
  m.parameters["field"] = c.field;
  m.parameters["complex"] = c.complex;
  const auto v = result.values();
  Table t{{"x", "re", "im"}, {}};
  for (std::size_t i = 0; i < g.n(); ++i) t.add({g.x(i), v[i].real(), v[i].imag()});
  m.summary = {{"rows", t.rows.size()}};
  out.emit(m, c.op + out.extension(), out.table(t));
  out.finish(m);
  return kOk;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Travelling waves of KdV-type equations: closed-form catalog, residual verification, transforms and "
               "simulations.\nExit codes: 0 ok, 1 other error, 2 invalid parameters or domain, 3 verification failure "
               "or incomplete collision, 4 numerical blow-up."};
  app.set_version_flag("--version", std::string("solitons ") + kVersion);
  Output out;
  bool seedless = false;
  app.add_option("--out", out.dir, "write files into DIR (manifest.json included)");
  app.add_option("--format", out.format, "table format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--seedless", seedless, "reserved; nothing here uses random numbers, so the flag is rejected");
  app.require_subcommand(1);
  app.fallthrough();

  ProfileCmd pc;
  auto* profile = app.add_subcommand("profile", "tabulate a profile f(xi) as CSV (xi, value[, imag])");
  profile->add_option("family", pc.family, "family: " + join(family_names()));
  profile->add_option("--figure", pc.figure,
                      "figure data set: 1a/1b/1c KdV soliton and mKdV wave for c = 0.2/0.6/1.0; 2 sine-Gordon "
                      "kink and antikink for gamma = 0.4; 4 gmKdV kink and its negative for alpha = -2, beta = 2");
  profile->add_option("--range", pc.range, "xi range LO HI")->expected(2);
  profile->add_option("--n", pc.n, "number of samples");
  pc.params.attach(profile);

  SurfaceCmd sc;
  double speed = 0;
  auto* surface = app.add_subcommand("surface", "tabulate u(x, t) = f(x - c t) as CSV (x, t, value)");
  surface->add_option("family", sc.family, "family: " + join(family_names()));
  surface->add_option("--figure", sc.figure,
                      "figure data set, frame speed 1: 3a/3b sine-Gordon kink/antikink for gamma = 0.4; 5a/5b gmKdV "
                      "kink and its negative for alpha = -2, beta = 2");
  surface->add_option("--x-range", sc.x_range, "x range LO HI")->expected(2);
  surface->add_option("--t-range", sc.t_range, "t range LO HI")->expected(2);
  surface->add_option("--nx", sc.nx, "samples in x");
  surface->add_option("--nt", sc.nt, "samples in t");
  auto* speed_opt = surface->add_option("--speed", speed, "frame speed (defaults to the family's own speed)");
  sc.params.attach(surface);

  VerifyCmd vc;
  auto* verify = app.add_subcommand("verify", "run the ODE/PDE residual matrix over the catalog; JSON to stdout");
  verify->add_option("scope", vc.scope, "all, a family name, or an equation name");
  verify->add_option("--amplitude-scale", vc.amplitude_scale, "multiply every profile by this factor (test hook)");

  SimulateCmd smc;
  auto* simulate = app.add_subcommand("simulate", "time-integrate a preset or a JSON config; manifest to stdout");
  simulate->add_option("preset", smc.preset, "preset: " + join(preset_names()));
  simulate->add_option("--config", smc.config, "JSON config file (pde, grid, dt, t_end, initial, ...)");
  simulate->add_option("--every", smc.every, "with --out, write every K-th frame");

  EllipticCmd ec;
  auto* ell = app.add_subcommand("elliptic", "evaluate sn/cn/dn(u, m), K(m) or F(phi, m); m is the parameter k^2");
  ell->add_option("function", ec.function, "sn, cn, dn, K or F")->required();
  ell->add_option("args", ec.args, "arguments")->required();

  TransformCmd tc;
  auto* transform = app.add_subcommand("transform", "apply the Miura map or the Cole-Hopf substitution");
  transform->add_option("op", tc.op, "miura, cole-hopf or schrodinger")->required();
  transform->add_option("field", tc.field, "input field: tanh, sech or cosh");
  transform->add_option("--psi", tc.psi, "schrodinger: wave function field");
  transform->add_flag("--complex", tc.complex, "miura: use phi^2 + i phi_x");
  transform->add_option("--range", tc.range, "x range LO HI")->expected(2);
  transform->add_option("--n", tc.n, "number of samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParameter;
  }
  if (seedless) {
    std::cerr << "error: --seedless is reserved and not accepted\n";
    return kParameter;
  }
  if (speed_opt->count()) sc.speed = speed;

  try {
    if (*profile) return run_profile(pc, out);
    if (*surface) return run_surface(sc, out);
    if (*verify) return run_verify(vc, out);
    if (*simulate) return run_simulate(smc, out);
    if (*ell) return run_elliptic(ec, out);
    if (*transform) return run_transform(tc, out);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParameter;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParameter;
  } catch (const PoleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParameter;
  } catch (const GridError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParameter;
  } catch (const NearZeroError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParameter;
  } catch (const IncompleteCollisionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerification;
  } catch (const BlowUpError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBlowUp;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBlowUp;
  } catch (const json::exception& e) {
    std::cerr << "error: bad JSON input: " << e.what() << "\n";
    return kParameter;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
