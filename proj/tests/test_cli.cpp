#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "solitons/waves.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("solitons_cli_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Run cli(const std::string& args) {
  static int counter = 0;
  const fs::path dir = scratch("run" + std::to_string(counter++));
  const std::string cmd = std::string(SOLITONS_CLI) + " " + args + " > " + (dir / "out").string() + " 2> " +
                          (dir / "err").string();
  const int status = std::system(cmd.c_str());
  Run r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(dir / "out"), slurp(dir / "err")};
  fs::remove_all(dir);
  return r;
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::vector<std::string>* header = nullptr) {
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  if (header) {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header->push_back(cell);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(Cli, EllipticExamples) {
  EXPECT_EQ(cli("elliptic sn 0.5 1").out, "0.462117157260010\n");
  EXPECT_EQ(cli("elliptic K 0").out, "1.570796326794897\n");
  auto f = cli("elliptic F 0 0.3");
  EXPECT_EQ(f.code, 0);
  EXPECT_EQ(std::stod(f.out), 0.0);
  EXPECT_EQ(cli("elliptic sn 0.5 1.5").code, 2);
  EXPECT_EQ(cli("elliptic zeta 0.5 0.5").code, 2);
}

TEST(Cli, ProfileKdvFiveRows) {
  const auto r = cli("profile kdv --c 1 --range -10 10 --n 5");
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<std::string> header;
  const auto rows = parse_csv(r.out, &header);
  EXPECT_EQ(header, (std::vector<std::string>{"xi", "value"}));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[2][0], 0.0);
  EXPECT_EQ(rows[2][1], 0.5);
  // Manifest goes to stderr without --out.
  const auto m = json::parse(r.err);
  EXPECT_EQ(m["command"], "profile");
  EXPECT_EQ(m["summary"]["rows"], 5);
}

TEST(Cli, SineGordonMirror) {
  const auto plus = parse_csv(cli("profile sg-kink --gamma 0.4 --polarity +1 --range -10 10 --n 41").out);
  const auto minus = parse_csv(cli("profile sg-kink --gamma 0.4 --polarity -1 --range -10 10 --n 41").out);
  ASSERT_EQ(plus.size(), 41u);
  ASSERT_EQ(minus.size(), 41u);
  for (std::size_t i = 0; i < plus.size(); ++i) {
    EXPECT_EQ(minus[i][0], -plus[40 - i][0]);
    EXPECT_NEAR(minus[i][1], plus[40 - i][1], 1e-15);
  }
}

TEST(Cli, ComplexProfileHasImagColumn) {
  const auto r = cli("profile nls-kink --lambda 2 --branch 1 --range -1 1 --n 3");
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<std::string> header;
  const auto rows = parse_csv(r.out, &header);
  EXPECT_EQ(header, (std::vector<std::string>{"xi", "value", "imag"}));
  EXPECT_NEAR(rows[2][2], std::tanh(1.0), 1e-15);
  EXPECT_EQ(rows[2][1], 0.0);
}

TEST(Cli, PoleAndParameterErrors) {
  EXPECT_EQ(cli("profile gmkdv-kink --alpha 2 --beta 2").code, 2);
  EXPECT_EQ(cli("profile kdv --c -1").code, 2);
  EXPECT_EQ(cli("profile kdv").code, 2);
  EXPECT_EQ(cli("profile nosuch --c 1").code, 2);
  EXPECT_EQ(cli("profile kdv --c 1 --gamma 2").code, 2);
  // tan branch with pi/(2k) inside the sampled range hits a pole exactly.
  const double k = std::pow(2.0 / 12.0, 0.25);
  std::ostringstream os;
  os.precision(17);
  os << "profile gmkdv-kink --alpha -2 --beta 2 --branch -1 --range " << -std::numbers::pi / (2 * k) << " "
     << std::numbers::pi / (2 * k) << " --n 3";
  EXPECT_EQ(cli(os.str()).code, 2);
  EXPECT_EQ(cli("--seedless profile kdv --c 1").code, 2);
  EXPECT_EQ(cli("nosuchcommand").code, 2);
  EXPECT_EQ(cli("--help").code, 0);
}

TEST(Cli, HelpDescribesPresets) {
  const auto r = cli("profile --help");
  EXPECT_NE(r.out.find("gamma = 0.4"), std::string::npos);
  EXPECT_NE(r.out.find("alpha = -2, beta = 2"), std::string::npos);
}

TEST(Cli, Figure1cHasPeakRows) {
  const auto r = cli("profile --figure 1c");
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<std::string> header;
  const auto rows = parse_csv(r.out, &header);
  EXPECT_EQ(header, (std::vector<std::string>{"xi", "kdv", "mkdv"}));
  bool found = false;
  for (const auto& row : rows)
    if (row[0] == 0.0) {
      found = true;
      EXPECT_EQ(row[1], 0.5);
      EXPECT_NEAR(row[2], 1.0, 1e-15);
    }
  EXPECT_TRUE(found);
}

class GoldenFigure : public ::testing::TestWithParam<std::string> {};

TEST_P(GoldenFigure, ByteIdenticalAcrossRuns) {
  const std::string id = GetParam();
  const bool surface = id[0] == '3' || id[0] == '5';
  const std::string args = std::string(surface ? "surface" : "profile") + " --figure " + id;
  const auto a = cli(args), b = cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const fs::path golden = fs::path(SOLITONS_GOLDEN_DIR) / ((surface ? "surface_" : "profile_") + id + ".csv");
  ASSERT_TRUE(fs::exists(golden)) << golden;
  EXPECT_EQ(a.out, slurp(golden));
}

INSTANTIATE_TEST_SUITE_P(Figures, GoldenFigure, ::testing::Values("1a", "1b", "1c", "2", "4", "3a", "3b", "5a", "5b"));

TEST(Cli, SurfaceFigure3a) {
  const auto r = cli("surface --figure 3a");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  EXPECT_EQ(rows.size(), 41u * 11u);
  bool centre = false;
  const auto p = solitons::SineGordonKinkParams::from_gamma(0.4, solitons::Polarity::Kink);
  for (const auto& row : rows) {
    if (row[0] == 0 && row[1] == 0) {
      centre = true;
      EXPECT_NEAR(row[2], std::numbers::pi, 1e-15);
    }
    // every t = const slice is the profile at xi = x - t
    EXPECT_NEAR(row[2], solitons::sg_kink(p, row[0] - row[1]), 1e-14);
  }
  EXPECT_TRUE(centre);
}

TEST(Cli, SurfaceFamilyUsesSpeed) {
  const auto r = cli("surface kdv --c 0.5 --nx 5 --nt 3 --x-range -2 2 --t-range 0 2");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 15u);
  const solitons::KdVSolitonParams p(0.5);
  for (const auto& row : rows) EXPECT_NEAR(row[2], solitons::kdv_soliton(p, row[0] - 0.5 * row[1]), 1e-15);
  EXPECT_EQ(cli("surface sg-kink --gamma 0.4").code, 2);
  EXPECT_EQ(cli("surface sg-kink --gamma 0.4 --speed 1").code, 0);
}

TEST(Cli, VerifyScopes) {
  const auto k = cli("verify kdv");
  EXPECT_EQ(k.code, 0) << k.err;
  const auto kj = json::parse(k.out);
  ASSERT_EQ(kj["rows"].size(), 1u);
  EXPECT_TRUE(kj["rows"][0]["pass"].get<bool>());
  EXPECT_EQ(kj["rows"][0]["family"], "kdv-soliton");

  const auto bad = cli("verify kdv --amplitude-scale 1.01");
  EXPECT_EQ(bad.code, 3);
  EXPECT_FALSE(json::parse(bad.out)["rows"][0]["pass"].get<bool>());

  const auto all = cli("verify");
  const auto aj = json::parse(all.out);
  EXPECT_GE(aj["rows"].size(), 12u);
  EXPECT_EQ(all.code, aj["pass"].get<bool>() ? 0 : 3);
  for (const auto& row : aj["rows"])
    for (const char* key : {"family", "equation", "sup_norm", "order", "pass", "notes"}) EXPECT_TRUE(row.contains(key));
  EXPECT_EQ(cli("verify nosuch").code, 2);
}

TEST(Cli, VerifyFamilyCarriesNotes) {
  const auto r = cli("verify gmkdv-kink");
  const auto j = json::parse(r.out);
  ASSERT_FALSE(j["rows"].empty());
  EXPECT_FALSE(j["rows"][0]["notes"].empty());
}

TEST(Cli, SimulateKdvSoliton) {
  const auto r = cli("simulate kdv-soliton");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = json::parse(r.out);
  EXPECT_NEAR(m["summary"]["speed"].get<double>(), 1.0, 0.01);
  EXPECT_TRUE(m["pass"].get<bool>());
  EXPECT_EQ(m["summary"]["config"]["n"], 512);
}

TEST(Cli, SimulateNlsBellWithOutputDir) {
  const fs::path dir = scratch("nls");
  const auto r = cli("--out " + dir.string() + " simulate nls-bell --every 2");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = json::parse(slurp(dir / "manifest.json"));
  EXPECT_LE(m["summary"]["max_step_mass_change"].get<double>(), 1e-10);
  ASSERT_FALSE(m["outputs"].empty());
  for (const auto& p : m["outputs"]) {
    ASSERT_TRUE(fs::exists(p.get<std::string>()));
    EXPECT_GT(fs::file_size(p.get<std::string>()), 0u);
  }
  std::vector<std::string> header;
  parse_csv(slurp(m["outputs"][0].get<std::string>()), &header);
  EXPECT_EQ(header, (std::vector<std::string>{"x", "re", "im"}));
  fs::remove_all(dir);
}

TEST(Cli, SimulateCollision) {
  const auto r = cli("simulate kdv-collision");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = json::parse(r.out);
  const auto amps = m["summary"]["post_amplitudes"];
  EXPECT_NEAR(amps[0].get<double>(), 0.50, 0.005);
  EXPECT_NEAR(amps[1].get<double>(), 0.25, 0.0025);
}

TEST(Cli, SimulateConfigFile) {
  const fs::path dir = scratch("cfg");
  const json cfg = {{"pde", {{"kind", "kdv"}}},
                    {"grid", {{"x_min", -20}, {"x_max", 20}, {"n", 256}}},
                    {"dt", 1e-3},
                    {"t_end", 2.0},
                    {"cadence", 0.5},
                    {"initial", {{"family", "kdv"}, {"parameters", {{"c", 0.8}}}, {"x0", -2}}}};
  std::ofstream(dir / "run.json") << cfg.dump();
  const auto r = cli("simulate --config " + (dir / "run.json").string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["summary"]["speed"].get<double>(), 0.8, 0.01);

  json blow = cfg;
  blow["dt"] = 0.5;
  blow["t_end"] = 50.0;
  std::ofstream(dir / "blow.json") << blow.dump();
  EXPECT_EQ(cli("simulate --config " + (dir / "blow.json").string()).code, 2);
  blow["check_stability"] = false;
  std::ofstream(dir / "blow.json") << blow.dump();
  const auto b = cli("simulate --config " + (dir / "blow.json").string());
  EXPECT_EQ(b.code, 4) << b.err;

  std::ofstream(dir / "broken.json") << "{\"pde\": ";
  EXPECT_EQ(cli("simulate --config " + (dir / "broken.json").string()).code, 2);
  EXPECT_EQ(cli("simulate nosuch").code, 2);
  fs::remove_all(dir);
}

TEST(Cli, TransformChain) {
  const auto r = cli("transform schrodinger tanh --psi cosh");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(json::parse(r.out)["sup_norm"].get<double>(), 1e-10);
  const auto m = cli("transform miura tanh --n 16 --range -1 1");
  const auto rows = parse_csv(m.out);
  for (const auto& row : rows) EXPECT_NEAR(row[1], 1.0, 1e-14);
  EXPECT_EQ(cli("transform cole-hopf sech --range 0 1 --n 32").code, 0);
  EXPECT_EQ(cli("transform cole-hopf tanh --range -1 1 --n 16").code, 2);
}

TEST(Cli, JsonFormat) {
  const auto r = cli("--format json profile kdv --c 1 --n 3");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["rows"].size(), 3u);
  EXPECT_EQ(j["rows"][1]["value"], 0.5);
}
