#pragma once

// Deterministic CSV output and JSON run manifests. Numbers are written with
// std::to_chars (17 significant digits, '.' decimal point, no locale), lines
// end in '\n'.

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "solitons/errors.hpp"
#include "solitons/sim.hpp"

namespace solitons {

inline constexpr const char* kVersion = "0.1.0";

inline std::string format_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

// Fixed-point with `decimals` digits after the point, locale independent.
inline std::string format_fixed(double v, int decimals) {
  char buf[512];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  if (r.ec != std::errc()) throw DomainError("format: value out of range");
  return std::string(buf, r.ptr);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row) {
    if (row.size() != header.size()) throw ParameterError("table: row width does not match the header");
    rows.push_back(std::move(row));
  }
};

inline void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t j = 0; j < t.header.size(); ++j) os << (j ? "," : "") << t.header[j];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t j = 0; j < r.size(); ++j) os << (j ? "," : "") << format_number(r[j]);
    os << '\n';
  }
}

inline nlohmann::json table_json(const Table& t) {
  auto rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json o;
    for (std::size_t j = 0; j < r.size(); ++j) o[t.header[j]] = r[j];
    rows.push_back(o);
  }
  return {{"columns", t.header}, {"rows", rows}};
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot open " + p.string() + " for writing");
  f << content;
  if (!f) throw Error("write to " + p.string() + " failed");
}

inline Table frame_table(const Grid& g, const Frame& f) {
  Table t{{"x", "re", "im"}, {}};
  if (!f.ut.empty()) t.header.insert(t.header.end(), {"ut_re", "ut_im"});
  for (std::size_t i = 0; i < g.n(); ++i) {
    std::vector<double> row{g.x(i), f.u[i].real(), f.u[i].imag()};
    if (!f.ut.empty()) row.insert(row.end(), {f.ut[i].real(), f.ut[i].imag()});
    t.add(std::move(row));
  }
  return t;
}

// One CSV per stored frame, frame_0000.csv, ... in `dir`. Returns the paths.
inline std::vector<std::filesystem::path> write_trajectory(const std::filesystem::path& dir, const Trajectory& tr,
                                                           const std::string& stem = "frame") {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  for (std::size_t k = 0; k < tr.frames.size(); ++k) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_%04zu.csv", stem.c_str(), k);
    std::ostringstream os;
    write_csv(os, frame_table(tr.grid(), tr.frames[k]));
    out.push_back(dir / name);
    write_file(out.back(), os.str());
  }
  return out;
}

inline nlohmann::json config_json(const SimConfig& c) {
  return {{"kind", pde_name(c.kind)},
          {"scheme", scheme_name(c.scheme)},
          {"x_min", c.grid.x_min()},
          {"x_max", c.grid.x_max()},
          {"n", c.grid.n()},
          {"dt", c.dt},
          {"t_end", c.t_end},
          {"cadence", c.cadence},
          {"frame_speed", c.frame_speed},
          {"hyperviscosity", c.hyperviscosity},
          {"check_stability", c.check_stability}};
}

inline nlohmann::json conserved_series(const Trajectory& tr) {
  nlohmann::json t = nlohmann::json::array(), m = t, p = t, e = t;
  for (const auto& f : tr.frames) {
    t.push_back(f.t);
    m.push_back(f.conserved.mass);
    p.push_back(f.conserved.momentum);
    e.push_back(f.conserved.energy);
  }
  const auto& a = tr.frames.front().conserved;
  const auto& b = tr.frames.back().conserved;
  return {{"t", t},
          {"mass", m},
          {"momentum", p},
          {"energy", e},
          {"drift",
           {{"mass", relative_drift(b.mass, a.mass)},
            {"momentum", relative_drift(b.momentum, a.momentum)},
            {"energy", relative_drift(b.energy, a.energy)}}}};
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunManifest {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<std::string> outputs{};
  bool pass = true;
  nlohmann::json summary = nlohmann::json::object();

  nlohmann::json to_json() const {
    return {{"command", command},           {"parameters", parameters}, {"version", kVersion},
            {"timestamp", utc_timestamp()}, {"outputs", outputs},       {"pass", pass},
            {"summary", summary}};
  }
};

}  // namespace solitons
