#include "uavsec/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

namespace uavsec {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& m) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + m);
}

double parse_double(const std::string& origin, int line, const std::string& key,
                    const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    fail(origin, line, "invalid number for '" + key + "': " + v);
  }
  if (used != v.size())
    fail(origin, line, "trailing garbage in number for '" + key + "': " + v);
  return x;
}

std::uint64_t parse_u64(const std::string& origin, int line, const std::string& key,
                        const std::string& v) {
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(v, &used);
  } catch (const std::exception&) {
    fail(origin, line, "invalid integer for '" + key + "': " + v);
  }
  if (used != v.size())
    fail(origin, line, "trailing garbage in integer for '" + key + "': " + v);
  return x;
}

Position2D parse_point(const std::string& origin, int line, const std::string& key,
                       const std::string& v) {
  const auto comma = v.find(',');
  if (comma == std::string::npos)
    fail(origin, line, "'" + key + "' expects x,y");
  return {parse_double(origin, line, key, trim(v.substr(0, comma))),
          parse_double(origin, line, key, trim(v.substr(comma + 1)))};
}

/// Raw keys as they appear in the file, before derivation.
struct RawConfig {
  Scheme scheme = Scheme::FUJ;
  std::size_t n_slots = 100;
  double mission_time_s = 2.0;
  double total_power_dbm = 20.0;  // network total, split equally over the UAVs
  double papr = 4.0;
  double n0_dbm = -40.0;
  double psi_h_dbm = -20.0;
  double eta = 0.7;
  double gamma0_db = 40.0;
  double alpha = 2.5;
  double altitude = 1.5;
  double zone_radius_factor = 2.5;
  std::optional<Position2D> eve_center;
  double eve_radius_factor = 0.2;
  double safety_factor = 0.1;
  double epsilon = 1e-2;
  std::optional<std::vector<Position2D>> endpoints;  // q_si; q_sf; q_ji; q_jf
  std::optional<double> d_step_max;
  std::uint64_t seed = 0;
  bool endpoints_given = false;
};

MissionConfig derive(const RawConfig& r) {
  MissionConfig c;
  c.scheme = r.scheme;
  c.n_slots = r.n_slots;
  c.mission_time_s = r.mission_time_s;
  c.eta = r.eta;
  c.epsilon = r.epsilon;
  c.seed = r.seed;

  const double h = r.altitude;
  c.ch.alpha = r.alpha;
  c.ch.altitude = h;
  c.ch.n0 = dbm_to_mw(r.n0_dbm);
  c.ch.beta_bar = db_to_linear(r.gamma0_db) * c.ch.n0;
  c.psi_h = dbm_to_mw(r.psi_h_dbm);

  c.geo.altitude = h;
  c.geo.w_d = {0.0, 0.0};
  c.geo.r_fly = r.zone_radius_factor * h;
  c.geo.r_e = r.eve_radius_factor * h;
  c.geo.d_safe = r.safety_factor * h;
  c.geo.w_e_hat = r.eve_center.value_or(Position2D{0.5 * c.geo.r_fly, 0.0});

  const double r_fly = c.geo.r_fly;
  if (r.endpoints) {
    const auto& e = *r.endpoints;
    c.q_si = e[0];
    c.q_sf = e[1];
    c.q_ji = e[2];
    c.q_jf = e[3];
  } else {
    c.q_si = {-r_fly, 0.0};
    c.q_sf = {r_fly, 0.0};
    // The jammer starts half a radius above the source track; the raw point
    // (-r, r/2) falls outside the circular zone, so project it onto the rim.
    const double shrink = (1.0 - 1e-12) / std::sqrt(1.25);
    c.q_ji = Position2D{-r_fly, 0.5 * r_fly} * shrink;
    c.q_jf = Position2D{r_fly, 0.5 * r_fly} * shrink;
  }
  c.d_step = r.d_step_max.value_or(0.08 * h);

  const double per_uav_mw = 0.5 * dbm_to_mw(r.total_power_dbm);
  const double p_avg = per_uav_mw / static_cast<double>(r.n_slots);
  c.budget_s = {p_avg, r.papr * p_avg};
  c.budget_j = c.budget_s;
  return c;
}

}  // namespace

MissionConfig default_config() { return derive(RawConfig{}); }

MissionConfig parse_config(const std::string& text, const std::string& origin) {
  RawConfig r;
  std::istringstream in(text);
  std::string raw_line;
  int lineno = 0;
  while (std::getline(in, raw_line)) {
    ++lineno;
    std::string line = raw_line;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string val = trim(line.substr(eq + 1));
    if (val.empty()) fail(origin, lineno, "empty value for '" + key + "'");

    if (key == "scheme") {
      const std::string v = lower(val);
      if (v == "fuj")
        r.scheme = Scheme::FUJ;
      else if (v == "gjt")
        r.scheme = Scheme::GJT;
      else if (v == "woj")
        r.scheme = Scheme::WoJ;
      else
        fail(origin, lineno, "scheme must be fuj, gjt or woj");
    } else if (key == "n_slots") {
      const auto n = parse_u64(origin, lineno, key, val);
      if (n < 2) fail(origin, lineno, "n_slots must be at least 2");
      r.n_slots = static_cast<std::size_t>(n);
    } else if (key == "mission_time_s") {
      r.mission_time_s = parse_double(origin, lineno, key, val);
    } else if (key == "total_power_dbm") {
      r.total_power_dbm = parse_double(origin, lineno, key, val);
    } else if (key == "papr") {
      r.papr = parse_double(origin, lineno, key, val);
    } else if (key == "n0_dbm") {
      r.n0_dbm = parse_double(origin, lineno, key, val);
    } else if (key == "psi_h_dbm") {
      r.psi_h_dbm = parse_double(origin, lineno, key, val);
    } else if (key == "eta") {
      r.eta = parse_double(origin, lineno, key, val);
    } else if (key == "gamma0_db") {
      r.gamma0_db = parse_double(origin, lineno, key, val);
    } else if (key == "alpha") {
      r.alpha = parse_double(origin, lineno, key, val);
    } else if (key == "altitude") {
      r.altitude = parse_double(origin, lineno, key, val);
    } else if (key == "zone_radius_factor") {
      r.zone_radius_factor = parse_double(origin, lineno, key, val);
    } else if (key == "eve_center") {
      r.eve_center = parse_point(origin, lineno, key, val);
    } else if (key == "eve_radius_factor") {
      r.eve_radius_factor = parse_double(origin, lineno, key, val);
    } else if (key == "safety_factor") {
      r.safety_factor = parse_double(origin, lineno, key, val);
    } else if (key == "epsilon") {
      r.epsilon = parse_double(origin, lineno, key, val);
    } else if (key == "endpoints") {
      std::vector<Position2D> pts;
      std::stringstream ss(val);
      std::string part;
      while (std::getline(ss, part, ';'))
        pts.push_back(parse_point(origin, lineno, key, trim(part)));
      if (pts.size() != 4)
        fail(origin, lineno,
             "endpoints expects 4 points 'qsi_x,qsi_y; qsf_x,qsf_y; "
             "qji_x,qji_y; qjf_x,qjf_y'");
      r.endpoints = std::move(pts);
      r.endpoints_given = true;
    } else if (key == "d_step_max") {
      r.d_step_max = parse_double(origin, lineno, key, val);
    } else if (key == "seed") {
      r.seed = parse_u64(origin, lineno, key, val);
    } else {
      fail(origin, lineno, "unknown key '" + key + "'");
    }
  }

  if (r.scheme == Scheme::WoJ && r.endpoints_given)
    std::cerr << "warning: scheme woj has no jammer; the jammer endpoints in "
                 "'endpoints' are ignored\n";
  return derive(r);
}

MissionConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace uavsec
