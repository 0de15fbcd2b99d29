#pragma once

// Flat `key = value` run configuration with a strict schema, and CSV helpers.

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "norms.hpp"
#include "rational.hpp"
#include "simulation.hpp"
#include "transport.hpp"

namespace kchemo {

inline const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys = {
      "dimension",      "box_half_length", "nx",           "nv",          "velocity_shape", "r_min",
      "r_max",          "dt",              "t_end",        "beta",        "kernel_family",  "kernel_C",
      "memory_epsilon", "kernel_signs",    "kernel_saturation", "init_kind", "init_amplitude", "init_width",
      "norms",          "monitors",        "monitor_p",    "monitor_q",   "monitor_a",      "snapshot_every",
      "output_dir",     "rng_seed",        "dispersion_samples"};
  return keys;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Raw key/value pairs. Unknown and duplicate keys are errors.
class Config {
public:
  static Config parse(std::istream& in) {
    Config c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const std::string t = trim(line);
      if (t.empty()) continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
      const std::string key = trim(std::string_view(t).substr(0, eq));
      const std::string value = trim(std::string_view(t).substr(eq + 1));
      if (!config_keys().count(key)) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
      if (value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
      if (!c.values_.emplace(key, value).second)
        throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    return c;
  }

  static Config parse_string(const std::string& text) {
    std::istringstream is(text);
    return parse(is);
  }

  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse(in);
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      return Rational::parse(it->second).to_double();
    } catch (const InvalidArgument&) {
    }
    double v = 0.0;
    const auto& s = it->second;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
      throw ConfigError("'" + key + "': expected a number, got '" + s + "'");
    return v;
  }

  long get_int(const std::string& key, long fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    long v = 0;
    const auto& s = it->second;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ConfigError("'" + key + "': expected an integer, got '" + s + "'");
    return v;
  }

  Rational get_rational(const std::string& key, const Rational& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      return Rational::parse(it->second);
    } catch (const InvalidArgument& e) {
      throw ConfigError("'" + key + "': " + e.what());
    }
  }

private:
  std::map<std::string, std::string> values_;
};

struct NormRequest {
  Exponent p, q;
  std::string column() const { return "norm_" + p.str() + "_" + q.str(); }
};

struct RunConfig {
  SimulationSpec sim;
  InitialData init;
  double t_end = 1.0;
  long steps = 0;
  std::vector<NormRequest> norms;
  std::vector<std::string> monitors;
  double monitor_p = 1.5;
  Rational monitor_q{9, 7};
  Rational monitor_a{3, 2};
  long snapshot_every = 0;
  std::string output_dir = "out";
  long rng_seed = 0;
  int dispersion_samples = 12;
};

inline std::vector<NormRequest> parse_norms(const std::string& text) {
  std::vector<NormRequest> out;
  for (const auto& item : split(text, ';')) {
    if (item.empty()) continue;
    const auto pq = split(item, ',');
    if (pq.size() != 2) throw ConfigError("norms: expected 'p,q' pairs separated by ';', got '" + item + "'");
    try {
      out.push_back({Exponent::parse(pq[0]), Exponent::parse(pq[1])});
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("norms: ") + e.what());
    }
  }
  return out;
}

inline KernelFamily parse_family(const std::string& s) {
  if (s == "constant") return KernelFamily::constant;
  if (s == "hyp1") return KernelFamily::hyp1;
  if (s == "hyp2") return KernelFamily::hyp2;
  if (s == "hyp3") return KernelFamily::hyp3;
  throw ConfigError("kernel_family must be constant, hyp1, hyp2 or hyp3, got '" + s + "'");
}

/// Builds and validates a run from raw keys. Every failure is a ConfigError.
inline RunConfig build_run_config(const Config& c) {
  RunConfig r;
  auto& g = r.sim.grid;
  g.dimension = static_cast<int>(c.get_int("dimension", 1));
  g.box_half_length = c.get_double("box_half_length", 4.0);
  g.nx = static_cast<int>(c.get_int("nx", 64));
  g.nv = static_cast<int>(c.get_int("nv", 16));
  const std::string shape = c.get_string("velocity_shape", "ball");
  if (shape == "ball") g.velocity_shape = VelocityShape::ball;
  else if (shape == "shell") g.velocity_shape = VelocityShape::shell;
  else throw ConfigError("velocity_shape must be ball or shell, got '" + shape + "'");
  g.r_min = c.get_double("r_min", 0.0);
  g.r_max = c.get_double("r_max", 1.0);
  g.dt = c.get_double("dt", 0.01);
  r.t_end = c.get_double("t_end", 1.0);
  r.sim.beta = static_cast<int>(c.get_int("beta", 1));

  auto& k = r.sim.kernel;
  k.family = parse_family(c.get_string("kernel_family", "constant"));
  k.C = c.get_double("kernel_C", 1.0);
  k.epsilon = c.get_double("memory_epsilon", 1.0);
  if (c.has("kernel_signs")) {
    if (k.family != KernelFamily::hyp3) throw ConfigError("kernel_signs applies to hyp3 only");
    const auto parts = split(c.get_string("kernel_signs", ""), ',');
    if (parts.size() != 4) throw ConfigError("kernel_signs needs four signs, e.g. +,-,+,-");
    for (int i = 0; i < 4; ++i) {
      if (parts[i] == "+" || parts[i] == "+1" || parts[i] == "1") k.signs[i] = +1;
      else if (parts[i] == "-" || parts[i] == "-1") k.signs[i] = -1;
      else if (parts[i] == "0") k.active[i] = false;
      else throw ConfigError("kernel_signs entries must be +, - or 0, got '" + parts[i] + "'");
    }
  }
  if (c.has("kernel_saturation")) k.saturation = c.get_double("kernel_saturation", 0.0);

  const std::string kind = c.get_string("init_kind", "gaussian");
  if (kind == "gaussian") r.init.spatial = SpatialProfile::gaussian;
  else if (kind == "cube") r.init.spatial = SpatialProfile::cube;
  else throw ConfigError("init_kind must be gaussian or cube, got '" + kind + "'");
  r.init.amplitude = c.get_double("init_amplitude", 1.0);
  r.init.width = c.get_double("init_width", 0.5);
  if (!(r.init.amplitude >= 0.0)) throw ConfigError("init_amplitude must be non-negative");
  if (!(r.init.width > 0.0)) throw ConfigError("init_width must be positive");

  r.norms = parse_norms(c.get_string("norms", ""));
  for (const auto& m : split(c.get_string("monitors", ""), ','))
    if (!m.empty()) {
      if (m != "gronwall" && m != "term_tracker" && m != "bootstrap")
        throw ConfigError("unknown monitor '" + m + "' (known: gronwall, term_tracker, bootstrap)");
      r.monitors.push_back(m);
    }
  r.monitor_p = c.get_double("monitor_p", 1.5);
  r.monitor_q = c.get_rational("monitor_q", Rational(9, 7));
  r.monitor_a = c.get_rational("monitor_a", Rational(3, 2));
  r.snapshot_every = c.get_int("snapshot_every", 0);
  if (r.snapshot_every < 0) throw ConfigError("snapshot_every must be >= 0");
  r.output_dir = c.get_string("output_dir", "out");
  r.rng_seed = c.get_int("rng_seed", 0);
  r.dispersion_samples = static_cast<int>(c.get_int("dispersion_samples", 12));

  try {
    validate(r.sim);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (!(r.t_end > 0.0)) throw ConfigError("t_end must be positive");
  const double ratio = r.t_end / g.dt;
  r.steps = std::lround(ratio);
  if (std::abs(ratio - r.steps) > 1e-9 * std::max(1.0, ratio))
    throw ConfigError("t_end must be a whole number of steps dt");
  return r;
}

// ---------------------------------------------------------------------------
// CSV.

/// Shortest round-trip decimal form; identical bits give identical text.
inline std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw InvalidArgument("number formatting failed");
  return std::string(buf, ptr);
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
  os << '\n';
}

}  // namespace kchemo
