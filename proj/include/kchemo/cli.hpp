#pragma once

// Command implementations behind the kchemo executable. Each returns the
// process exit code: 0 ok, 1 configuration error, 2 runtime guard abort,
// 3 a requested check came out negative.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "estimator.hpp"
#include "exponents.hpp"
#include "monitors.hpp"

namespace kchemo {

enum ExitCode { kExitOk = 0, kExitConfig = 1, kExitGuard = 2, kExitCheckFailed = 3 };

inline std::unique_ptr<Monitor> make_monitor(const std::string& name, const RunConfig& rc, const DistributionField& f0) {
  try {
    if (name == "gronwall") return std::make_unique<GronwallMonitorThm2>(rc.sim, f0, rc.monitor_p);
    if (name == "term_tracker") return std::make_unique<TermTrackerThm1>(rc.sim, f0, rc.monitor_q);
    if (name == "bootstrap") return std::make_unique<BootstrapMonitorThm3>(rc.sim, f0, rc.monitor_a);
  } catch (const InvalidArgument& e) {
    throw ConfigError("monitor " + name + ": " + e.what());
  }
  throw ConfigError("unknown monitor '" + name + "'");
}

inline void write_snapshot(const std::filesystem::path& path, const DistributionField& f, long step) {
  const auto& g = *f.grid;
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write snapshot " + path.string());
  os << "# t=" << format_double(f.time) << " step=" << step << " dimension=" << g.dimension() << " nx=" << g.nx()
     << " n_velocity=" << g.n_velocity() << " hx=" << format_double(g.hx()) << " hv=" << format_double(g.hv()) << '\n';
  std::vector<std::string> header;
  for (int a = 0; a < g.dimension(); ++a) header.push_back("x" + std::to_string(a + 1));
  for (std::size_t j = 0; j < g.n_velocity(); ++j) header.push_back("f_v" + std::to_string(j));
  write_csv_row(os, header);
  std::vector<std::string> row;
  for (std::size_t i = 0; i < g.n_space(); ++i) {
    row.clear();
    const Vec3 x = g.position(i);
    for (int a = 0; a < g.dimension(); ++a) row.push_back(format_double(x[a]));
    for (std::size_t j = 0; j < g.n_velocity(); ++j) row.push_back(format_double(f.at(i, j)));
    write_csv_row(os, row);
  }
}

struct RunResult {
  int exit_code = kExitOk;
  long steps_done = 0;
  bool certificates_passed = true;
  std::vector<std::string> summaries;
};

/// Runs the configured evolution and writes <output_dir>/timeseries.csv.
inline RunResult run_simulation(const RunConfig& rc, std::ostream& log) {
  RunResult res;
  namespace fs = std::filesystem;
  const fs::path dir(rc.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output_dir '" + rc.output_dir + "': " + ec.message());

  Simulation sim(rc.sim, rc.init);
  std::vector<std::unique_ptr<Monitor>> monitors;
  for (const auto& m : rc.monitors) monitors.push_back(make_monitor(m, rc, sim.state()));

  std::ofstream csv(dir / "timeseries.csv");
  if (!csv) throw ConfigError("cannot write " + (dir / "timeseries.csv").string());
  std::vector<std::string> header = {"t", "mass", "min_f", "max_f"};
  for (const auto& n : rc.norms) header.push_back(n.column());
  for (const auto& m : monitors)
    for (const auto& c : m->columns()) header.push_back(c);
  write_csv_row(csv, header);

  auto emit = [&]() {
    const auto& f = sim.state();
    std::vector<std::string> row = {format_double(f.time), format_double(total_mass(f)),
                                    format_double(*std::min_element(f.values.begin(), f.values.end())),
                                    format_double(*std::max_element(f.values.begin(), f.values.end()))};
    for (const auto& n : rc.norms) row.push_back(format_double(mixed_norm(f, n.p.to_double(), n.q.to_double())));
    for (const auto& m : monitors) {
      const auto cols = m->columns();
      const auto vals = m->observe(f);
      for (std::size_t i = 0; i < vals.size(); ++i)
        row.push_back(is_cert_column(cols[i]) ? (vals[i] != 0.0 ? "pass" : "fail") : format_double(vals[i]));
    }
    write_csv_row(csv, row);
    if (rc.snapshot_every > 0 && sim.steps() % rc.snapshot_every == 0) {
      std::ostringstream name;
      name << "snapshot_" << std::setw(6) << std::setfill('0') << sim.steps() << ".csv";
      write_snapshot(dir / name.str(), f, sim.steps());
    }
  };

  emit();
  try {
    for (long s = 0; s < rc.steps; ++s) {
      sim.step();
      emit();
    }
  } catch (const GuardAbort& e) {
    log << "guard abort after " << sim.steps() << " steps: " << e.what() << '\n';
    res.exit_code = kExitGuard;
  }
  res.steps_done = sim.steps();
  for (const auto& m : monitors) {
    res.certificates_passed = res.certificates_passed && m->passed();
    res.summaries.push_back(m->summary());
    log << m->summary() << '\n';
  }
  return res;
}

inline int run_simulate(const std::string& config_path, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig rc = build_run_config(Config::load(config_path));
    const auto res = run_simulation(rc, out);
    out << "steps: " << res.steps_done << ", output: " << (std::filesystem::path(rc.output_dir) / "timeseries.csv").string()
        << '\n';
    return res.exit_code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const GuardAbort& e) {
    err << "guard abort: " << e.what() << '\n';
    return kExitGuard;
  }
}

// ---------------------------------------------------------------------------
// Dispersion decay.

inline int run_dispersion(const std::string& config_path, std::ostream& out, std::ostream& err) {
  DecayFit fit;
  std::string dir;
  try {
    const Config c = Config::load(config_path);
    const RunConfig rc = build_run_config(c);
    if (rc.norms.size() != 1) throw ConfigError("dispersion needs exactly one 'p,q' pair in norms");
    const double p = rc.norms[0].p.to_double(), q = rc.norms[0].q.to_double();
    if (!(p >= q)) throw ConfigError("dispersion needs p >= q, got " + rc.norms[0].p.str() + "," + rc.norms[0].q.str());
    SeparableGaussian data;
    data.amplitude = rc.init.amplitude;
    data.sigma = rc.init.width;
    data.tau = rc.sim.grid.r_max / 6.0;
    fit = dispersion_decay_fit(data, rc.sim.grid.dimension, p, q, rc.dispersion_samples);
    dir = rc.output_dir;
    std::filesystem::create_directories(dir);
    std::ofstream csv(std::filesystem::path(dir) / "dispersion.csv");
    if (!csv) throw ConfigError("cannot write dispersion.csv in " + dir);
    write_csv_row(csv, {"t", "norm", "bound"});
    const double rate = -fit.theoretical_slope;
    for (std::size_t i = 0; i < fit.times.size(); ++i)
      write_csv_row(csv, {format_double(fit.times[i]), format_double(fit.norms[i]),
                          format_double(std::pow(fit.times[i], -rate) * fit.initial_swapped)});
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  out << "slope " << format_double(fit.slope) << " (theory " << format_double(fit.theoretical_slope)
      << ", deviation " << format_double(fit.relative_deviation) << ")\n";
  out << "worst inequality ratio " << format_double(fit.worst_inequality_ratio) << '\n';
  out << (fit.pass() ? "PASS" : "FAIL") << '\n';
  return fit.pass() ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// Exponent tools.

/// Rational with denominator <= max_den closest to x (continued fractions).
inline Rational best_rational(double x, std::int64_t max_den = 1000) {
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int it = 0; it < 40; ++it) {
    const double a = std::floor(r);
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (r - a < 1e-12) break;
    r = 1.0 / (r - a);
  }
  return Rational(h1, k1);
}

inline int run_exponents_solve(const std::string& q_text, std::ostream& out, std::ostream& err) {
  Rational q;
  NumerologyChain ch;
  try {
    q = Rational::parse(q_text);
    ch = solve_numerology(q.to_double());
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  // Report exact values when the root is a small-denominator rational.
  const Rational p = best_rational(ch.values.p);
  bool exact = false;
  try {
    exact = p > Rational(1) && numerology_delta(p, q) == Rational(0);
  } catch (const InvalidArgument&) {
  }
  if (exact) {
    const auto v = numerology_chain(p, q);
    out << "q = " << q.str() << "\np = " << v.p.str() << "\nlambda = " << v.lambda.str() << "\ntheta = " << v.theta.str()
        << "\nc = " << v.c.str() << "\nb = " << v.b.str() << "\neps_interp = " << v.eps_interp.str() << '\n';
  } else {
    const auto& v = ch.values;
    out << std::setprecision(15) << "q = " << v.q << "\np = " << v.p << "\nlambda = " << v.lambda << "\ntheta = " << v.theta
        << "\nc = " << v.c << "\nb = " << v.b << "\neps_interp = " << v.eps_interp << '\n';
  }
  out << "delta(p) = " << format_double(ch.delta_at_solution) << '\n';
  out << "invariants: " << (ch.invariants_hold ? "hold" : "fail (" + ch.failure + ")") << '\n';
  return ch.invariants_hold ? kExitOk : kExitCheckFailed;
}

inline int run_exponents_region(const std::string& step_text, const std::string& out_path, std::ostream& out,
                                std::ostream& err) {
  std::vector<RegionPoint> pts;
  try {
    pts = admissible_region(Rational::parse(step_text));
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (out_path.empty()) {
    write_region_csv(out, pts);
  } else {
    std::ofstream os(out_path);
    if (!os) {
      err << "error: cannot write " << out_path << '\n';
      return kExitConfig;
    }
    write_region_csv(os, pts);
  }
  return kExitOk;
}

inline int run_exponents_check(const std::vector<std::string>& quad, int dim, std::ostream& out, std::ostream& err) {
  if (quad.size() != 4) {
    err << "error: check needs four exponents r p q a\n";
    return kExitConfig;
  }
  ExponentQuadruple e;
  try {
    e.r = Exponent::parse(quad[0]);
    e.p = Exponent::parse(quad[1]);
    e.q = Exponent::parse(quad[2]);
    e.a = Exponent::parse(quad[3]);
    e.dimension = dim;
    const auto rep = strichartz_admissible(e);
    if (rep.admissible) {
      out << "admissible" << (rep.endpoint_r_infinite ? " (endpoint p = q, r = inf)" : "") << '\n';
      return kExitOk;
    }
    out << "rejected: " << rep.failure << " fails\n";
    return kExitCheckFailed;
  } catch (const InvalidArgument& ex) {
    err << "error: malformed quadruple: " << ex.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace kchemo
