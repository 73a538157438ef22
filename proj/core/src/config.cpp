#include "coopemit/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "coopemit/dynamics.hpp"
#include "coopemit/errors.hpp"

namespace coopemit {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw ConfigError(ConfigError::Kind::parse, what); }
[[noreturn]] void invalid(const std::string& what) { throw ConfigError(ConfigError::Kind::validation, what); }

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) parse_fail("'" + where + "' must be an object");
  std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items())
    if (!keys.contains(key)) parse_fail("unknown key '" + where + "." + key + "'");
}

template <typename T>
void read(const json& obj, const char* key, T& target, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    target = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    parse_fail("bad value for '" + where + "." + key + "': " + e.what());
  }
}

}  // namespace

const char* to_string(RunMode mode) {
  switch (mode) {
    case RunMode::single: return "single";
    case RunMode::sweep: return "sweep";
    case RunMode::acceptance: return "acceptance";
  }
  return "?";
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("configuration is not valid JSON: ") + e.what());
  }
  reject_unknown(root, "config",
                 {"mode", "seed", "threads", "output_dir", "cloud", "time_grid", "quadrature", "single", "sweep", "acceptance"});

  RunConfig cfg;
  if (root.contains("mode")) {
    std::string mode;
    read(root, "mode", mode, "config");
    if (mode == "single") cfg.mode = RunMode::single;
    else if (mode == "sweep") cfg.mode = RunMode::sweep;
    else if (mode == "acceptance" || mode == "accept") cfg.mode = RunMode::acceptance;
    else parse_fail("mode must be single, sweep or acceptance");
  }
  read(root, "seed", cfg.seed, "config");
  read(root, "threads", cfg.threads, "config");
  if (root.contains("output_dir")) {
    std::string dir;
    read(root, "output_dir", dir, "config");
    cfg.output_dir = dir;
  }

  cfg.cloud.k0 = 1.0;
  cfg.cloud.gamma1 = 1.0;
  if (root.contains("cloud")) {
    const auto& c = root["cloud"];
    reject_unknown(c, "cloud", {"n_atoms", "k0r0", "n0"});
    read(c, "n_atoms", cfg.cloud.n_atoms, "cloud");
    read(c, "k0r0", cfg.cloud.r0, "cloud");
    if (c.contains("n0")) {
      std::vector<double> n0;
      read(c, "n0", n0, "cloud");
      if (n0.size() != 3) parse_fail("cloud.n0 must have three components");
      cfg.cloud.n0 = Vec3(n0[0], n0[1], n0[2]);
    }
  }
  cfg.cloud.seed = cfg.seed;

  if (root.contains("time_grid")) {
    const auto& t = root["time_grid"];
    reject_unknown(t, "time_grid", {"start_inv_gamma1", "stop_inv_gamma1", "points", "spacing"});
    if (t.contains("start_inv_gamma1")) {
      double v = 0.0;
      read(t, "start_inv_gamma1", v, "time_grid");
      cfg.time_grid.start = v;
    }
    if (t.contains("stop_inv_gamma1")) {
      double v = 0.0;
      read(t, "stop_inv_gamma1", v, "time_grid");
      cfg.time_grid.stop = v;
    }
    read(t, "points", cfg.time_grid.points, "time_grid");
    if (t.contains("spacing")) {
      std::string s;
      read(t, "spacing", s, "time_grid");
      if (s == "linear") cfg.time_grid.spacing = GridSpacing::linear;
      else if (s == "log") cfg.time_grid.spacing = GridSpacing::log;
      else parse_fail("time_grid.spacing must be linear or log");
    }
  }

  if (root.contains("quadrature")) {
    const auto& q = root["quadrature"];
    reject_unknown(q, "quadrature", {"sphere_n_theta", "sphere_n_phi", "retarded_order"});
    read(q, "sphere_n_theta", cfg.sphere_order.n_theta, "quadrature");
    read(q, "sphere_n_phi", cfg.sphere_order.n_phi, "quadrature");
    read(q, "retarded_order", cfg.retarded_order, "quadrature");
  }

  if (root.contains("single")) {
    const auto& s = root["single"];
    reject_unknown(s, "single", {"export_positions", "export_amplitudes", "angular_pattern", "perturbative"});
    read(s, "export_positions", cfg.single.export_positions, "single");
    read(s, "export_amplitudes", cfg.single.export_amplitudes, "single");
    read(s, "angular_pattern", cfg.single.angular_pattern, "single");
    read(s, "perturbative", cfg.single.perturbative, "single");
  }

  if (root.contains("sweep")) {
    const auto& s = root["sweep"];
    reject_unknown(s, "sweep",
                   {"n_values", "k0r0_for_n_axis", "k0r0_values", "n_for_k0r0_axis", "realizations", "gamma_r",
                    "forward_fraction", "fit_survival"});
    read(s, "n_values", cfg.sweep.n_values, "sweep");
    read(s, "k0r0_for_n_axis", cfg.sweep.k0r0_for_n_axis, "sweep");
    read(s, "k0r0_values", cfg.sweep.k0r0_values, "sweep");
    read(s, "n_for_k0r0_axis", cfg.sweep.n_for_k0r0_axis, "sweep");
    read(s, "realizations", cfg.sweep.realizations, "sweep");
    read(s, "gamma_r", cfg.sweep.compute_gamma_r, "sweep");
    read(s, "forward_fraction", cfg.sweep.compute_forward_fraction, "sweep");
    read(s, "fit_survival", cfg.sweep.fit_survival, "sweep");
  }

  if (root.contains("acceptance")) {
    const auto& a = root["acceptance"];
    reject_unknown(a, "acceptance",
                   {"c5_realizations", "c7_realizations", "c8_realizations", "c8_k0r0_for_n_axis", "c10_k0r0"});
    read(a, "c5_realizations", cfg.acceptance.c5_realizations, "acceptance");
    read(a, "c7_realizations", cfg.acceptance.c7_realizations, "acceptance");
    read(a, "c8_realizations", cfg.acceptance.c8_realizations, "acceptance");
    read(a, "c8_k0r0_for_n_axis", cfg.acceptance.c8_k0r0_for_n_axis, "acceptance");
    read(a, "c10_k0r0", cfg.acceptance.c10_k0r0, "acceptance");
  }

  cfg.sweep.seed = cfg.seed;
  cfg.sweep.threads = cfg.threads;
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot read configuration file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void RunConfig::validate() const {
  if (threads < 1) invalid("threads must be >= 1");
  try {
    cloud.validate();
  } catch (const ParameterError& e) {
    invalid(e.what());
  }
  if (time_grid.points < 2) invalid("time_grid.points must be >= 2");
  if (time_grid.start && !(*time_grid.start >= 0.0)) invalid("time_grid.start_inv_gamma1 must be >= 0");
  if (time_grid.spacing == GridSpacing::log && time_grid.start && !(*time_grid.start > 0.0))
    invalid("log-spaced time grids need start_inv_gamma1 > 0");
  if (time_grid.start && time_grid.stop && !(*time_grid.stop > *time_grid.start))
    invalid("time_grid.stop_inv_gamma1 must exceed start_inv_gamma1");
  if (sphere_order.n_theta < 0 || sphere_order.n_phi < 0 || (sphere_order.n_theta > 0) != (sphere_order.n_phi > 0))
    invalid("quadrature.sphere_n_theta and sphere_n_phi must both be positive or both be zero");
  if (retarded_order < kMinRetardedOrder) invalid("quadrature.retarded_order must be >= 8");
  if (mode == RunMode::sweep) {
    try {
      sweep.validate();
    } catch (const ParameterError& e) {
      invalid(e.what());
    }
  }
  if (acceptance.c5_realizations < 100) invalid("acceptance.c5_realizations must be >= 100");
  if (acceptance.c8_realizations < 200) invalid("acceptance.c8_realizations must be >= 200");
  if (acceptance.c7_realizations < 1) invalid("acceptance.c7_realizations must be >= 1");
  if (!(acceptance.c8_k0r0_for_n_axis > 0.0) || !(acceptance.c10_k0r0 > 0.0)) invalid("acceptance k0R0 values must be positive");
}

std::vector<double> make_time_grid(const TimeGridConfig& grid, const CloudParams& cloud) {
  const double start = grid.start.value_or(1e-2 / analytic_gamma_col(cloud));
  const double stop = grid.stop.value_or(10.0 / analytic_gamma_r(cloud));
  if (!(stop > start)) invalid("time grid stop must exceed start");
  std::vector<double> times(static_cast<std::size_t>(grid.points));
  for (int i = 0; i < grid.points; ++i) {
    const double f = static_cast<double>(i) / (grid.points - 1);
    times[static_cast<std::size_t>(i)] =
        grid.spacing == GridSpacing::linear ? start + f * (stop - start) : start * std::pow(stop / start, f);
  }
  times.back() = stop;
  return times;
}

std::vector<std::string> regime_warnings(const CloudParams& cloud) {
  std::vector<std::string> out;
  std::ostringstream os;
  if (cloud.k0r0() < 5.0) {
    os << "k0R0 = " << cloud.k0r0() << ": sample is not much larger than the resonant wavelength (k0R0 >> 1 fails)";
    out.push_back(os.str());
    os.str("");
  }
  if (cloud.optical_density() < 1.0) {
    os << "N (k0R0)^-2 = " << cloud.optical_density()
       << ": fewer than one atom per wavelength-wide cylinder; collective forward emission does not dominate";
    out.push_back(os.str());
  }
  return out;
}

}  // namespace coopemit
