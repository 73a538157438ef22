#include "coopemit/tools/runner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "coopemit/dicke.hpp"
#include "coopemit/dynamics.hpp"
#include "coopemit/ensemble.hpp"
#include "coopemit/errors.hpp"
#include "coopemit/kernel.hpp"
#include "coopemit/observables.hpp"
#include "coopemit/verify/criteria.hpp"

namespace coopemit::tools {

namespace {

using json = nlohmann::ordered_json;

// Full ODE integration of the two-level reduction is O(N^2) per step.
constexpr int kMaxFullPerturbativeAtoms = 64;
constexpr int kMaxRetardationAtoms = 512;
constexpr int kRetardationPoints = 12;
constexpr int kPolarSamples = 181;

/// Files staged in memory so a failing run leaves nothing half written.
class Artifacts {
 public:
  std::ostream& open(const std::string& name) { return files_[name]; }

  std::vector<std::filesystem::path> commit(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    for (auto& [name, buffer] : files_) {
      const auto target = dir / name;
      const auto tmp = dir / (name + ".part");
      {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << buffer.str();
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
      }
      std::filesystem::rename(tmp, target);
      written.push_back(target);
    }
    return written;
  }

 private:
  std::map<std::string, std::ostringstream> files_;
};

std::ostream& full_precision(std::ostream& os) { return os << std::setprecision(17); }

void regime_block(std::ostream& os, const CloudParams& p) {
  os << "regime\n"
     << "  N                 " << p.n_atoms << "\n"
     << "  k0R0              " << p.k0r0() << "\n"
     << "  N (k0R0)^-2       " << p.optical_density() << "\n";
  const auto warnings = regime_warnings(p);
  if (warnings.empty()) os << "  warnings          none\n";
  for (const auto& w : warnings) os << "  WARNING           " << w << "\n";
}

json regime_json(const CloudParams& p) {
  json j;
  j["n_atoms"] = p.n_atoms;
  j["k0r0"] = p.k0r0();
  j["optical_density"] = p.optical_density();
  j["warnings"] = regime_warnings(p);
  return j;
}

std::vector<double> window(const std::vector<double>& t, const std::vector<double>& y, double lo, double hi,
                           std::vector<double>& t_out) {
  std::vector<double> out;
  t_out.clear();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= lo && t[i] <= hi && y[i] > 0.0 && std::isfinite(std::log(y[i]))) {
      t_out.push_back(t[i]);
      out.push_back(y[i]);
    }
  }
  return out;
}

std::optional<RateFit> fit_window(const std::vector<double>& t, const std::vector<double>& y, double lo, double hi) {
  std::vector<double> tw;
  const auto yw = window(t, y, lo, hi, tw);
  if (tw.size() < 4 || tw.front() == tw.back()) return std::nullopt;
  return fit_rate(tw, yw);
}

json rate_json(const std::optional<RateFit>& f, double lo, double hi) {
  if (!f) return nullptr;
  json j;
  j["window_inv_gamma1"] = {lo, hi};
  j["rate_gamma1"] = f->rate;
  j["std_error_gamma1"] = f->std_error;
  j["log_intercept"] = f->log_intercept;
  return j;
}

RunOutcome run_single(const RunConfig& cfg, std::ostream& log, bool quiet) {
  const CloudParams& p = cfg.cloud;
  const int n = p.n_atoms;
  Artifacts art;
  std::ostringstream summary;
  full_precision(summary);
  summary << std::setprecision(6);
  summary << "coopemit single run, seed " << cfg.seed << "\n";
  regime_block(summary, p);

  const AtomicCloud cloud = sample_cloud(p);
  const DecayMatrix dm = build_decay_matrix(cloud);
  const std::vector<double> times = make_time_grid(cfg.time_grid, p);
  const AmplitudeState psi0 = initial_state(cloud);
  const double gcol = psi0.amplitudes.dot(dm.gamma() * psi0.amplitudes).real();

  json results;
  results["mode"] = "single";
  results["seed"] = cfg.seed;
  results["regime"] = regime_json(p);
  json spectrum;
  spectrum["min_eigenvalue_gamma1"] = dm.eigenvalues().minCoeff();
  spectrum["max_eigenvalue_gamma1"] = dm.eigenvalues().maxCoeff();
  spectrum["trace_gamma1"] = dm.eigenvalues().sum();
  spectrum["reconstruction_error_gamma1"] = dm.reconstruction_error();
  results["spectrum"] = spectrum;

  json rates;
  rates["gamma_col_gamma1"] = gcol;
  rates["gamma_col_analytic_gamma1"] = analytic_gamma_col(p);
  rates["gamma_col_cooperative_gamma1"] = gcol - p.gamma1;

  std::optional<DickeBasis> basis;
  if (n >= 2) basis = build_basis(n, BasisMode::exact);

  // Exact evolution on the time grid.
  std::vector<double> survival(times.size());
  std::vector<DickeProjection> projections;
  std::ostream* amps = cfg.single.export_amplitudes ? &full_precision(art.open("amplitudes.csv")) : nullptr;
  if (amps) *amps << "t_inv_gamma1,j,beta_re,beta_im\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    const AmplitudeState psi = evolve(psi0, dm, times[i]);
    survival[i] = survival_probability(psi);
    if (basis) projections.push_back(project(psi, *basis));
    if (amps)
      for (int j = 0; j < n; ++j)
        *amps << times[i] << ',' << j << ',' << psi.amplitudes[j].real() << ',' << psi.amplitudes[j].imag() << '\n';
  }
  {
    auto& os = full_precision(art.open("survival.csv"));
    os << "t_inv_gamma1,survival";
    if (basis) os << ",c_sym_re,c_sym_im,f_weight";
    os << '\n';
    for (std::size_t i = 0; i < times.size(); ++i) {
      os << times[i] << ',' << survival[i];
      if (basis) {
        const auto& pr = projections[i];
        os << ',' << pr.c_sym.real() << ',' << pr.c_sym.imag() << ',' << pr.c_f.squaredNorm();
      }
      os << '\n';
    }
  }

  // Early window resolves the collective rate, late window the afterglow.
  const double early_hi = 1.0 / gcol;
  const double late_lo = 5.0 / gcol;
  const auto early = fit_window(times, survival, 0.0, early_hi);
  const auto late = fit_window(times, survival, late_lo, times.back());
  json fits;
  fits["early"] = rate_json(early, 0.0, early_hi);
  fits["late"] = rate_json(late, late_lo, times.back());
  results["survival_fits"] = fits;

  summary << "rates [gamma1]\n"
          << "  gamma_col         " << gcol << "  (analytic " << analytic_gamma_col(p) << ")\n";
  if (early) summary << "  early fit rate    " << early->rate << " +- " << early->std_error << "  (survival = |c|^2)\n";

  if (n >= 2) {
    const AfterglowState ag = afterglow_state(cloud);
    const AfterglowRate gr = gamma_r(cloud, ag, dm);
    rates["gamma_r_gamma1"] = gr.hermitian;
    rates["gamma_r_unconjugated_re_gamma1"] = gr.unconjugated.real();
    rates["gamma_r_unconjugated_im_gamma1"] = gr.unconjugated.imag();
    rates["gamma_r_analytic_gamma1"] = gr.analytic;
    rates["gamma_r_cooperative_gamma1"] = gr.hermitian - p.gamma1;
    rates["afterglow_norm"] = ag.a_norm;
    rates["afterglow_norm_analytic"] = ag.a_norm_analytic;
    summary << "  gamma_r <h|G|h>   " << gr.hermitian << "  (analytic " << gr.analytic << ")\n";
    if (late) summary << "  late fit rate     " << late->rate << " +- " << late->std_error << "\n";
  }
  results["rates"] = rates;

  if (cfg.single.angular_pattern) {
    PatternSpec spec;
    spec.order = cfg.sphere_order;
    const AngularPattern pattern = angular_pattern(psi0, cloud, spec);
    json ang;
    ang["peak_intensity_gamma1"] = directional_intensity(psi0, cloud, p.n0);
    ang["total_rate_gamma1"] = pattern.total_rate;
    ang["closure_error_gamma1"] = pattern.total_rate - gcol;
    ang["theta_c_rad"] = pattern.theta_c;
    ang["forward_fraction"] = pattern.forward_fraction;
    ang["quadrature_points"] = pattern.directions.size();
    ang["half_width_rad"] = nullptr;
    if (n >= 2) {
      try {
        ang["half_width_rad"] = forward_half_width(psi0, cloud);
      } catch (const NumericalError&) {
        summary << "angular: forward lobe never falls to half maximum, half width undefined\n";
      }
    }
    results["angular"] = ang;

    std::vector<double> thetas(kPolarSamples);
    for (int i = 0; i < kPolarSamples; ++i) thetas[i] = std::numbers::pi * i / (kPolarSamples - 1);
    const auto profile = polar_profile(psi0, cloud, thetas, 64);
    auto& os = full_precision(art.open("angular.csv"));
    os << "theta_rad,intensity_gamma1\n";
    for (int i = 0; i < kPolarSamples; ++i) os << thetas[i] << ',' << profile[i] << '\n';
    summary << "angular\n"
            << "  peak at n0        " << ang["peak_intensity_gamma1"].get<double>() << " gamma1\n"
            << "  forward fraction  " << pattern.forward_fraction << "  (theta_c = " << pattern.theta_c << ")\n";
  }

  if (cfg.single.perturbative && basis) {
    const bool full = n <= kMaxFullPerturbativeAtoms;
    const PerturbativeModel model =
        full ? build_perturbative_model(dm.gamma(), *basis) : build_symmetric_couplings(dm.gamma(), *basis);
    const auto first = solve_perturbative(model, times, PerturbativeMethod::first_order);
    std::optional<PerturbativeSeries> complete;
    if (full) complete = solve_perturbative(model, times, PerturbativeMethod::full);
    auto& os = full_precision(art.open("perturbative.csv"));
    os << "t_inv_gamma1,c_sym_abs_exact,c_sym_abs_first_order,f_weight_exact,f_weight_first_order";
    if (complete) os << ",c_sym_abs_full,f_weight_full";
    os << '\n';
    for (std::size_t i = 0; i < times.size(); ++i) {
      os << times[i] << ',' << std::abs(projections[i].c_sym) << ',' << std::abs(first.c_sym[i]) << ','
         << projections[i].c_f.squaredNorm() << ',' << first.c_f[i].squaredNorm();
      if (complete) os << ',' << std::abs(complete->c_sym[i]) << ',' << complete->c_f[i].squaredNorm();
      os << '\n';
    }
    json pert;
    pert["gamma_col_gamma1"] = model.gamma_col;
    pert["gamma_col_imag_gamma1"] = model.gamma_col_imag;
    pert["mixing_norm"] = model.s.norm();
    pert["saturated_f_weight"] = (model.s / model.gamma_col).squaredNorm();
    pert["full_integration"] = full;
    results["perturbative"] = pert;
    if (!full) summary << "perturbative: first order only (full integration limited to N <= " << kMaxFullPerturbativeAtoms << ")\n";
  }

  if (n >= 2 && n <= kMaxRetardationAtoms) {
    const Eigen::MatrixXd d = pair_distances(cloud);
    double d_min = INFINITY;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) d_min = std::min(d_min, d(i, j));
    const double d_max = d.maxCoeff();
    if (d_min > 0.0) {
      auto& os = full_precision(art.open("retardation.csv"));
      os << "ct_inv_k0,offdiag_frobenius_gamma1,max_diff_static_gamma1\n";
      for (int i = 0; i < kRetardationPoints; ++i) {
        const double ct = 0.01 * d_min * std::pow(1.2 * d_max / (0.01 * d_min), i / (kRetardationPoints - 1.0));
        Eigen::MatrixXcd g = decay_matrix_retarded(cloud, ct, cfg.retarded_order);
        const double diff = (g - dm.gamma()).cwiseAbs().maxCoeff();
        g.diagonal().setZero();
        os << ct << ',' << g.norm() << ',' << diff << '\n';
      }
    }
  } else if (n > kMaxRetardationAtoms) {
    summary << "retardation: skipped (limited to N <= " << kMaxRetardationAtoms << ")\n";
  }

  if (cfg.single.export_positions) write_positions_csv(cloud, art.open("positions.csv"));
  art.open("results.json") << results.dump(2) << '\n';
  art.open("summary.txt") << summary.str();

  RunOutcome out;
  out.files = art.commit(cfg.output_dir);
  if (!quiet) log << summary.str();
  return out;
}

RunOutcome run_sweep(const RunConfig& cfg, std::ostream& log, bool quiet) {
  SweepSpec spec = cfg.sweep;
  spec.seed = cfg.seed;
  spec.threads = cfg.threads;
  const EnsembleReport report = scaling_sweep(spec);

  Artifacts art;
  write_records(report, full_precision(art.open("records.ndjson")));
  write_summary_csv(report, full_precision(art.open("summary.csv")));

  std::ostringstream summary;
  summary << std::setprecision(6);
  summary << "coopemit sweep, seed " << cfg.seed << ", " << spec.realizations << " realizations per point\n";
  for (const auto& pt : report.points) {
    CloudParams p;
    p.n_atoms = pt.n_atoms;
    p.r0 = pt.k0r0;
    summary << (pt.axis == SweepAxis::n_atoms ? "[N axis] " : "[k0R0 axis] ") << "N = " << pt.n_atoms
            << ", k0R0 = " << pt.k0r0 << ", N (k0R0)^-2 = " << pt.optical_density() << ", <gamma_col> = "
            << pt.gamma_col.mean << " +- " << pt.gamma_col.std_error;
    if (spec.compute_gamma_r) summary << ", <gamma_r> = " << pt.gamma_r.mean << " +- " << pt.gamma_r.std_error;
    summary << '\n';
    for (const auto& w : regime_warnings(p)) summary << "  WARNING " << w << '\n';
  }
  summary << "fitted exponents\n";
  for (const auto& e : report.exponents)
    summary << "  " << std::left << std::setw(34) << e.name << std::right << e.fit.slope << "  95% CI [" << e.fit.ci_low
            << ", " << e.fit.ci_high << "]\n";
  art.open("summary.txt") << summary.str();

  RunOutcome out;
  out.files = art.commit(cfg.output_dir);
  if (!quiet) log << summary.str();
  return out;
}

RunOutcome run_acceptance(const RunConfig& cfg, std::ostream& log, bool quiet) {
  verify::AcceptanceContext ctx;
  ctx.config = cfg.acceptance;
  ctx.seed = cfg.seed;
  ctx.threads = cfg.threads;
  const auto results = verify::run_criteria(ctx, [&](const verify::CriterionResult& r) {
    if (!quiet) log << verify::format_line(r) << std::endl;
  });

  Artifacts art;
  verify::write_records(results, art.open("acceptance.ndjson"));
  std::ostringstream summary;
  int failed = 0;
  for (const auto& r : results) {
    summary << verify::format_line(r) << '\n';
    if (!r.passed || !r.within_budget()) ++failed;
  }
  summary << failed << " of " << results.size() << " criteria failed\n";
  art.open("acceptance.txt") << summary.str();

  RunOutcome out;
  out.files = art.commit(cfg.output_dir);
  out.exit_code = failed ? kAcceptanceFailed : kOk;
  if (!quiet) log << failed << " of " << results.size() << " criteria failed\n";
  return out;
}

}  // namespace

RunOutcome run(const RunConfig& config, const RunOptions& options) {
  config.validate();
  std::ostream& log = options.log ? *options.log : std::cerr;
  switch (config.mode) {
    case RunMode::single:
      return run_single(config, log, options.quiet);
    case RunMode::sweep:
      return run_sweep(config, log, options.quiet);
    case RunMode::acceptance:
      return run_acceptance(config, log, options.quiet);
  }
  throw ParameterError("unknown run mode");
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Cooperative single-photon emission of N two-level atoms"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  bool quiet = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "base seed");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", quiet, "suppress progress output");
  };
  CLI::App* single = app.add_subcommand("single", "one realization: dynamics, rates, angular pattern");
  CLI::App* sweep = app.add_subcommand("sweep", "ensemble scaling sweep with exponent fits");
  CLI::App* accept = app.add_subcommand("accept", "run the acceptance criteria");
  for (auto* sub : {single, sweep, accept}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigParse;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    cfg.mode = single->parsed() ? RunMode::single : sweep->parsed() ? RunMode::sweep : RunMode::acceptance;
    if (app.get_subcommands().front()->count("--seed")) {
      cfg.seed = seed;
      cfg.cloud.seed = seed;
    }
    if (threads > 0) cfg.threads = threads;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    cfg.validate();
    RunOptions options;
    options.quiet = quiet;
    const RunOutcome outcome = run(cfg, options);
    if (!quiet)
      for (const auto& f : outcome.files) std::cerr << "wrote " << f.string() << '\n';
    return outcome.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << (e.kind() == ConfigError::Kind::parse ? "config parse error: " : "config validation error: ")
              << e.what() << '\n';
    return e.kind() == ConfigError::Kind::parse ? kConfigParse : kConfigValidation;
  } catch (const ParameterError& e) {
    std::cerr << "config validation error: " << e.what() << '\n';
    return kConfigValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"coopemit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace coopemit::tools
