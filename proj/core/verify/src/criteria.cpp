#include "coopemit/verify/criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "coopemit/dicke.hpp"
#include "coopemit/dynamics.hpp"
#include "coopemit/ensemble.hpp"
#include "coopemit/kernel.hpp"
#include "coopemit/observables.hpp"
#include "coopemit/random.hpp"
#include "coopemit/verify/oracles.hpp"

namespace coopemit::verify {

namespace {

using cplx = std::complex<double>;

AtomicCloud gaussian_cloud(int n, double k0r0, std::uint64_t seed) {
  CloudParams p;
  p.n_atoms = n;
  p.k0 = 1.0;
  p.r0 = k0r0;
  p.gamma1 = 1.0;
  p.seed = seed;
  return sample_cloud(p);
}

// Criterion-specific seed streams so that criteria do not share clouds.
std::uint64_t stream(const AcceptanceContext& ctx, int criterion) {
  return ctx.seed + 1'000'003ULL * static_cast<std::uint64_t>(criterion);
}

class Recorder {
 public:
  Recorder(int id, std::string title, double budget) : start_(std::chrono::steady_clock::now()) {
    r_.id = id;
    r_.title = std::move(title);
    r_.runtime_budget_seconds = budget;
    r_.passed = true;
  }

  void metric(const std::string& name, double value) { r_.metrics.emplace_back(name, value); }

  /// Records `value` and requires lo <= value <= hi.
  void require_range(const std::string& name, double value, double lo, double hi) {
    metric(name, value);
    if (!(value >= lo && value <= hi)) {
      r_.passed = false;
      std::ostringstream os;
      os.precision(6);
      os << name << " = " << value << " outside [" << lo << ", " << hi << "]";
      r_.notes.push_back(os.str());
    }
  }
  void require_le(const std::string& name, double value, double bound) { require_range(name, value, -INFINITY, bound); }
  void require_ge(const std::string& name, double value, double bound) { require_range(name, value, bound, INFINITY); }

  void note(std::string text) { r_.notes.push_back(std::move(text)); }
  bool passed() const { return r_.passed; }

  CriterionResult finish() {
    r_.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return r_;
  }

 private:
  CriterionResult r_;
  std::chrono::steady_clock::time_point start_;
};

constexpr double kMinutes = 600.0;

}  // namespace

CriterionResult kernel_oracle(const AcceptanceContext& ctx) {
  Recorder rec(1, "kernel matrix vs brute-force double loop (N=6, 10 clouds)", 1.0);
  double entry_err = 0.0;
  double recon_err = 0.0;
  for (int i = 0; i < 10; ++i) {
    const AtomicCloud cloud = gaussian_cloud(6, 2.0, realization_seed(stream(ctx, 1), static_cast<std::uint64_t>(i)));
    const DecayMatrix dm = build_decay_matrix(cloud);
    entry_err = std::max(entry_err, (dm.gamma() - oracle::brute_force_decay_matrix(cloud)).cwiseAbs().maxCoeff());
    recon_err = std::max(recon_err, dm.reconstruction_error());
  }
  rec.require_le("max_entry_error", entry_err, 1e-12);
  rec.require_le("max_reconstruction_error", recon_err, 1e-10);
  return rec.finish();
}

CriterionResult gauge_spectrum(const AcceptanceContext& ctx) {
  Recorder rec(2, "alpha-frame and beta-frame spectra agree (N=64)", 1.0);
  const AtomicCloud cloud = gaussian_cloud(64, 4.0, stream(ctx, 2));
  const Eigen::MatrixXd alpha = alpha_frame_matrix(cloud);
  const DecayMatrix beta = build_decay_matrix(cloud);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> real_solver(alpha, Eigen::EigenvaluesOnly);
  rec.require_le("max_eigenvalue_difference", (real_solver.eigenvalues() - beta.eigenvalues()).cwiseAbs().maxCoeff(), 1e-10);
  const Eigen::VectorXcd d = beta_gauge(cloud);
  const Eigen::MatrixXcd conjugated = d.asDiagonal() * alpha.cast<cplx>() * d.conjugate().asDiagonal();
  rec.require_le("gauge_conjugation_error", (conjugated - beta.gamma()).cwiseAbs().maxCoeff(), 1e-13);
  return rec.finish();
}

CriterionResult dicke_basis(const AcceptanceContext& ctx) {
  Recorder rec(3, "Dicke basis orthonormality and {N-1,1} closure (N=2,5,16)", 1.0);
  GaussianStream rng(stream(ctx, 3));
  double gram_err = 0.0, leakage = 0.0, residual = 0.0;
  for (int n : {2, 5, 16}) {
    const DickeBasis basis = build_basis(n, BasisMode::exact);
    gram_err = std::max(gram_err, (oracle::brute_force_gram(basis) - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());
    for (int k = 0; k < 20; ++k) {
      const int j = static_cast<int>(rng.uniform_open0() * n - 1e-12);
      int l = static_cast<int>(rng.uniform_open0() * (n - 1) - 1e-12);
      if (l >= j) ++l;
      const SymmetryCheck check = symmetry_check(basis, j, l);
      leakage = std::max(leakage, check.symmetric_leakage);
      residual = std::max(residual, check.span_residual);
    }
  }
  rec.require_le("max_gram_error", gram_err, 1e-12);
  rec.require_le("max_symmetric_leakage", leakage, 1e-12);
  rec.require_le("max_span_residual", residual, 1e-12);
  return rec.finish();
}

CriterionResult exact_dynamics(const AcceptanceContext& ctx) {
  Recorder rec(4, "spectral evolution vs adaptive RKF78 integration (N=6, gamma1 t in [0,5])", 5.0);
  const AtomicCloud cloud = gaussian_cloud(6, 2.0, stream(ctx, 4));
  const DecayMatrix dm = build_decay_matrix(cloud);
  const AmplitudeState psi0 = initial_state(cloud);
  double err = 0.0;
  for (int i = 0; i <= 50; ++i) {
    const double t = 0.1 * i;
    const Eigen::VectorXcd reference = oracle::ode_evolve(dm.gamma(), psi0.amplitudes, t);
    err = std::max(err, (evolve(psi0, dm, t).amplitudes - reference).cwiseAbs().maxCoeff());
  }
  rec.require_le("max_amplitude_difference", err, 1e-8);
  return rec.finish();
}

CriterionResult gamma_col_scaling(const AcceptanceContext& ctx) {
  Recorder rec(5, "gamma_col scaling: slope vs N, slope vs k0R0, prefactor", kMinutes);
  SweepSpec spec;
  spec.n_values = {128, 256, 512, 1024};
  spec.k0r0_for_n_axis = 10.0;
  spec.k0r0_values = {6.0, 10.0, 16.0, 24.0};
  spec.n_for_k0r0_axis = 512;
  spec.realizations = ctx.config.c5_realizations;
  spec.seed = stream(ctx, 5);
  spec.threads = ctx.threads;
  spec.compute_gamma_r = false;
  const EnsembleReport report = scaling_sweep(spec);

  rec.require_range("slope_gamma_col_vs_N", report.exponent("gamma_col_vs_N")->fit.slope, 0.9, 1.1);
  rec.require_range("slope_gamma_col_vs_k0R0", report.exponent("gamma_col_vs_k0R0")->fit.slope, -2.2, -1.8);
  double worst_low = INFINITY, worst_high = 0.0;
  for (const auto& pt : report.points) {
    const double ratio = pt.gamma_col.mean / pt.analytic_gamma_col();
    worst_low = std::min(worst_low, ratio);
    worst_high = std::max(worst_high, ratio);
  }
  rec.require_range("min_prefactor_ratio", worst_low, 0.5, 2.0);
  rec.require_range("max_prefactor_ratio", worst_high, 0.5, 2.0);

  // Ground truth: the streamed quadratic form must equal the literal double sum.
  double sum_err = 0.0;
  for (const auto& pt : report.points) {
    const auto& r = pt.records.front();
    CloudParams p;
    p.n_atoms = pt.n_atoms;
    p.r0 = pt.k0r0;
    p.seed = r.seed;
    sum_err = std::max(sum_err, std::abs(r.gamma_col - oracle::brute_force_gamma_col(sample_cloud(p))) / r.gamma_col);
  }
  rec.require_le("double_sum_relative_error", sum_err, 1e-10);

  if (const auto* e = report.exponent("gamma_col_cooperative_vs_N")) rec.metric("diag_slope_cooperative_vs_N", e->fit.slope);
  if (const auto* e = report.exponent("gamma_col_cooperative_vs_k0R0"))
    rec.metric("diag_slope_cooperative_vs_k0R0", e->fit.slope);
  double oracle_dev = 0.0;
  for (const auto& pt : report.points) {
    const double expect = oracle::gaussian_mean_gamma_col(pt.n_atoms, pt.k0r0);
    oracle_dev = std::max(oracle_dev, std::abs(pt.gamma_col.mean - expect) / pt.gamma_col.std_error);
  }
  rec.metric("diag_max_deviation_from_gaussian_mean_in_stderr", oracle_dev);
  if (!rec.passed())
    rec.note("the j=j' terms (F(0)=1) add gamma1 to every realization; the "
             "cooperative part gamma_col - gamma1 carries the N (k0R0)^-2 law (see diag_* metrics)");
  return rec.finish();
}

CriterionResult perturbative_chain(const AcceptanceContext& ctx) {
  Recorder rec(6, "perturbative chain: |c_sym| vs exp(-gamma_col t) (N=512) and two-level reduction vs exact (N=8)", 60.0);
  {
    const AtomicCloud cloud = gaussian_cloud(512, 12.0, stream(ctx, 6));
    const DecayMatrix dm = build_decay_matrix(cloud);
    const DickeBasis basis = build_basis(512, BasisMode::exact);
    const PerturbativeModel model = build_symmetric_couplings(dm.gamma(), basis);
    const AmplitudeState psi0 = initial_state(cloud);
    double worst = 0.0;
    for (int i = 0; i <= 20; ++i) {
      const double t = 0.1 * i / model.gamma_col;
      const double c_sym = std::abs(project(evolve(psi0, dm, t), basis).c_sym);
      const double first_order = std::exp(-model.gamma_col * t);
      worst = std::max(worst, std::abs(c_sym - first_order) / first_order);
    }
    rec.metric("gamma_col", model.gamma_col);
    rec.require_le("max_relative_deviation_c_sym", worst, 0.10);
    if (!rec.passed())
      rec.note("the collective rate seen by atom j depends at O(1) on its transverse position, so the symmetric "
               "state is far from an eigenvector of Gamma and |c_sym| leaves the single exponential");
  }
  {
    const AtomicCloud cloud = gaussian_cloud(8, 2.0, stream(ctx, 6) + 1);
    const DecayMatrix dm = build_decay_matrix(cloud);
    const DickeBasis basis = build_basis(8, BasisMode::exact);
    const PerturbativeModel model = build_perturbative_model(dm.gamma(), basis);
    std::vector<double> times;
    for (int i = 0; i <= 50; ++i) times.push_back(0.1 * i);
    const PerturbativeSeries series = solve_perturbative(model, times, PerturbativeMethod::full);
    const AmplitudeState psi0 = initial_state(cloud);
    double err = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const DickeProjection exact = project(evolve(psi0, dm, times[i]), basis);
      err = std::max(err, std::abs(exact.c_sym - series.c_sym[i]));
      err = std::max(err, (exact.c_f - series.c_f[i]).cwiseAbs().maxCoeff());
    }
    rec.require_le("max_reduction_vs_exact_difference", err, 1e-8);
  }
  return rec.finish();
}

CriterionResult mixing_amplitude(const AcceptanceContext& ctx) {
  Recorder rec(7, "mixing amplitude: correlation with closed form (N=1024) and weight scaling", 300.0);
  const int n = 1024;
  const DickeBasis basis = build_basis(n, BasisMode::exact);
  {
    const AtomicCloud cloud = gaussian_cloud(n, 15.0, stream(ctx, 7));
    const PerturbativeModel model = build_symmetric_couplings(assemble_decay_matrix(cloud), basis);
    std::vector<double> numeric, closed;
    for (int l = 0; l < n - 1; ++l) {
      numeric.push_back(std::abs(model.s[l] / model.gamma_col));
      closed.push_back(std::abs(analytic_mixing_amplitude(cloud, l, INFINITY)));
    }
    rec.require_ge("pearson_r", pearson(numeric, closed), 0.9);
  }
  std::vector<double> kr{8.0, 12.0, 18.0}, weight;
  for (std::size_t k = 0; k < kr.size(); ++k) {
    double acc = 0.0;
    for (int i = 0; i < ctx.config.c7_realizations; ++i) {
      const AtomicCloud cloud =
          gaussian_cloud(n, kr[k], realization_seed(stream(ctx, 7) + 100 * (k + 1), static_cast<std::uint64_t>(i)));
      const PerturbativeModel model = build_symmetric_couplings(assemble_decay_matrix(cloud), basis);
      acc += (model.s / model.gamma_col).squaredNorm();
    }
    weight.push_back(acc / ctx.config.c7_realizations);
    rec.metric("subspace_weight_k0R0_" + std::to_string(static_cast<int>(kr[k])), weight.back());
  }
  rec.require_range("weight_exponent", fit_power_law(kr, weight).slope, -2.4, -1.6);
  if (!rec.passed())
    rec.note("s_l is dominated by transverse position dependence of the collective rate, not by the longitudinal "
             "phase k0 n0.r_l, so the {N-1,1} weight stays O(1) at every k0R0");
  return rec.finish();
}

CriterionResult afterglow_rate(const AcceptanceContext& ctx) {
  Recorder rec(8, "afterglow rate <h|Gamma|h>: slope vs k0R0, slope vs N, prefactor", kMinutes);
  SweepSpec spec;
  spec.k0r0_values = {6.0, 10.0, 16.0};
  spec.n_for_k0r0_axis = 512;
  spec.n_values = {128, 512, 2048};
  spec.k0r0_for_n_axis = ctx.config.c8_k0r0_for_n_axis;
  spec.realizations = ctx.config.c8_realizations;
  spec.seed = stream(ctx, 8);
  spec.threads = ctx.threads;
  const EnsembleReport report = scaling_sweep(spec);

  rec.require_range("slope_gamma_r_vs_k0R0", report.exponent("gamma_r_vs_k0R0")->fit.slope, -4.3, -3.7);
  rec.require_range("slope_gamma_r_vs_N", report.exponent("gamma_r_vs_N")->fit.slope, 0.85, 1.15);
  double worst_low = INFINITY, worst_high = 0.0;
  for (const auto& pt : report.points) {
    const double ratio = pt.gamma_r.mean / pt.analytic_gamma_r();
    worst_low = std::min(worst_low, ratio);
    worst_high = std::max(worst_high, ratio);
  }
  rec.require_range("min_prefactor_ratio", worst_low, 0.5, 2.0);
  rec.require_range("max_prefactor_ratio", worst_high, 0.5, 2.0);
  if (const auto* e = report.exponent("gamma_r_cooperative_vs_k0R0")) rec.metric("diag_slope_cooperative_vs_k0R0", e->fit.slope);
  if (const auto* e = report.exponent("gamma_r_cooperative_vs_N")) rec.metric("diag_slope_cooperative_vs_N", e->fit.slope);
  for (const auto& pt : report.points) {
    if (pt.axis == SweepAxis::k0r0)
      rec.metric("diag_mean_gamma_r_k0R0_" + std::to_string(static_cast<int>(pt.k0r0)), pt.gamma_r.mean);
  }
  if (!rec.passed())
    rec.note("<h|Gamma|h> contains the diagonal gamma1 |h|^2 = gamma1 (incoherent single-atom emission), which the "
             "closed form gamma1 N / (2 k0^4 R0^4) omits");
  return rec.finish();
}

CriterionResult forward_directivity(const AcceptanceContext& ctx) {
  Recorder rec(9, "forward directivity of the timed Dicke state (N=512, k0R0=10)", 60.0);
  const int n = 512;
  const double k0r0 = 10.0;
  const AtomicCloud cloud = gaussian_cloud(n, k0r0, stream(ctx, 9));
  const AmplitudeState psi0 = initial_state(cloud);
  const double peak = directional_intensity(psi0, cloud, cloud.params().n0);
  rec.require_le("peak_relative_error", std::abs(peak - n) / n, 1e-12);
  const AngularPattern pattern = angular_pattern(psi0, cloud);
  rec.require_ge("forward_fraction", pattern.forward_fraction, 0.5 + 1e-15);
  const double width = forward_half_width(psi0, cloud);
  const double expected = oracle::gaussian_lobe_half_width(n, k0r0);
  rec.metric("half_width", width);
  rec.metric("half_width_oracle", expected);
  rec.require_le("half_width_relative_error", std::abs(width - expected) / expected, 0.20);
  const double total = initial_state(cloud).amplitudes.dot(assemble_decay_matrix(cloud) * psi0.amplitudes).real();
  rec.require_le("closure_relative_error", std::abs(pattern.total_rate - total) / total, 1e-6);
  return rec.finish();
}

CriterionResult retardation_buildup(const AcceptanceContext& ctx) {
  Recorder rec(10, "retarded decay matrix: early-time diagonal, late-time static limit (N=32)", 10.0);
  const double k0r0 = ctx.config.c10_k0r0;
  const AtomicCloud cloud = gaussian_cloud(32, k0r0, stream(ctx, 10));
  const Eigen::MatrixXd d = pair_distances(cloud);
  double d_min = INFINITY;
  for (int i = 0; i < d.rows(); ++i)
    for (int j = i + 1; j < d.cols(); ++j) d_min = std::min(d_min, d(i, j));

  Eigen::MatrixXcd early = decay_matrix_retarded(cloud, 0.01 * d_min, 16);
  early.diagonal().setZero();
  rec.metric("early_max_offdiagonal_entry", early.cwiseAbs().maxCoeff());
  rec.require_le("early_offdiagonal_frobenius_norm", early.norm(), 1e-3);
  const Eigen::MatrixXcd late = decay_matrix_retarded(cloud, 10.0 * k0r0, 16);
  rec.require_le("late_vs_static_max_difference", (late - assemble_decay_matrix(cloud)).cwiseAbs().maxCoeff(), 1e-6);
  if (!rec.passed())
    rec.note("the light-cone band |n.dr| < ct covers a fraction ct/|dr| of the sphere, so the closest pair keeps "
             "|Gamma| ~ 0.01 gamma1 at ct = 0.01 d_min");
  return rec.finish();
}

std::vector<CriterionResult> run_criteria(const AcceptanceContext& ctx,
                                          const std::function<void(const CriterionResult&)>& on_result) {
  using Fn = CriterionResult (*)(const AcceptanceContext&);
  const Fn all[] = {kernel_oracle,      gauge_spectrum,    dicke_basis,      exact_dynamics,      gamma_col_scaling,
                    perturbative_chain, mixing_amplitude,  afterglow_rate,   forward_directivity, retardation_buildup};
  std::vector<CriterionResult> out;
  for (Fn f : all) {
    out.push_back(f(ctx));
    if (on_result) on_result(out.back());
  }
  return out;
}

void write_records(const std::vector<CriterionResult>& results, std::ostream& out) {
  for (const auto& r : results) {
    nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = v;
    nlohmann::ordered_json rec;
    rec["criterion"] = r.id;
    rec["title"] = r.title;
    rec["passed"] = r.passed;
    rec["metrics"] = metrics;
    rec["notes"] = r.notes;
    out << rec.dump() << '\n';
  }
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream os;
  os.precision(4);
  const bool ok = r.passed && r.within_budget();
  os << (ok ? "[PASS] " : "[FAIL] ") << 'C' << r.id << ' ' << r.title << " (" << r.runtime_seconds << " s / budget "
     << r.runtime_budget_seconds << " s)";
  for (const auto& [k, v] : r.metrics) os << "\n         " << k << " = " << v;
  if (!r.within_budget()) os << "\n         runtime budget exceeded";
  for (const auto& note : r.notes) os << "\n         note: " << note;
  return os.str();
}

}  // namespace coopemit::verify
