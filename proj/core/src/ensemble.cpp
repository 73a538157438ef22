#include "coopemit/ensemble.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "coopemit/dynamics.hpp"
#include "coopemit/errors.hpp"
#include "coopemit/kernel.hpp"
#include "coopemit/parallel.hpp"
#include "coopemit/random.hpp"

namespace coopemit {

void SweepSpec::validate() const {
  if (n_values.empty() && k0r0_values.empty()) throw ParameterError("sweep has no points");
  if (!n_values.empty() && static_cast<int>(n_values.size()) < kMinPointsPerAxis)
    throw ParameterError("N axis needs at least 3 points for an exponent fit");
  if (!k0r0_values.empty() && static_cast<int>(k0r0_values.size()) < kMinPointsPerAxis)
    throw ParameterError("k0R0 axis needs at least 3 points for an exponent fit");
  if (realizations < kMinRealizations) throw ParameterError("exponent fits need at least 50 realizations per point");
  for (int n : n_values)
    if (n < 2) throw ParameterError("sweep N values must be >= 2");
  for (double k : k0r0_values)
    if (!(k > 0.0)) throw ParameterError("sweep k0R0 values must be positive");
  if (!(k0r0_for_n_axis > 0.0)) throw ParameterError("k0R0 of the N axis must be positive");
  if (!k0r0_values.empty() && n_for_k0r0_axis < 2) throw ParameterError("N of the k0R0 axis must be >= 2");
}

double SweepPoint::analytic_gamma_col() const { return n_atoms / (k0r0 * k0r0); }
double SweepPoint::analytic_gamma_r() const { return n_atoms / (2.0 * std::pow(k0r0, 4)); }

const ExponentFit* EnsembleReport::exponent(const std::string& name) const {
  for (const auto& e : exponents)
    if (e.name == name) return &e;
  return nullptr;
}

namespace {

RealizationRecord run_realization(const SweepSpec& spec, int n_atoms, double k0r0, std::uint64_t seed) {
  CloudParams params;
  params.n_atoms = n_atoms;
  params.k0 = 1.0;
  params.r0 = k0r0;
  params.gamma1 = 1.0;
  params.seed = seed;
  const AtomicCloud cloud = spec.cloud_factory ? spec.cloud_factory(params) : sample_cloud(params);

  RealizationRecord rec;
  rec.seed = seed;
  std::vector<Eigen::VectorXcd> vectors{initial_state(cloud).amplitudes};
  if (spec.compute_gamma_r) vectors.push_back(afterglow_state(cloud).h);
  const auto forms = streamed_quadratic_forms(cloud, vectors);
  rec.gamma_col = forms[0];
  rec.gamma_r = spec.compute_gamma_r ? forms[1] : std::numeric_limits<double>::quiet_NaN();

  if (spec.compute_forward_fraction) rec.forward_fraction = angular_pattern(initial_state(cloud), cloud).forward_fraction;
  if (spec.fit_survival) {
    const DecayMatrix dm = build_decay_matrix(cloud);
    const AmplitudeState psi0 = initial_state(cloud);
    std::vector<double> times, values;
    for (int i = 0; i < 12; ++i) {
      const double t = (0.1 + 0.9 * i / 11.0) / rec.gamma_col;
      times.push_back(t);
      values.push_back(survival_probability(evolve(psi0, dm, t)));
    }
    rec.fitted_rate = fit_rate(times, values).rate;
  }
  return rec;
}

void summarize_point(SweepPoint& pt, const SweepSpec& spec) {
  std::vector<double> gc, gr, ff, fr, gcc, grc;
  for (const auto& r : pt.records) {
    gc.push_back(r.gamma_col);
    gcc.push_back(r.gamma_col - 1.0);
    if (spec.compute_gamma_r) {
      gr.push_back(r.gamma_r);
      grc.push_back(r.gamma_r - 1.0);
    }
    if (spec.compute_forward_fraction) ff.push_back(r.forward_fraction);
    if (r.fitted_rate) fr.push_back(*r.fitted_rate);
  }
  pt.gamma_col = summarize(gc);
  pt.gamma_col_cooperative = summarize(gcc);
  pt.gamma_r = summarize(gr);
  pt.gamma_r_cooperative = summarize(grc);
  pt.forward_fraction = summarize(ff);
  pt.fitted_rate = summarize(fr);
}

void add_fit(EnsembleReport& report, const std::string& name, const std::vector<double>& x, const std::vector<double>& y) {
  for (double v : y)
    if (!(v > 0.0)) return;  // log-log fit undefined; the point summaries still carry the data
  report.exponents.push_back({name, fit_power_law(x, y)});
}

}  // namespace

EnsembleReport scaling_sweep(const SweepSpec& spec) {
  spec.validate();
  EnsembleReport report;
  report.spec = spec;
  auto add_point = [&](SweepAxis axis, int n, double k) {
    SweepPoint& pt = report.points.emplace_back();
    pt.axis = axis;
    pt.n_atoms = n;
    pt.k0r0 = k;
  };
  for (int n : spec.n_values) add_point(SweepAxis::n_atoms, n, spec.k0r0_for_n_axis);
  for (double k : spec.k0r0_values) add_point(SweepAxis::k0r0, spec.n_for_k0r0_axis, k);

  const std::size_t per_point = static_cast<std::size_t>(spec.realizations);
  for (auto& pt : report.points) pt.records.resize(per_point);
  parallel_for(report.points.size() * per_point, spec.threads, [&](std::size_t task) {
    const std::size_t p = task / per_point;
    const std::size_t r = task % per_point;
    auto& pt = report.points[p];
    pt.records[r] = run_realization(spec, pt.n_atoms, pt.k0r0, realization_seed(spec.seed, task));
  });
  for (auto& pt : report.points) summarize_point(pt, spec);

  std::vector<double> ns, kr, gc_n, gr_n, gcc_n, grc_n, gc_k, gr_k, gcc_k, grc_k;
  for (const auto& pt : report.points) {
    if (pt.axis == SweepAxis::n_atoms) {
      ns.push_back(pt.n_atoms);
      gc_n.push_back(pt.gamma_col.mean);
      gcc_n.push_back(pt.gamma_col_cooperative.mean);
      gr_n.push_back(pt.gamma_r.mean);
      grc_n.push_back(pt.gamma_r_cooperative.mean);
    } else {
      kr.push_back(pt.k0r0);
      gc_k.push_back(pt.gamma_col.mean);
      gcc_k.push_back(pt.gamma_col_cooperative.mean);
      gr_k.push_back(pt.gamma_r.mean);
      grc_k.push_back(pt.gamma_r_cooperative.mean);
    }
  }
  if (!ns.empty()) {
    add_fit(report, "gamma_col_vs_N", ns, gc_n);
    add_fit(report, "gamma_col_cooperative_vs_N", ns, gcc_n);
    if (spec.compute_gamma_r) {
      add_fit(report, "gamma_r_vs_N", ns, gr_n);
      add_fit(report, "gamma_r_cooperative_vs_N", ns, grc_n);
    }
  }
  if (!kr.empty()) {
    add_fit(report, "gamma_col_vs_k0R0", kr, gc_k);
    add_fit(report, "gamma_col_cooperative_vs_k0R0", kr, gcc_k);
    if (spec.compute_gamma_r) {
      add_fit(report, "gamma_r_vs_k0R0", kr, gr_k);
      add_fit(report, "gamma_r_cooperative_vs_k0R0", kr, grc_k);
    }
  }
  return report;
}

namespace {

using nlohmann::json;

json optional_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json summary_json(const SampleSummary& s) {
  if (s.count == 0) return nullptr;
  return {{"mean", s.mean}, {"stderr", s.std_error}, {"median", s.median}, {"min", s.min}, {"max", s.max}, {"count", s.count}};
}

const char* axis_name(SweepAxis a) { return a == SweepAxis::n_atoms ? "N" : "k0R0"; }

}  // namespace

void write_records(const EnsembleReport& report, std::ostream& out) {
  const auto& spec = report.spec;
  out << json{{"type", "sweep"},
              {"seed", spec.seed},
              {"realizations", spec.realizations},
              {"units", {{"length", "1/k0"}, {"rate", "gamma1"}}}}
             .dump()
      << '\n';
  for (const auto& pt : report.points) {
    for (const auto& r : pt.records) {
      json rec{{"type", "realization"},
               {"axis", axis_name(pt.axis)},
               {"N", pt.n_atoms},
               {"k0R0", pt.k0r0},
               {"seed", r.seed},
               {"gamma_col", r.gamma_col},
               {"gamma_r", optional_number(r.gamma_r)}};
      if (spec.compute_forward_fraction) rec["forward_fraction"] = r.forward_fraction;
      if (r.fitted_rate) rec["fitted_rate"] = *r.fitted_rate;
      out << rec.dump() << '\n';
    }
    out << json{{"type", "point"},
                {"axis", axis_name(pt.axis)},
                {"N", pt.n_atoms},
                {"k0R0", pt.k0r0},
                {"optical_density", pt.optical_density()},
                {"analytic_gamma_col", pt.analytic_gamma_col()},
                {"analytic_gamma_r", pt.analytic_gamma_r()},
                {"gamma_col", summary_json(pt.gamma_col)},
                {"gamma_col_cooperative", summary_json(pt.gamma_col_cooperative)},
                {"gamma_r", summary_json(pt.gamma_r)},
                {"gamma_r_cooperative", summary_json(pt.gamma_r_cooperative)},
                {"forward_fraction", summary_json(pt.forward_fraction)},
                {"fitted_rate", summary_json(pt.fitted_rate)}}
               .dump()
        << '\n';
  }
  for (const auto& e : report.exponents) {
    out << json{{"type", "exponent"},
                {"name", e.name},
                {"slope", e.fit.slope},
                {"stderr", e.fit.std_error},
                {"ci95", {e.fit.ci_low, e.fit.ci_high}},
                {"log_prefactor", e.fit.log_prefactor}}
               .dump()
        << '\n';
  }
}

void write_summary_csv(const EnsembleReport& report, std::ostream& out) {
  const auto slope = [&](const char* name) -> std::string {
    const auto* e = report.exponent(name);
    if (!e) return "";
    std::ostringstream os;
    os.precision(6);
    os << e->fit.slope;
    return os.str();
  };
  const std::string s_col_n = slope("gamma_col_vs_N");
  const std::string s_col_k = slope("gamma_col_vs_k0R0");
  const std::string s_r_k = slope("gamma_r_vs_k0R0");
  const std::string s_r_n = slope("gamma_r_vs_N");

  const auto old_precision = out.precision(10);
  out << "axis,N,k0R0,optical_density,realizations,mean_gamma_col,se_gamma_col,mean_gamma_r,se_gamma_r,"
         "forward_fraction,slope_gamma_col_vs_N,slope_gamma_col_vs_k0R0,slope_gamma_r_vs_k0R0,slope_gamma_r_vs_N\n";
  for (const auto& pt : report.points) {
    out << axis_name(pt.axis) << ',' << pt.n_atoms << ',' << pt.k0r0 << ',' << pt.optical_density() << ','
        << pt.records.size() << ',' << pt.gamma_col.mean << ',' << pt.gamma_col.std_error << ',';
    if (pt.gamma_r.count) out << pt.gamma_r.mean << ',' << pt.gamma_r.std_error << ',';
    else out << ",,";
    if (pt.forward_fraction.count) out << pt.forward_fraction.mean;
    out << ',' << s_col_n << ',' << s_col_k << ',' << s_r_k << ',' << s_r_n << '\n';
  }
  out.precision(old_precision);
}

}  // namespace coopemit
