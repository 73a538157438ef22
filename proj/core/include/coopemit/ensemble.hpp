#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "coopemit/cloud.hpp"
#include "coopemit/observables.hpp"

namespace coopemit {

/// Two-axis scaling sweep: N varies at fixed k0R0, and k0R0 varies at fixed N.
/// Lengths are in units of 1/k0 and rates in units of gamma1 (k0 = gamma1 = 1).
struct SweepSpec {
  std::vector<int> n_values;
  double k0r0_for_n_axis = 10.0;
  std::vector<double> k0r0_values;
  int n_for_k0r0_axis = 512;
  int realizations = 50;
  std::uint64_t seed = 0;
  int threads = 1;

  bool compute_gamma_r = true;
  bool compute_forward_fraction = false;
  /// Fit the survival curve of each realization over gamma_col t in [0.1, 1]
  /// (needs an eigendecomposition per realization).
  bool fit_survival = false;

  /// Replaces Gaussian sampling, e.g. to inject special configurations.
  std::function<AtomicCloud(const CloudParams&)> cloud_factory;

  /// Minimum sizes for exponent fits.
  static constexpr int kMinPointsPerAxis = 3;
  static constexpr int kMinRealizations = 50;

  /// Throws ParameterError when an axis has fewer than 3 points or a point
  /// fewer than 50 realizations.
  void validate() const;
};

struct RealizationRecord {
  std::uint64_t seed = 0;
  double gamma_col = 0.0;             ///< <phi_sym|Gamma|phi_sym>
  double gamma_r = 0.0;               ///< <h|Gamma|h>
  double forward_fraction = 0.0;      ///< initial symmetric state, theta_c = 3/(k0R0)
  std::optional<double> fitted_rate;  ///< survival decay rate, early window
};

enum class SweepAxis { n_atoms, k0r0 };

struct SweepPoint {
  SweepAxis axis = SweepAxis::n_atoms;
  int n_atoms = 0;
  double k0r0 = 0.0;
  std::vector<RealizationRecord> records;
  SampleSummary gamma_col;
  SampleSummary gamma_r;
  SampleSummary forward_fraction;
  SampleSummary fitted_rate;
  /// Cooperative parts: the diagonal contributes exactly gamma1 to both rates.
  SampleSummary gamma_col_cooperative;
  SampleSummary gamma_r_cooperative;

  double optical_density() const { return n_atoms / (k0r0 * k0r0); }
  double analytic_gamma_col() const;
  double analytic_gamma_r() const;
};

struct ExponentFit {
  std::string name;  ///< e.g. "gamma_col_vs_N"
  PowerLawFit fit;
};

struct EnsembleReport {
  SweepSpec spec;
  std::vector<SweepPoint> points;
  std::vector<ExponentFit> exponents;

  const ExponentFit* exponent(const std::string& name) const;
};

EnsembleReport scaling_sweep(const SweepSpec& spec);

/// Line-delimited JSON: one record per realization, per point, per exponent.
void write_records(const EnsembleReport& report, std::ostream& out);

/// Summary table, one row per sweep point.
void write_summary_csv(const EnsembleReport& report, std::ostream& out);

}  // namespace coopemit
