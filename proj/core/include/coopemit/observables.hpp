#pragma once

#include <optional>
#include <span>
#include <vector>

#include "coopemit/cloud.hpp"
#include "coopemit/dynamics.hpp"
#include "coopemit/quadrature.hpp"

namespace coopemit {

/// Quadrature settings for angular_pattern. Zero orders / angle select defaults
/// derived from the cloud: default_sphere_order(k0 * extent) and theta_c = 3 / (k0 R0).
struct PatternSpec {
  SphereOrder order{};
  SphereOrder cap_order{};
  double theta_c = 0.0;
};

/// Directional emission rate of a single-excitation state.
///
/// intensity(n) = gamma1 / |beta|^2 * |sum_j beta_j exp(i k0 (n0 - n).r_j)|^2,
/// normalized so its average over dOmega/4pi is <beta|Gamma|beta> / |beta|^2.
struct AngularPattern {
  std::vector<Vec3> directions;
  std::vector<double> weights;  ///< dOmega / 4pi, summing to 1
  std::vector<double> intensity;
  double total_rate = 0.0;  ///< quadrature of intensity over the sphere
  double theta_c = 0.0;
  double forward_fraction = 0.0;  ///< share of total_rate emitted within theta_c of n0
};

/// Throws ParameterError for a zero-norm state.
AngularPattern angular_pattern(const AmplitudeState& state, const AtomicCloud& cloud, const PatternSpec& spec = {});

/// Pointwise intensity in direction n (same normalization as angular_pattern).
double directional_intensity(const AmplitudeState& state, const AtomicCloud& cloud, const Vec3& n);

/// Azimuthal average of the intensity on cones at polar angles `thetas` around n0.
std::vector<double> polar_profile(const AmplitudeState& state, const AtomicCloud& cloud, std::span<const double> thetas,
                                  int n_phi);

/// Polar angle at which the azimuthally averaged intensity first falls to half
/// of its value at n0.
double forward_half_width(const AmplitudeState& state, const AtomicCloud& cloud, int n_phi = 0);

/// sum_j |beta_j|^2.
double survival_probability(const AmplitudeState& state);

struct RateFit {
  double rate = 0.0;
  double std_error = 0.0;
  double log_intercept = 0.0;
};

/// Least-squares fit of log(values) = c - rate * t. Needs >= 4 points, positive
/// values and at least two distinct times. Optional weights multiply the squared
/// residuals.
RateFit fit_rate(std::span<const double> times, std::span<const double> values,
                 std::optional<std::span<const double>> weights = std::nullopt);

struct PowerLawFit {
  double slope = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;   ///< 95% Student-t interval
  double ci_high = 0.0;
  double log_prefactor = 0.0;
};

/// log y = a + slope log x. Needs >= 3 points with positive x and y.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

struct SampleSummary {
  double mean = 0.0;
  double std_error = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

SampleSummary summarize(std::span<const double> samples);

/// Pearson correlation coefficient.
double pearson(std::span<const double> a, std::span<const double> b);

}  // namespace coopemit
