#include "coopemit/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "coopemit/errors.hpp"

namespace coopemit {

namespace {

using cplx = std::complex<double>;

// beta_j exp(i k0 n0.r_j) scaled by sqrt(gamma1)/|beta|, so that
// intensity(n) = |sum_j w_j exp(-i k0 n.r_j)|^2.
Eigen::VectorXcd radiating_weights(const AmplitudeState& state, const AtomicCloud& cloud) {
  if (state.size() != cloud.size()) throw ParameterError("state and cloud sizes differ");
  const AmplitudeState beta = to_beta(state, cloud);
  const double norm = beta.amplitudes.norm();
  if (!(norm > 0.0)) throw ParameterError("angular pattern of a zero-norm state is undefined");
  const Eigen::VectorXcd alpha = beta_gauge(cloud).conjugate().cwiseProduct(beta.amplitudes);
  return alpha * (std::sqrt(cloud.params().gamma1) / norm);
}

double intensity_at(const Eigen::VectorXcd& w, const AtomicCloud& cloud, const Vec3& n) {
  const Vec3 k = cloud.params().k0 * n;
  cplx sum = 0.0;
  for (int j = 0; j < cloud.size(); ++j) {
    const double phase = -k.dot(cloud.position(j));
    sum += w[j] * cplx(std::cos(phase), std::sin(phase));
  }
  return std::norm(sum);
}

double weighted_sum(const SphereGrid& grid, const Eigen::VectorXcd& w, const AtomicCloud& cloud,
                    std::vector<double>* values) {
  double total = 0.0;
  for (std::size_t i = 0; i < grid.directions.size(); ++i) {
    const double v = intensity_at(w, cloud, grid.directions[i]);
    if (values) values->push_back(v);
    total += grid.weights[i] * v;
  }
  return total;
}

}  // namespace

double directional_intensity(const AmplitudeState& state, const AtomicCloud& cloud, const Vec3& n) {
  return intensity_at(radiating_weights(state, cloud), cloud, n.normalized());
}

AngularPattern angular_pattern(const AmplitudeState& state, const AtomicCloud& cloud, const PatternSpec& spec) {
  const auto w = radiating_weights(state, cloud);
  const auto& p = cloud.params();
  const double k_extent = p.k0 * cloud.max_extent();

  AngularPattern out;
  out.theta_c = spec.theta_c > 0.0 ? spec.theta_c : std::min(std::numbers::pi, 3.0 / p.k0r0());
  const SphereOrder order = spec.order.n_theta > 0 ? spec.order : default_sphere_order(k_extent);
  SphereOrder cap = spec.cap_order;
  if (cap.n_theta <= 0) {
    cap.n_theta = 24 + static_cast<int>(std::ceil(k_extent * std::sin(std::min(out.theta_c, std::numbers::pi / 2))));
    cap.n_phi = order.n_phi;
  }

  const SphereGrid grid = product_sphere_grid(order, p.n0);
  out.directions = grid.directions;
  out.weights = grid.weights;
  out.intensity.reserve(grid.directions.size());
  out.total_rate = weighted_sum(grid, w, cloud, &out.intensity);
  const double forward = weighted_sum(cap_grid(out.theta_c, cap, p.n0), w, cloud, nullptr);
  out.forward_fraction = out.total_rate > 0.0 ? forward / out.total_rate : 0.0;
  return out;
}

std::vector<double> polar_profile(const AmplitudeState& state, const AtomicCloud& cloud, std::span<const double> thetas,
                                  int n_phi) {
  if (n_phi < 1) throw ParameterError("polar_profile needs n_phi >= 1");
  const auto w = radiating_weights(state, cloud);
  const Vec3 axis = cloud.params().n0;
  const auto [e1, e2] = transverse_basis(axis);
  std::vector<double> out;
  out.reserve(thetas.size());
  for (double theta : thetas) {
    double acc = 0.0;
    for (int k = 0; k < n_phi; ++k) {
      const double phi = 2.0 * std::numbers::pi * (k + 0.5) / n_phi;
      const Vec3 n = std::cos(theta) * axis + std::sin(theta) * (std::cos(phi) * e1 + std::sin(phi) * e2);
      acc += intensity_at(w, cloud, n);
    }
    out.push_back(acc / n_phi);
  }
  return out;
}

double forward_half_width(const AmplitudeState& state, const AtomicCloud& cloud, int n_phi) {
  const auto& p = cloud.params();
  if (n_phi <= 0) n_phi = default_sphere_order(p.k0 * cloud.max_extent()).n_phi;
  const auto profile_at = [&](double theta) {
    const double t[1] = {theta};
    return polar_profile(state, cloud, t, n_phi)[0];
  };
  const double peak = profile_at(0.0);
  const double step = 0.02 / p.k0r0();
  double lo = 0.0;
  double hi = step;
  while (profile_at(hi) > 0.5 * peak) {
    lo = hi;
    hi += step;
    if (hi > std::numbers::pi) throw NumericalError("forward lobe never falls to half maximum");
  }
  for (int iter = 0; iter < 60 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (profile_at(mid) > 0.5 * peak ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double survival_probability(const AmplitudeState& state) { return state.amplitudes.squaredNorm(); }

RateFit fit_rate(std::span<const double> times, std::span<const double> values,
                 std::optional<std::span<const double>> weights) {
  const std::size_t n = times.size();
  if (values.size() != n) throw ParameterError("fit_rate: times and values differ in length");
  if (n < 4) throw ParameterError("fit_rate needs at least 4 points");
  if (weights && weights->size() != n) throw ParameterError("fit_rate: weights have wrong length");
  for (double v : values)
    if (!(v > 0.0)) throw ParameterError("fit_rate needs strictly positive values");

  double sw = 0.0, st = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weights ? (*weights)[i] : 1.0;
    if (!(w > 0.0)) throw ParameterError("fit_rate weights must be positive");
    sw += w;
    st += w * times[i];
    sy += w * std::log(values[i]);
  }
  const double t_mean = st / sw;
  const double y_mean = sy / sw;
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weights ? (*weights)[i] : 1.0;
    const double dt = times[i] - t_mean;
    stt += w * dt * dt;
    sty += w * dt * (std::log(values[i]) - y_mean);
  }
  if (!(stt > 0.0)) throw ParameterError("fit_rate: time grid is degenerate");
  const double slope = sty / stt;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weights ? (*weights)[i] : 1.0;
    const double r = std::log(values[i]) - (y_mean + slope * (times[i] - t_mean));
    ssr += w * r * r;
  }
  RateFit fit;
  fit.rate = -slope;
  fit.std_error = std::sqrt(ssr / static_cast<double>(n - 2) / stt);
  fit.log_intercept = y_mean - slope * t_mean;
  return fit;
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (y.size() != n) throw ParameterError("fit_power_law: x and y differ in length");
  if (n < 3) throw ParameterError("fit_power_law needs at least 3 points");
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ParameterError("fit_power_law needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw ParameterError("fit_power_law: abscissae are degenerate");
  PowerLawFit fit;
  fit.slope = sxy / sxx;
  fit.log_prefactor = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.log_prefactor + fit.slope * lx[i]);
    ssr += r * r;
  }
  const double dof = static_cast<double>(n - 2);
  fit.std_error = std::sqrt(ssr / dof / sxx);
  const double tq = boost::math::quantile(boost::math::complement(boost::math::students_t(dof), 0.025));
  fit.ci_low = fit.slope - tq * fit.std_error;
  fit.ci_high = fit.slope + tq * fit.std_error;
  return fit;
}

SampleSummary summarize(std::span<const double> samples) {
  SampleSummary s;
  s.count = samples.size();
  if (samples.empty()) return s;
  const double n = static_cast<double>(samples.size());
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double var = 0.0;
  for (double v : samples) var += (v - s.mean) * (v - s.mean);
  s.std_error = samples.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  s.min = sorted.front();
  s.max = sorted.back();
  return s;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw ParameterError("pearson needs two equal-length samples of size >= 2");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) throw ParameterError("pearson: constant sample");
  return sab / std::sqrt(saa * sbb);
}

}  // namespace coopemit
