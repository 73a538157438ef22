#include "coopemit/quadrature.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "coopemit/errors.hpp"

namespace coopemit {

GaussLegendreRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ParameterError("Gauss-Legendre order must be >= 1");
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  // Newton iteration on P_n from the Tricomi initial guesses; symmetric pairs.
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = mid - half * x;
    rule.nodes[hi] = mid + half * x;
    rule.weights[lo] = half * w;
    rule.weights[hi] = half * w;
  }
  if (n == 1) {
    rule.nodes[0] = mid;
    rule.weights[0] = 2.0 * half;
  }
  return rule;
}

std::pair<Vec3, Vec3> transverse_basis(const Vec3& axis) {
  const Vec3 a = axis.normalized();
  const Vec3 helper = std::abs(a.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e1 = (helper - a * a.dot(helper)).normalized();
  return {e1, a.cross(e1)};
}

namespace {

SphereGrid banded_grid(double cos_lo, SphereOrder order, const Vec3& axis) {
  if (order.n_theta < 1 || order.n_phi < 1) throw ParameterError("sphere grid orders must be positive");
  const Vec3 a = axis.normalized();
  const auto [e1, e2] = transverse_basis(a);
  const auto polar = gauss_legendre(order.n_theta, cos_lo, 1.0);
  SphereGrid grid;
  grid.directions.reserve(static_cast<std::size_t>(order.n_theta * order.n_phi));
  grid.weights.reserve(grid.directions.capacity());
  const double dphi = 2.0 * std::numbers::pi / order.n_phi;
  for (std::size_t i = 0; i < polar.nodes.size(); ++i) {
    const double c = polar.nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double w = polar.weights[i] / (2.0 * order.n_phi);
    for (int k = 0; k < order.n_phi; ++k) {
      const double phi = (k + 0.5) * dphi;
      grid.directions.push_back(c * a + s * (std::cos(phi) * e1 + std::sin(phi) * e2));
      grid.weights.push_back(w);
    }
  }
  return grid;
}

}  // namespace

SphereGrid product_sphere_grid(SphereOrder order, const Vec3& axis) { return banded_grid(-1.0, order, axis); }

SphereGrid cap_grid(double theta_c, SphereOrder order, const Vec3& axis) {
  if (!(theta_c > 0.0) || theta_c > std::numbers::pi) throw ParameterError("cap angle must lie in (0, pi]");
  return banded_grid(std::cos(theta_c), order, axis);
}

SphereOrder default_sphere_order(double k_extent) {
  // Plane-wave content beyond degree ~ k|d| decays super-exponentially;
  // the cube-root margin covers the transition region.
  const double kd = std::max(0.0, k_extent);
  const int degree = static_cast<int>(std::ceil(kd + 6.0 * std::cbrt(kd) + 16.0));
  return {degree / 2 + 1, degree + 1};
}

}  // namespace coopemit
