#pragma once

#include <vector>

#include "coopemit/cloud.hpp"

namespace coopemit {

struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
GaussLegendreRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Directions with weights normalized so that sum(weights) is the covered
/// fraction of the full solid angle (1 for the whole sphere): the weights
/// integrate dOmega / 4pi.
struct SphereGrid {
  std::vector<Vec3> directions;
  std::vector<double> weights;
};

struct SphereOrder {
  int n_theta = 0;
  int n_phi = 0;
};

/// Gauss-Legendre in cos(theta) times a uniform azimuth rule, polar axis
/// along `axis`. Exact for spherical harmonics of degree < min(2 n_theta, n_phi).
SphereGrid product_sphere_grid(SphereOrder order, const Vec3& axis);

/// Same construction restricted to the polar cap theta <= theta_c around `axis`.
SphereGrid cap_grid(double theta_c, SphereOrder order, const Vec3& axis);

/// Grid order that integrates plane waves exp(i k n.d) with k |d| <= k_extent
/// over the sphere to ~1e-12.
SphereOrder default_sphere_order(double k_extent);

/// Right-handed orthonormal pair (e1, e2) spanning the plane normal to `axis`.
std::pair<Vec3, Vec3> transverse_basis(const Vec3& axis);

}  // namespace coopemit
