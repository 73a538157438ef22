#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

namespace coopemit {

using Vec3 = Eigen::Vector3d;

/// Parameters of a Gaussian atomic cloud.
///
/// Positions follow P(r) ~ exp(-r^2 / r0^2), i.e. each Cartesian coordinate
/// is normal with standard deviation r0 / sqrt(2).
struct CloudParams {
  int n_atoms = 1;
  double k0 = 1.0;       ///< resonant wavenumber [1/length]
  double r0 = 1.0;       ///< Gaussian size parameter [length]
  Vec3 n0 = Vec3::UnitZ();  ///< incident photon direction
  std::uint64_t seed = 0;
  double gamma1 = 1.0;   ///< single-atom decay rate [1/time]

  /// Throws ParameterError when an invariant is violated.
  void validate() const;

  double k0r0() const { return k0 * r0; }
  /// Forward-enhancement diagnostic N (k0 R0)^-2.
  double optical_density() const { return n_atoms / (k0r0() * k0r0()); }
};

class AtomicCloud {
 public:
  /// Wraps explicit positions (lattices, coincident atoms, hand-built test cases).
  AtomicCloud(CloudParams params, std::vector<Vec3> positions);

  const CloudParams& params() const { return params_; }
  const std::vector<Vec3>& positions() const { return positions_; }
  const Vec3& position(int j) const { return positions_[static_cast<std::size_t>(j)]; }
  int size() const { return static_cast<int>(positions_.size()); }

  /// k0 n0 . r_j for every atom.
  Eigen::VectorXd forward_phases() const;
  /// Largest pairwise separation [length].
  double max_extent() const;

 private:
  CloudParams params_;
  std::vector<Vec3> positions_;
};

/// Draws N independent positions from the Gaussian of `params`; deterministic in params.seed.
AtomicCloud sample_cloud(const CloudParams& params);

Eigen::MatrixXd pair_distances(const AtomicCloud& cloud);

/// One row per atom, header "x,y,z".
void write_positions_csv(const AtomicCloud& cloud, std::ostream& out);

}  // namespace coopemit
