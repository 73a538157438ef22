#pragma once

#include <complex>
#include <span>

#include <Eigen/Core>

#include "coopemit/cloud.hpp"

namespace coopemit {

using cplx = std::complex<double>;

/// sin(x)/x with the removable singularity handled by a Taylor branch.
double sinc(double x);

/// Decay kernel F(dr) = sinc(k0 |dr|) exp(-i k0 n0 . dr); F(0) == 1 exactly.
cplx kernel_F(const Vec3& dr, double k0, const Vec3& n0);

/// gamma1 * F(r_j - r_j') for all pairs, beta frame (incident phases absorbed).
/// Exactly Hermitian by construction; no spectral work.
Eigen::MatrixXcd assemble_decay_matrix(const AtomicCloud& cloud);

/// gamma1 * sinc(k0 |r_j - r_j'|), the same operator in the alpha frame.
Eigen::MatrixXd alpha_frame_matrix(const AtomicCloud& cloud);

/// Diagonal of the gauge transform exp(-i k0 n0 . r_j); beta = D alpha D^dagger.
Eigen::VectorXcd beta_gauge(const AtomicCloud& cloud);

/// Decay operator of one realization together with its cached spectral
/// decomposition. Immutable after construction.
class DecayMatrix {
 public:
  /// Decomposes `gamma`; throws NumericalError if the eigensolver fails or the
  /// Hermitian/PSD/trace invariants are violated beyond tolerance.
  DecayMatrix(Eigen::MatrixXcd gamma, double gamma1);

  const Eigen::MatrixXcd& gamma() const { return gamma_; }
  /// Ascending eigenvalues [1/time].
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  /// Columns are orthonormal eigenvectors.
  const Eigen::MatrixXcd& eigenvectors() const { return eigenvectors_; }
  double gamma1() const { return gamma1_; }
  int size() const { return static_cast<int>(gamma_.rows()); }

  /// exp(-Gamma dt) v through the eigenbasis; eigenvalues within the PSD
  /// tolerance below zero are clamped to 0.
  Eigen::VectorXcd propagate(const Eigen::VectorXcd& v, double dt) const;

  /// max |V diag(lambda) V^dagger - Gamma|.
  double reconstruction_error() const;

 private:
  Eigen::MatrixXcd gamma_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
  double gamma1_;
};

DecayMatrix build_decay_matrix(const AtomicCloud& cloud);

/// Minimum Gauss-Legendre order accepted by decay_matrix_retarded.
inline constexpr int kMinRetardedOrder = 8;

/// Light-cone restricted decay matrix after the light has travelled
/// `light_distance` = c t. Entry (j, j') is gamma1 times the sphere average of
/// exp(i k0 n.dr) Theta[ct - |n.dr|], dr = r_j - r_j', returned in the beta
/// frame so that it converges to build_decay_matrix once ct exceeds every
/// pair distance. Theta(0) = 1/2, so the diagonal is gamma1/2 at exactly t = 0.
/// `n_quad` is the Gauss-Legendre order per panel of the polar integral.
Eigen::MatrixXcd decay_matrix_retarded(const AtomicCloud& cloud, double light_distance, int n_quad);

/// Hermitian quadratic forms v_m^dagger Gamma v_m for several vectors at once,
/// streaming over pairs without storing Gamma. Used by ensemble sweeps where N
/// is large and no spectral data is needed.
std::vector<double> streamed_quadratic_forms(const AtomicCloud& cloud, std::span<const Eigen::VectorXcd> vectors);

}  // namespace coopemit
