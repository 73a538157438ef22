#pragma once

#include <complex>

#include <Eigen/Core>

namespace coopemit {

struct AmplitudeState;

enum class BasisMode {
  exact,   ///< orthonormal {N-1,1} vectors
  approx,  ///< f^l_j = 1/N - delta_jl, orthogonal to the symmetric state, norms 1 - 1/N
};

/// Permutation-symmetry basis of the single-excitation sector: the totally
/// symmetric state (tableau {N}) and N-1 vectors of the {N-1,1} representation.
///
/// Every f^l has the form u - e_l, with u the same offset vector for all l:
///   exact:  u_j = (1 + 1/sqrt(N)) / (N-1) for j < N-1, u_{N-1} = -1/sqrt(N)
///   approx: u_j = 1/N
/// The basis depends only on N; positions enter through the decay kernel.
class DickeBasis {
 public:
  int n_atoms() const { return static_cast<int>(symmetric_.size()); }
  BasisMode mode() const { return mode_; }
  /// All entries 1/sqrt(N).
  const Eigen::VectorXd& symmetric() const { return symmetric_; }
  /// N x (N-1); column l is f^l.
  const Eigen::MatrixXd& f_basis() const { return f_; }
  const Eigen::VectorXd& offset() const { return offset_; }

  friend DickeBasis build_basis(int n_atoms, BasisMode mode);

 private:
  DickeBasis(BasisMode mode, Eigen::VectorXd symmetric, Eigen::MatrixXd f, Eigen::VectorXd offset)
      : mode_(mode), symmetric_(std::move(symmetric)), f_(std::move(f)), offset_(std::move(offset)) {}

  BasisMode mode_;
  Eigen::VectorXd symmetric_;
  Eigen::MatrixXd f_;
  Eigen::VectorXd offset_;
};

/// Throws ParameterError for n_atoms < 2 (no {N-1,1} tableau).
DickeBasis build_basis(int n_atoms, BasisMode mode = BasisMode::exact);

struct DickeProjection {
  std::complex<double> c_sym;
  Eigen::VectorXcd c_f;
  /// |beta - c_sym phi_sym - sum_l c_f[l] f^l|; zero up to rounding in exact mode.
  double residual_norm = 0.0;
};

/// Inner products with the basis vectors. The state must be in the beta frame.
DickeProjection project(const AmplitudeState& state, const DickeBasis& basis);
DickeProjection project(const Eigen::VectorXcd& beta, const DickeBasis& basis);

struct SymmetryCheck {
  /// (N-1)x(N-1) matrix D with O_jl f^m = sum_m' D(m', m) f^m'.
  Eigen::MatrixXd representation;
  /// max_m |<phi_sym | O_jl f^m>|.
  double symmetric_leakage = 0.0;
  /// max_m |O_jl f^m - sum_m' D(m', m) f^m'|, the part outside span{f}.
  double span_residual = 0.0;
};

/// Applies the generalized permutation O_jl (swap of which atom carries the
/// excitation, phases included) to every {N-1,1} vector. Indices are 0-based;
/// j == l gives the identity. Exact mode only.
SymmetryCheck symmetry_check(const DickeBasis& basis, int j, int l);

}  // namespace coopemit
