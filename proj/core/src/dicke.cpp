#include "coopemit/dicke.hpp"

#include <cmath>
#include <string>

#include "coopemit/dynamics.hpp"
#include "coopemit/errors.hpp"

namespace coopemit {

DickeBasis build_basis(int n_atoms, BasisMode mode) {
  if (n_atoms < 2) throw ParameterError("Dicke {N-1,1} basis needs n_atoms >= 2 (got " + std::to_string(n_atoms) + ")");
  const double n = n_atoms;
  const double inv_sqrt_n = 1.0 / std::sqrt(n);

  Eigen::VectorXd offset(n_atoms);
  if (mode == BasisMode::exact) {
    offset.setConstant((1.0 + inv_sqrt_n) / (n - 1.0));
    offset[n_atoms - 1] = -inv_sqrt_n;
  } else {
    offset.setConstant(1.0 / n);
  }
  Eigen::MatrixXd f = offset.replicate(1, n_atoms - 1);
  for (int l = 0; l < n_atoms - 1; ++l) f(l, l) -= 1.0;
  return DickeBasis(mode, Eigen::VectorXd::Constant(n_atoms, inv_sqrt_n), std::move(f), std::move(offset));
}

DickeProjection project(const Eigen::VectorXcd& beta, const DickeBasis& basis) {
  if (beta.size() != basis.n_atoms())
    throw ParameterError("state dimension " + std::to_string(beta.size()) + " does not match basis size " +
                         std::to_string(basis.n_atoms()));
  DickeProjection out;
  const Eigen::VectorXcd sym = basis.symmetric().cast<std::complex<double>>();
  const Eigen::MatrixXcd f = basis.f_basis().cast<std::complex<double>>();
  out.c_sym = sym.dot(beta);
  out.c_f = f.adjoint() * beta;
  out.residual_norm = (beta - sym * out.c_sym - f * out.c_f).norm();
  return out;
}

DickeProjection project(const AmplitudeState& state, const DickeBasis& basis) {
  if (state.frame != Frame::beta) throw ParameterError("Dicke projection requires a beta-frame state");
  return project(state.amplitudes, basis);
}

SymmetryCheck symmetry_check(const DickeBasis& basis, int j, int l) {
  if (basis.mode() != BasisMode::exact) throw ParameterError("symmetry_check requires the exact basis");
  const int n = basis.n_atoms();
  if (j < 0 || l < 0 || j >= n || l >= n) throw ParameterError("permutation index out of range");
  const Eigen::MatrixXd& f = basis.f_basis();
  Eigen::MatrixXd permuted = f;
  if (j != l) permuted.row(j).swap(permuted.row(l));

  SymmetryCheck out;
  out.representation = f.transpose() * permuted;
  out.symmetric_leakage = (basis.symmetric().transpose() * permuted).cwiseAbs().maxCoeff();
  const Eigen::MatrixXd outside = permuted - f * out.representation;
  out.span_residual = outside.colwise().norm().maxCoeff();
  if (j == l) out.representation = Eigen::MatrixXd::Identity(n - 1, n - 1);
  return out;
}

}  // namespace coopemit
