#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "coopemit/cloud.hpp"
#include "coopemit/dicke.hpp"
#include "coopemit/kernel.hpp"

namespace coopemit {

/// alpha: bare amplitudes of |e_j>; beta: incident phases exp(i k0 n0.r_j) absorbed.
enum class Frame { alpha, beta };

struct AmplitudeState {
  Eigen::VectorXcd amplitudes;
  double t = 0.0;
  Frame frame = Frame::beta;

  int size() const { return static_cast<int>(amplitudes.size()); }
};

/// Timed Dicke state right after absorption: beta_j = 1/sqrt(N), t = 0.
AmplitudeState initial_state(const AtomicCloud& cloud);

AmplitudeState to_alpha(const AmplitudeState& state, const AtomicCloud& cloud);
AmplitudeState to_beta(const AmplitudeState& state, const AtomicCloud& cloud);

/// Exact evolution to absolute time t >= state.t: beta(t) = exp(-Gamma (t - t0)) beta(t0).
/// The decay matrix lives in the beta frame; alpha-frame states are rejected.
AmplitudeState evolve(const AmplitudeState& state, const DecayMatrix& dm, double t);

/// Two-level reduction onto {N} and {N-1,1}:
///   dc_sym/dt = -gamma_col c_sym - sum_l conj(s_l) c_l
///   dc_l/dt   = -s_l c_sym - sum_l' q(l, l') c_l'
struct PerturbativeModel {
  double gamma_col = 0.0;
  Eigen::VectorXcd s;
  Eigen::MatrixXcd q;
  /// Imaginary part of the symmetric expectation before it was dropped.
  double gamma_col_imag = 0.0;
};

/// Evaluates the couplings from the already assembled beta-frame decay matrix.
PerturbativeModel build_perturbative_model(const Eigen::MatrixXcd& gamma, const DickeBasis& basis);
PerturbativeModel build_perturbative_model(const AtomicCloud& cloud, const DickeBasis& basis);

/// gamma_col = (gamma1/N) sum_jj' F and s_l only; O(N^2) without the q block.
PerturbativeModel build_symmetric_couplings(const Eigen::MatrixXcd& gamma, const DickeBasis& basis);

enum class PerturbativeMethod {
  first_order,  ///< closed form, c_l coupled to c_sym only
  full,         ///< adaptive Runge-Kutta integration of the complete linear system
};

struct PerturbativeSeries {
  std::vector<double> times;
  std::vector<std::complex<double>> c_sym;
  std::vector<Eigen::VectorXcd> c_f;
};

/// Starts from c_sym(0) = 1, c_f(0) = 0. Times must be >= 0 and nondecreasing.
PerturbativeSeries solve_perturbative(const PerturbativeModel& model, const std::vector<double>& times,
                                      PerturbativeMethod method = PerturbativeMethod::first_order);

/// Large-sample closed form of the {N-1,1} amplitude of atom l (0-based):
/// 2i (k0 n0.r_l) / (sqrt(N) (k0R0)^2) (1 - exp(-gamma_col t)) with the
/// analytic gamma_col = gamma1 N (k0R0)^-2. Meaningful only for k0R0 >> 1.
std::complex<double> analytic_mixing_amplitude(const AtomicCloud& cloud, int l, double t);

/// Afterglow state populated by symmetry mixing when no photon is detected.
struct AfterglowState {
  Eigen::VectorXcd h;  ///< unit-norm coefficients on |e_j> (beta frame)
  double a_norm = 0.0;           ///< normalization from the actual configuration
  double a_norm_analytic = 0.0;  ///< sqrt(2 / (N k0^2 R0^2))
};

/// h_j = i A (k0 n0.r_j - mean), normalized exactly. Throws NumericalError when
/// all atoms share one projection on n0.
AfterglowState afterglow_state(const AtomicCloud& cloud);

struct AfterglowRate {
  double hermitian = 0.0;  ///< <h|Gamma|h>
  std::complex<double> unconjugated;  ///< sum_jj' h_j h_j' Gamma_jj', no conjugation
  double analytic = 0.0;  ///< gamma1 N / (2 k0^4 R0^4)
};

AfterglowRate gamma_r(const AtomicCloud& cloud, const AfterglowState& ag, const Eigen::MatrixXcd& gamma);
AfterglowRate gamma_r(const AtomicCloud& cloud, const AfterglowState& ag, const DecayMatrix& dm);

/// gamma1 N (k0R0)^-2.
double analytic_gamma_col(const CloudParams& params);
/// gamma1 N / (2 (k0R0)^4).
double analytic_gamma_r(const CloudParams& params);

}  // namespace coopemit
