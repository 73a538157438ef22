#pragma once

// Reference computations that deliberately avoid the production code paths:
// direct double loops, series expansions, an independent ODE integrator and
// closed-form Gaussian averages.

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "coopemit/cloud.hpp"
#include "coopemit/dicke.hpp"

namespace coopemit::oracle {

/// gamma1 sin(k0 d)/(k0 d) exp(-i k0 n0.dr), every entry evaluated on its own.
Eigen::MatrixXcd brute_force_decay_matrix(const AtomicCloud& cloud);

/// (gamma1 / N) sum_j sum_j' F(r_j - r_j') by direct summation.
double brute_force_gamma_col(const AtomicCloud& cloud);

/// F for dr = (0, 0, d), n0 = z, k0 = 1, from the Taylor series of sinc and of
/// exp(-i d) summed in long double.
std::complex<double> kernel_series_on_axis(double d);

/// beta(t) for d beta/dt = -Gamma beta by adaptive Runge-Kutta-Fehlberg 7(8).
Eigen::VectorXcd ode_evolve(const Eigen::MatrixXcd& gamma, const Eigen::VectorXcd& beta0, double t, double tol = 1e-13);

/// <v|beta> for every column v of the basis (symmetric first), by explicit loops.
std::vector<std::complex<double>> brute_force_projection(const Eigen::VectorXcd& beta, const DickeBasis& basis);

/// Gram matrix of {phi_sym, f^1, ..., f^{N-1}} by explicit loops.
Eigen::MatrixXd brute_force_gram(const DickeBasis& basis);

/// int P(r) r^2 d^3r for P(r) = (sqrt(pi) r0)^-3 exp(-r^2/r0^2), radial quadrature.
double gaussian_r2_moment(double r0);

/// int P(r) (k0 z)^2 d^3r, one-dimensional quadrature.
double gaussian_projection_moment(double k0, double r0);

/// Exact sphere average of exp(i k0 n.dr) Theta[ct - |n.dr|] for |dr| = d > 0.
double retarded_average_closed_form(double k0, double d, double ct);

/// Polar angle where the ensemble-mean pattern of the timed Dicke state,
/// 1 + (N-1) exp(-k0^2 R0^2 (1 - cos theta)), falls to N/2.
double gaussian_lobe_half_width(int n_atoms, double k0r0);

/// Ensemble mean of gamma_col / gamma1 for a Gaussian cloud:
/// 1 + (N-1) (1 - exp(-2 K)) / (2 K), K = (k0 R0)^2.
double gaussian_mean_gamma_col(int n_atoms, double k0r0);

}  // namespace coopemit::oracle
