#include "coopemit/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "coopemit/errors.hpp"
#include "coopemit/quadrature.hpp"

namespace coopemit {

double sinc(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

cplx kernel_F(const Vec3& dr, double k0, const Vec3& n0) {
  const double phase = -k0 * n0.dot(dr);
  return sinc(k0 * dr.norm()) * cplx(std::cos(phase), std::sin(phase));
}

Eigen::MatrixXcd assemble_decay_matrix(const AtomicCloud& cloud) {
  const auto& p = cloud.params();
  const int n = cloud.size();
  Eigen::MatrixXcd g(n, n);
  for (int j = 0; j < n; ++j) {
    g(j, j) = p.gamma1;
    for (int jp = j + 1; jp < n; ++jp) {
      const cplx v = p.gamma1 * kernel_F(cloud.position(j) - cloud.position(jp), p.k0, p.n0);
      g(j, jp) = v;
      g(jp, j) = std::conj(v);
    }
  }
  return g;
}

Eigen::MatrixXd alpha_frame_matrix(const AtomicCloud& cloud) {
  const auto& p = cloud.params();
  const int n = cloud.size();
  Eigen::MatrixXd g(n, n);
  for (int j = 0; j < n; ++j) {
    g(j, j) = p.gamma1;
    for (int jp = j + 1; jp < n; ++jp) {
      g(j, jp) = p.gamma1 * sinc(p.k0 * (cloud.position(j) - cloud.position(jp)).norm());
      g(jp, j) = g(j, jp);
    }
  }
  return g;
}

Eigen::VectorXcd beta_gauge(const AtomicCloud& cloud) {
  const Eigen::VectorXd phase = cloud.forward_phases();
  Eigen::VectorXcd d(phase.size());
  for (Eigen::Index j = 0; j < phase.size(); ++j) d[j] = cplx(std::cos(phase[j]), -std::sin(phase[j]));
  return d;
}

DecayMatrix::DecayMatrix(Eigen::MatrixXcd gamma, double gamma1) : gamma_(std::move(gamma)), gamma1_(gamma1) {
  if (gamma_.rows() != gamma_.cols() || gamma_.rows() == 0) throw ParameterError("decay matrix must be square and non-empty");
  const double herm = (gamma_ - gamma_.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gamma_);
  const auto diagnostics = [&] {
    std::ostringstream os;
    os << "N=" << gamma_.rows() << " gamma1=" << gamma1_ << " max|G-G^+|=" << herm
       << " trace=" << gamma_.trace().real() << " max|G|=" << gamma_.cwiseAbs().maxCoeff();
    return os.str();
  };
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed: " + diagnostics());
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();

  if (herm > 1e-12 * gamma1_) throw NumericalError("decay matrix is not Hermitian: " + diagnostics());
  if (eigenvalues_.minCoeff() < -1e-10 * gamma1_) {
    std::ostringstream os;
    os << "decay matrix is not positive semidefinite (lambda_min=" << eigenvalues_.minCoeff() << "): " << diagnostics();
    throw NumericalError(os.str());
  }
  const double n = static_cast<double>(gamma_.rows());
  if (std::abs(gamma_.trace().real() - n * gamma1_) > 1e-10 * n * gamma1_)
    throw NumericalError("decay matrix trace differs from N gamma1: " + diagnostics());
}

Eigen::VectorXcd DecayMatrix::propagate(const Eigen::VectorXcd& v, double dt) const {
  Eigen::VectorXcd modal = eigenvectors_.adjoint() * v;
  for (Eigen::Index k = 0; k < modal.size(); ++k) modal[k] *= std::exp(-std::max(0.0, eigenvalues_[k]) * dt);
  return eigenvectors_ * modal;
}

double DecayMatrix::reconstruction_error() const {
  const Eigen::MatrixXcd rebuilt = eigenvectors_ * eigenvalues_.asDiagonal() * eigenvectors_.adjoint();
  return (rebuilt - gamma_).cwiseAbs().maxCoeff();
}

DecayMatrix build_decay_matrix(const AtomicCloud& cloud) {
  return DecayMatrix(assemble_decay_matrix(cloud), cloud.params().gamma1);
}

namespace {

// Average over the sphere of exp(i kd u) Theta[ct - d|u|] with u the cosine
// to the pair axis. The integrand does not depend on azimuth, so the product
// grid collapses to its polar factor: composite Gauss-Legendre on the support
// |u| <= min(1, ct/d), panels short enough to resolve the oscillation.
double retarded_pair_average(double kd, double support, const GaussLegendreRule& unit_rule) {
  const double length = 2.0 * support;
  const int panels = std::max(1, static_cast<int>(std::ceil(kd * length / 2.0)));
  const double h = length / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = -support + p * h;
    for (std::size_t i = 0; i < unit_rule.nodes.size(); ++i) {
      const double u = a + 0.5 * h * (unit_rule.nodes[i] + 1.0);
      sum += 0.5 * h * unit_rule.weights[i] * std::cos(kd * u);
    }
  }
  // Odd (sine) part integrates to zero over the symmetric support.
  return 0.5 * sum;
}

}  // namespace

Eigen::MatrixXcd decay_matrix_retarded(const AtomicCloud& cloud, double light_distance, int n_quad) {
  if (n_quad < kMinRetardedOrder)
    throw ParameterError("retarded decay matrix needs n_quad >= " + std::to_string(kMinRetardedOrder));
  if (!(light_distance >= 0.0) || !std::isfinite(light_distance)) throw ParameterError("c t must be finite and >= 0");
  const auto& p = cloud.params();
  const int n = cloud.size();
  const auto unit_rule = gauss_legendre(n_quad);
  const double theta_at_origin = light_distance > 0.0 ? 1.0 : 0.5;

  Eigen::MatrixXcd g(n, n);
  for (int j = 0; j < n; ++j) {
    g(j, j) = p.gamma1 * theta_at_origin;
    for (int jp = j + 1; jp < n; ++jp) {
      const Vec3 dr = cloud.position(j) - cloud.position(jp);
      const double d = dr.norm();
      double avg = 0.0;
      if (d == 0.0) {
        avg = theta_at_origin;
      } else {
        const double support = std::min(1.0, light_distance / d);
        if (support > 0.0) avg = retarded_pair_average(p.k0 * d, support, unit_rule);
      }
      const double phase = -p.k0 * p.n0.dot(dr);
      const cplx v = p.gamma1 * avg * cplx(std::cos(phase), std::sin(phase));
      g(j, jp) = v;
      g(jp, j) = std::conj(v);
    }
  }
  return g;
}

std::vector<double> streamed_quadratic_forms(const AtomicCloud& cloud, std::span<const Eigen::VectorXcd> vectors) {
  const auto& p = cloud.params();
  const int n = cloud.size();
  for (const auto& v : vectors)
    if (v.size() != n) throw ParameterError("quadratic form vector has wrong dimension");
  std::vector<double> out(vectors.size(), 0.0);
  for (std::size_t m = 0; m < vectors.size(); ++m) out[m] = p.gamma1 * vectors[m].squaredNorm();
  for (int j = 0; j < n; ++j) {
    for (int jp = j + 1; jp < n; ++jp) {
      const cplx f = kernel_F(cloud.position(j) - cloud.position(jp), p.k0, p.n0);
      // Pair (j, j') and its Hermitian mirror contribute 2 Re[conj(v_j) F v_j'].
      for (std::size_t m = 0; m < vectors.size(); ++m) {
        const auto& v = vectors[m];
        out[m] += 2.0 * p.gamma1 * (std::conj(v[j]) * f * v[jp]).real();
      }
    }
  }
  return out;
}

}  // namespace coopemit
