#include "coopemit/verify/oracles.hpp"

#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

namespace coopemit::oracle {

using cplx = std::complex<double>;

Eigen::MatrixXcd brute_force_decay_matrix(const AtomicCloud& cloud) {
  const auto& p = cloud.params();
  const int n = cloud.size();
  Eigen::MatrixXcd g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int jp = 0; jp < n; ++jp) {
      const Vec3 dr = cloud.position(j) - cloud.position(jp);
      const double x = p.k0 * std::sqrt(dr.x() * dr.x() + dr.y() * dr.y() + dr.z() * dr.z());
      const double s = x == 0.0 ? 1.0 : std::sin(x) / x;
      const double phase = -p.k0 * (p.n0.x() * dr.x() + p.n0.y() * dr.y() + p.n0.z() * dr.z());
      g(j, jp) = p.gamma1 * std::polar(s, phase);
    }
  }
  return g;
}

double brute_force_gamma_col(const AtomicCloud& cloud) {
  const Eigen::MatrixXcd g = brute_force_decay_matrix(cloud);
  cplx total = 0.0;
  for (Eigen::Index j = 0; j < g.rows(); ++j)
    for (Eigen::Index jp = 0; jp < g.cols(); ++jp) total += g(j, jp);
  return total.real() / static_cast<double>(g.rows());
}

std::complex<double> kernel_series_on_axis(double d) {
  const long double x = d;
  long double sinc = 0.0L;
  long double term = 1.0L;  // x^{2k} / (2k+1)!
  for (int k = 0; k < 80; ++k) {
    sinc += (k % 2 ? -term : term);
    term *= x * x / ((2.0L * k + 2.0L) * (2.0L * k + 3.0L));
  }
  long double re = 0.0L, im = 0.0L;
  long double mag = 1.0L;  // x^m / m!
  for (int m = 0; m < 120; ++m) {
    // (-i)^m cycles 1, -i, -1, i
    switch (m % 4) {
      case 0: re += mag; break;
      case 1: im -= mag; break;
      case 2: re -= mag; break;
      case 3: im += mag; break;
    }
    mag *= x / (m + 1.0L);
  }
  return {static_cast<double>(sinc * re), static_cast<double>(sinc * im)};
}

Eigen::VectorXcd ode_evolve(const Eigen::MatrixXcd& gamma, const Eigen::VectorXcd& beta0, double t, double tol) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<double>;
  const Eigen::Index n = beta0.size();
  State x(static_cast<std::size_t>(2 * n));
  for (Eigen::Index j = 0; j < n; ++j) {
    x[static_cast<std::size_t>(2 * j)] = beta0[j].real();
    x[static_cast<std::size_t>(2 * j + 1)] = beta0[j].imag();
  }
  auto rhs = [&](const State& s, State& ds, double) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double re = 0.0, im = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        const cplx g = gamma(j, k);
        const double br = s[static_cast<std::size_t>(2 * k)];
        const double bi = s[static_cast<std::size_t>(2 * k + 1)];
        re += g.real() * br - g.imag() * bi;
        im += g.real() * bi + g.imag() * br;
      }
      ds[static_cast<std::size_t>(2 * j)] = -re;
      ds[static_cast<std::size_t>(2 * j + 1)] = -im;
    }
  };
  if (t > 0.0) {
    auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_fehlberg78<State>());
    odeint::integrate_adaptive(stepper, rhs, x, 0.0, t, 1e-3);
  }
  Eigen::VectorXcd out(n);
  for (Eigen::Index j = 0; j < n; ++j)
    out[j] = cplx(x[static_cast<std::size_t>(2 * j)], x[static_cast<std::size_t>(2 * j + 1)]);
  return out;
}

std::vector<std::complex<double>> brute_force_projection(const Eigen::VectorXcd& beta, const DickeBasis& basis) {
  const int n = basis.n_atoms();
  std::vector<cplx> out;
  cplx acc = 0.0;
  for (int j = 0; j < n; ++j) acc += basis.symmetric()[j] * beta[j];
  out.push_back(acc);
  for (int l = 0; l < n - 1; ++l) {
    acc = 0.0;
    for (int j = 0; j < n; ++j) acc += basis.f_basis()(j, l) * beta[j];
    out.push_back(acc);
  }
  return out;
}

Eigen::MatrixXd brute_force_gram(const DickeBasis& basis) {
  const int n = basis.n_atoms();
  Eigen::MatrixXd vectors(n, n);
  vectors.col(0) = basis.symmetric();
  vectors.rightCols(n - 1) = basis.f_basis();
  Eigen::MatrixXd gram(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += vectors(j, a) * vectors(j, b);
      gram(a, b) = s;
    }
  }
  return gram;
}

namespace {

template <typename F>
double simpson(F f, double a, double b, int intervals) {
  if (intervals % 2) ++intervals;
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

double gaussian_r2_moment(double r0) {
  const double norm = 1.0 / std::pow(std::sqrt(std::numbers::pi) * r0, 3);
  return simpson([&](double r) { return norm * std::exp(-r * r / (r0 * r0)) * 4.0 * std::numbers::pi * r * r * r * r; }, 0.0,
                 12.0 * r0, 20000);
}

double gaussian_projection_moment(double k0, double r0) {
  const double norm = 1.0 / (std::sqrt(std::numbers::pi) * r0);
  return simpson([&](double z) { return norm * std::exp(-z * z / (r0 * r0)) * (k0 * z) * (k0 * z); }, -12.0 * r0,
                 12.0 * r0, 20000);
}

double retarded_average_closed_form(double k0, double d, double ct) {
  const double kd = k0 * d;
  return ct >= d ? std::sin(kd) / kd : std::sin(k0 * ct) / kd;
}

double gaussian_lobe_half_width(int n_atoms, double k0r0) {
  const double n = n_atoms;
  const double k2 = k0r0 * k0r0;
  return std::acos(1.0 - std::log((n - 1.0) / (0.5 * n - 1.0)) / k2);
}

double gaussian_mean_gamma_col(int n_atoms, double k0r0) {
  const double k2 = k0r0 * k0r0;
  return 1.0 + (n_atoms - 1.0) * (-std::expm1(-2.0 * k2)) / (2.0 * k2);
}

}  // namespace coopemit::oracle
