#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "coopemit/dynamics.hpp"
#include "coopemit/errors.hpp"
#include "coopemit/kernel.hpp"
#include "coopemit/verify/oracles.hpp"
#include "helpers.hpp"

using namespace coopemit;
using testing_support::cloud_at;
using testing_support::gaussian;

TEST_SUITE("kernel") {

TEST_CASE("kernel values") {
  const cplx zero = kernel_F(Vec3::Zero(), 1.0, Vec3::UnitZ());
  CHECK(zero.real() == 1.0);
  CHECK(zero.imag() == 0.0);

  const cplx node = kernel_F(Vec3(std::numbers::pi, 0, 0), 1.0, Vec3::UnitZ());
  CHECK(std::abs(node) < 1e-16);

  const cplx f = kernel_F(Vec3(0, 0, 0.5), 1.0, Vec3::UnitZ());
  const cplx ref = oracle::kernel_series_on_axis(0.5);
  CHECK(std::abs(f - ref) < 1e-15);
  CHECK(std::abs(ref - std::sin(0.5) / 0.5 * std::exp(cplx(0, -0.5))) < 1e-15);
}

TEST_CASE("sinc is smooth through the origin") {
  CHECK(sinc(0.0) == 1.0);
  for (double x : {1e-9, 1e-6, 9.9e-5, 1.01e-4, 1e-3})
    CHECK(sinc(x) == doctest::Approx(std::sin(x) / x).epsilon(1e-15));
  CHECK(sinc(-0.3) == sinc(0.3));
}

TEST_CASE("single atom and coincident pair") {
  const DecayMatrix one = build_decay_matrix(cloud_at({Vec3(0.3, -1, 2)}));
  CHECK(one.gamma()(0, 0) == cplx(1.0, 0.0));
  CHECK(one.eigenvalues()(0) == doctest::Approx(1.0));

  const DecayMatrix pair = build_decay_matrix(cloud_at({Vec3(1, 1, 1), Vec3(1, 1, 1)}));
  CHECK(pair.eigenvalues()(0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(pair.eigenvalues()(1) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("assembly matches the brute-force double loop") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const AtomicCloud c = gaussian(6, 2.0, seed);
    const DecayMatrix dm = build_decay_matrix(c);
    CHECK((dm.gamma() - oracle::brute_force_decay_matrix(c)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(dm.reconstruction_error() <= 1e-10);
  }
}

TEST_CASE("decay matrix is Hermitian, PSD, trace N, and gauge-equivalent to the real sinc matrix") {
  const AtomicCloud c = gaussian(40, 3.0, 17);
  const DecayMatrix dm = build_decay_matrix(c);
  CHECK((dm.gamma() - dm.gamma().adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(dm.eigenvalues().minCoeff() > -1e-10);
  CHECK(dm.eigenvalues().sum() == doctest::Approx(40.0).epsilon(1e-12));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> real(alpha_frame_matrix(c), Eigen::EigenvaluesOnly);
  CHECK((real.eigenvalues() - dm.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("propagation is a semigroup and contracts the norm") {
  const AtomicCloud c = gaussian(12, 2.5, 4);
  const DecayMatrix dm = build_decay_matrix(c);
  const Eigen::VectorXcd v = initial_state(c).amplitudes;
  const Eigen::VectorXcd ab = dm.propagate(dm.propagate(v, 0.4), 0.7);
  CHECK((ab - dm.propagate(v, 1.1)).norm() < 1e-13);
  CHECK((dm.propagate(v, 0.0) - v).norm() < 1e-14);
  double prev = v.norm();
  for (int i = 1; i <= 20; ++i) {
    const double now = dm.propagate(v, 0.25 * i).norm();
    CHECK(now <= prev + 1e-15);
    prev = now;
  }
}

TEST_CASE("streamed quadratic forms equal the dense expectation") {
  const AtomicCloud c = gaussian(30, 4.0, 8);
  const Eigen::MatrixXcd g = assemble_decay_matrix(c);
  std::vector<Eigen::VectorXcd> vs{initial_state(c).amplitudes, Eigen::VectorXcd::Random(30)};
  const auto forms = streamed_quadratic_forms(c, vs);
  for (std::size_t m = 0; m < vs.size(); ++m)
    CHECK(forms[m] == doctest::Approx(vs[m].dot(g * vs[m]).real()).epsilon(1e-13));
  CHECK(forms[0] == doctest::Approx(oracle::brute_force_gamma_col(c)).epsilon(1e-13));
}

TEST_CASE("retarded matrix: t = 0, closed form, static limit") {
  const AtomicCloud c = gaussian(8, 3.0, 21);
  const Eigen::MatrixXcd zero = decay_matrix_retarded(c, 0.0, 16);
  for (int j = 0; j < 8; ++j) {
    CHECK(zero(j, j).real() == doctest::Approx(0.5));
    for (int k = 0; k < 8; ++k)
      if (k != j) CHECK(std::abs(zero(j, k)) == 0.0);
  }
  CHECK(decay_matrix_retarded(c, 1e-9, 16)(0, 0).real() == doctest::Approx(1.0));

  const Eigen::MatrixXd d = pair_distances(c);
  const Eigen::VectorXcd gauge = beta_gauge(c);
  for (double frac : {0.1, 0.5, 0.9, 1.5}) {
    const double ct = frac * d(0, 1);
    const Eigen::MatrixXcd g = decay_matrix_retarded(c, ct, 16);
    const cplx alpha = std::conj(gauge(0)) * g(0, 1) * gauge(1);
    CHECK(std::abs(alpha - oracle::retarded_average_closed_form(1.0, d(0, 1), ct)) < 1e-12);
  }

  const Eigen::MatrixXcd late = decay_matrix_retarded(c, 2.0 * c.max_extent() + 1.0, 16);
  CHECK((late - assemble_decay_matrix(c)).cwiseAbs().maxCoeff() < 1e-6);
  CHECK_THROWS_AS(decay_matrix_retarded(c, 1.0, kMinRetardedOrder - 1), ParameterError);
  CHECK_THROWS_AS(decay_matrix_retarded(c, -1.0, 16), ParameterError);
}

TEST_CASE("retarded matrix is nearly diagonal well inside every light cone") {
  const AtomicCloud c = gaussian(16, 5.0, 2);
  const Eigen::MatrixXd d = pair_distances(c);
  double d_min = INFINITY;
  for (int i = 0; i < 16; ++i)
    for (int j = i + 1; j < 16; ++j) d_min = std::min(d_min, d(i, j));
  Eigen::MatrixXcd g = decay_matrix_retarded(c, 1e-6 * d_min, 16);
  g.diagonal().setZero();
  CHECK(g.cwiseAbs().maxCoeff() < 1.01e-6);
}

TEST_CASE("decay matrix rejects non-Hermitian input") {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(3, 3);
  g(0, 1) = cplx(0.3, 0.0);
  CHECK_THROWS_AS(DecayMatrix(g, 1.0), NumericalError);
  Eigen::MatrixXcd neg = Eigen::MatrixXcd::Identity(2, 2);
  neg(0, 1) = neg(1, 0) = 2.0;
  CHECK_THROWS_AS(DecayMatrix(neg, 1.0), NumericalError);
}

}
