#include <doctest.h>

#include <cmath>

#include <Eigen/LU>

#include "coopemit/dicke.hpp"
#include "coopemit/dynamics.hpp"
#include "coopemit/errors.hpp"
#include "coopemit/random.hpp"
#include "coopemit/verify/oracles.hpp"
#include "helpers.hpp"

using namespace coopemit;

TEST_SUITE("dicke") {

TEST_CASE("N = 2 exact basis is symmetric plus antisymmetric") {
  const DickeBasis b = build_basis(2, BasisMode::exact);
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(b.symmetric()(0) == doctest::Approx(h));
  CHECK(b.symmetric()(1) == doctest::Approx(h));
  CHECK(b.f_basis()(0, 0) == doctest::Approx(h).epsilon(1e-15));
  CHECK(b.f_basis()(1, 0) == doctest::Approx(-h).epsilon(1e-15));
}

TEST_CASE("exact mode is orthonormal; both modes are orthogonal to the symmetric state") {
  for (int n : {2, 3, 5, 16, 101}) {
    const DickeBasis exact = build_basis(n, BasisMode::exact);
    const Eigen::MatrixXd gram = oracle::brute_force_gram(exact);
    CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    const DickeBasis approx = build_basis(n, BasisMode::approx);
    CHECK((approx.symmetric().transpose() * approx.f_basis()).cwiseAbs().maxCoeff() < 1e-14);
    for (int l = 0; l < n - 1; ++l) CHECK(approx.f_basis().col(l).squaredNorm() == doctest::Approx(1.0 - 1.0 / n));
  }
}

TEST_CASE("approx basis: overlaps -1/N, distance from exact ~ 1/sqrt(N)") {
  for (int n : {4, 16, 64, 256}) {
    const DickeBasis a = build_basis(n, BasisMode::approx);
    const Eigen::MatrixXd g = a.f_basis().transpose() * a.f_basis();
    CHECK(g(0, 1) == doctest::Approx(-1.0 / n));
    const DickeBasis e = build_basis(n, BasisMode::exact);
    const double scaled = (e.f_basis() - a.f_basis()).cwiseAbs().maxCoeff() * std::sqrt(n);
    CHECK(scaled > 0.5);
    CHECK(scaled <= 1.0 + 1.0 / std::sqrt(n) + 1e-12);
  }
}

TEST_CASE("projection of basis vectors") {
  const DickeBasis b = build_basis(6, BasisMode::exact);
  const DickeProjection sym = project(Eigen::VectorXcd(b.symmetric().cast<cplx>()), b);
  CHECK(std::abs(sym.c_sym - 1.0) < 1e-14);
  CHECK(sym.c_f.cwiseAbs().maxCoeff() < 1e-14);
  CHECK(sym.residual_norm < 1e-14);

  const DickeProjection f3 = project(Eigen::VectorXcd(b.f_basis().col(3).cast<cplx>()), b);
  CHECK(std::abs(f3.c_sym) < 1e-14);
  for (int l = 0; l < 5; ++l) CHECK(std::abs(f3.c_f(l) - (l == 3 ? 1.0 : 0.0)) < 1e-14);
}

TEST_CASE("projection of an evolved state matches explicit inner products") {
  const AtomicCloud c = testing_support::gaussian(8, 2.0, 31);
  const DecayMatrix dm = build_decay_matrix(c);
  const DickeBasis b = build_basis(8);
  const AmplitudeState psi0 = initial_state(c);
  const double gcol = psi0.amplitudes.dot(dm.gamma() * psi0.amplitudes).real();
  const AmplitudeState psi = evolve(psi0, dm, 1.0 / gcol);
  const DickeProjection p = project(psi, b);
  const auto ref = oracle::brute_force_projection(psi.amplitudes, b);
  CHECK(std::abs(p.c_sym - ref[0]) < 1e-14);
  for (int l = 0; l < 7; ++l) CHECK(std::abs(p.c_f(l) - ref[static_cast<std::size_t>(l) + 1]) < 1e-14);
  CHECK(p.residual_norm < 1e-13);
  CHECK_THROWS_AS(project(to_alpha(psi, c), b), ParameterError);
}

TEST_CASE("transposition representation") {
  const DickeBasis b3 = build_basis(3);
  const SymmetryCheck s = symmetry_check(b3, 0, 1);
  CHECK(s.representation.rows() == 2);
  CHECK((s.representation.transpose() * s.representation - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-13);
  CHECK(std::abs(std::abs(s.representation.determinant()) - 1.0) < 1e-13);

  const SymmetryCheck id = symmetry_check(b3, 2, 2);
  CHECK((id.representation - Eigen::MatrixXd::Identity(2, 2)).norm() == 0.0);

  const DickeBasis b7 = build_basis(7);
  const SymmetryCheck t = symmetry_check(b7, 2, 5);
  CHECK((t.representation * t.representation - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(t.symmetric_leakage < 1e-13);
  CHECK(t.span_residual < 1e-13);
}

TEST_CASE("random transpositions never leave the span") {
  GaussianStream rng(3);
  for (int n : {2, 5, 16, 40}) {
    const DickeBasis b = build_basis(n);
    for (int k = 0; k < 20; ++k) {
      const int j = std::min(n - 1, static_cast<int>(rng.uniform_open0() * n));
      const int l = std::min(n - 1, static_cast<int>(rng.uniform_open0() * n));
      const SymmetryCheck s = symmetry_check(b, j, l);
      CHECK(s.symmetric_leakage <= 1e-12);
      CHECK(s.span_residual <= 1e-12);
    }
  }
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(build_basis(1), ParameterError);
  const DickeBasis b = build_basis(4);
  CHECK_THROWS_AS(symmetry_check(b, 0, 4), ParameterError);
  CHECK_THROWS_AS(symmetry_check(build_basis(4, BasisMode::approx), 0, 1), ParameterError);
  CHECK_THROWS_AS(project(Eigen::VectorXcd::Ones(3), b), ParameterError);
}

}
