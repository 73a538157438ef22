#include <doctest.h>

#include <cmath>
#include <sstream>

#include "coopemit/cloud.hpp"
#include "coopemit/errors.hpp"
#include "coopemit/verify/oracles.hpp"
#include "helpers.hpp"

using namespace coopemit;
using testing_support::cloud_at;

TEST_SUITE("cloud") {

TEST_CASE("single atom gives one position and the Gaussian second moment") {
  CloudParams p;
  p.n_atoms = 1;
  p.r0 = 1.0;
  const int samples = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int s = 0; s < samples; ++s) {
    p.seed = static_cast<std::uint64_t>(s);
    const AtomicCloud c = sample_cloud(p);
    REQUIRE(c.size() == 1);
    const double r2 = c.position(0).squaredNorm();
    sum += r2;
    sum2 += r2 * r2;
  }
  const double mean = sum / samples;
  const double sigma = std::sqrt((sum2 / samples - mean * mean) / samples);
  CHECK(oracle::gaussian_r2_moment(1.0) == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(std::abs(mean - oracle::gaussian_r2_moment(1.0)) < 3.0 * sigma);
}

TEST_CASE("coordinates are isotropic with variance r0^2/2") {
  CloudParams p;
  p.n_atoms = 20000;
  p.r0 = 3.0;
  p.seed = 5;
  const AtomicCloud c = sample_cloud(p);
  for (int axis = 0; axis < 3; ++axis) {
    double m = 0.0, v = 0.0;
    for (const auto& r : c.positions()) m += r[axis];
    m /= p.n_atoms;
    for (const auto& r : c.positions()) v += (r[axis] - m) * (r[axis] - m);
    v /= p.n_atoms - 1;
    CHECK(std::abs(m) < 4.0 * std::sqrt(4.5 / p.n_atoms));
    CHECK(v == doctest::Approx(4.5).epsilon(0.05));
  }
}

TEST_CASE("doubling r0 doubles every position") {
  CloudParams p;
  p.n_atoms = 50;
  p.r0 = 2.0;
  p.seed = 9;
  const AtomicCloud a = sample_cloud(p);
  p.r0 = 4.0;
  const AtomicCloud b = sample_cloud(p);
  for (int j = 0; j < 50; ++j) CHECK((b.position(j) - 2.0 * a.position(j)).norm() == 0.0);
}

TEST_CASE("fixed seed is deterministic") {
  CloudParams p;
  p.n_atoms = 10;
  p.seed = 42;
  const AtomicCloud a = sample_cloud(p), b = sample_cloud(p);
  for (int j = 0; j < 10; ++j) CHECK(a.position(j) == b.position(j));
  p.seed = 43;
  CHECK(sample_cloud(p).position(0) != a.position(0));
}

TEST_CASE("pair distances") {
  const auto two = pair_distances(cloud_at({Vec3(0, 0, 0), Vec3(0.7, 0, 0)}));
  CHECK(two(0, 1) == 0.7);
  CHECK(two(1, 0) == 0.7);
  CHECK(two(0, 0) == 0.0);

  const auto one = pair_distances(cloud_at({Vec3(1, 2, 3)}));
  CHECK(one.rows() == 1);
  CHECK(one(0, 0) == 0.0);

  const AtomicCloud c = testing_support::gaussian(5, 2.0, 3);
  const auto d = pair_distances(c);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const Vec3 dr = c.position(i) - c.position(j);
      CHECK(d(i, j) == doctest::Approx(std::sqrt(dr.x() * dr.x() + dr.y() * dr.y() + dr.z() * dr.z())).epsilon(1e-15));
    }
}

TEST_CASE("invalid parameters are rejected") {
  CloudParams p;
  p.n_atoms = 0;
  CHECK_THROWS_AS(sample_cloud(p), ParameterError);
  p.n_atoms = 3;
  p.r0 = -1.0;
  CHECK_THROWS_AS(sample_cloud(p), ParameterError);
  p.r0 = 1.0;
  p.n0 = Vec3(0, 0, 2);
  CHECK_THROWS_AS(sample_cloud(p), ParameterError);
  p.n0 = Vec3::UnitZ();
  CHECK_THROWS_AS(AtomicCloud(p, {Vec3::Zero()}), ParameterError);
  CHECK_THROWS_AS(AtomicCloud(p, {Vec3::Zero(), Vec3::Zero(), Vec3(NAN, 0, 0)}), ParameterError);
}

TEST_CASE("positions csv round trip") {
  const AtomicCloud c = testing_support::gaussian(4, 1.5, 2);
  std::ostringstream os;
  write_positions_csv(c, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "x,y,z");
  for (int j = 0; j < 4; ++j) {
    std::getline(is, line);
    double x, y, z;
    char c1, c2;
    std::istringstream(line) >> x >> c1 >> y >> c2 >> z;
    CHECK(Vec3(x, y, z) == c.position(j));
  }
}

}
