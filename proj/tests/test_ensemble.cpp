#include <doctest.h>

#include <sstream>

#include "coopemit/ensemble.hpp"
#include "coopemit/errors.hpp"
#include "coopemit/verify/oracles.hpp"

using namespace coopemit;

namespace {

SweepSpec small_spec() {
  SweepSpec s;
  s.n_values = {16, 32, 64};
  s.k0r0_for_n_axis = 3.0;
  s.k0r0_values = {2.0, 3.0, 4.0};
  s.n_for_k0r0_axis = 32;
  s.realizations = 50;
  s.seed = 2024;
  return s;
}

std::string records_of(const EnsembleReport& r) {
  std::ostringstream os;
  write_records(r, os);
  write_summary_csv(r, os);
  return os.str();
}

}  // namespace

TEST_SUITE("ensemble") {

TEST_CASE("coincident atoms give gamma_col = N exactly") {
  SweepSpec s = small_spec();
  s.compute_gamma_r = false;
  s.cloud_factory = [](const CloudParams& p) {
    return AtomicCloud(p, std::vector<Vec3>(static_cast<std::size_t>(p.n_atoms), Vec3(0.1, 0.2, 0.3)));
  };
  const EnsembleReport r = scaling_sweep(s);
  for (const auto& pt : r.points) CHECK(pt.gamma_col.mean == doctest::Approx(pt.n_atoms).epsilon(1e-12));
  CHECK(r.exponent("gamma_col_vs_N")->fit.slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.exponent("gamma_col_vs_k0R0")->fit.slope == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("point means agree with the Gaussian ensemble average") {
  const EnsembleReport r = scaling_sweep(small_spec());
  REQUIRE(r.points.size() == 6);
  for (const auto& pt : r.points) {
    CHECK(pt.records.size() == 50);
    CHECK(std::abs(pt.gamma_col.mean - oracle::gaussian_mean_gamma_col(pt.n_atoms, pt.k0r0)) < 4.0 * pt.gamma_col.std_error);
    CHECK(pt.gamma_col_cooperative.mean == doctest::Approx(pt.gamma_col.mean - 1.0));
    CHECK(pt.gamma_r.mean > 0.0);
  }
  for (const char* name : {"gamma_col_vs_N", "gamma_col_vs_k0R0", "gamma_r_vs_N", "gamma_r_vs_k0R0",
                           "gamma_col_cooperative_vs_N", "gamma_col_cooperative_vs_k0R0"})
    CHECK(r.exponent(name) != nullptr);
  CHECK(r.exponent("no_such_fit") == nullptr);
}

TEST_CASE("sweeps are reproducible and independent of the thread count") {
  SweepSpec s = small_spec();
  s.compute_forward_fraction = true;
  const std::string a = records_of(scaling_sweep(s));
  CHECK(a == records_of(scaling_sweep(s)));
  s.threads = 3;
  CHECK(a == records_of(scaling_sweep(s)));
  s.seed += 1;
  CHECK(a != records_of(scaling_sweep(s)));
}

TEST_CASE("summary table columns") {
  const EnsembleReport r = scaling_sweep(small_spec());
  std::ostringstream os;
  write_summary_csv(r, os);
  std::string header;
  std::getline(std::istringstream(os.str()) >> std::ws, header);
  for (const char* col : {"N", "k0R0", "mean_gamma_col", "se_gamma_col", "mean_gamma_r", "se_gamma_r", "forward_fraction",
                          "slope_gamma_col_vs_N"})
    CHECK(header.find(col) != std::string::npos);
}

TEST_CASE("invalid sweep specifications") {
  SweepSpec s = small_spec();
  s.n_values = {16, 32};
  CHECK_THROWS_AS(scaling_sweep(s), ParameterError);
  s = small_spec();
  s.realizations = 49;
  CHECK_THROWS_AS(scaling_sweep(s), ParameterError);
  s = small_spec();
  s.k0r0_values = {2.0, -1.0, 3.0};
  CHECK_THROWS_AS(scaling_sweep(s), ParameterError);
}

}
