#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "coopemit/cloud.hpp"
#include "coopemit/ensemble.hpp"
#include "coopemit/quadrature.hpp"

namespace coopemit {

enum class RunMode { single, sweep, acceptance };

enum class GridSpacing { linear, log };

/// Times in units of 1/gamma1. Unset bounds default to the two analytic decay
/// regimes: [1e-2 / gamma_col, 10 / gamma_r].
struct TimeGridConfig {
  std::optional<double> start;
  std::optional<double> stop;
  int points = 64;
  GridSpacing spacing = GridSpacing::log;
};

struct SingleRunConfig {
  bool export_positions = true;
  bool export_amplitudes = false;
  bool angular_pattern = true;
  bool perturbative = true;
};

/// Parameters of the acceptance criteria; defaults are the pinned values.
struct AcceptanceConfig {
  int c5_realizations = 100;
  int c7_realizations = 4;
  int c8_realizations = 200;
  double c8_k0r0_for_n_axis = 6.0;
  double c10_k0r0 = 10.0;
};

struct RunConfig {
  RunMode mode = RunMode::single;
  std::uint64_t seed = 0;
  int threads = 1;
  std::filesystem::path output_dir = "coopemit-out";

  /// Lengths in units of 1/k0, rates in units of gamma1: k0 = gamma1 = 1 and
  /// r0 = k0R0.
  CloudParams cloud;
  TimeGridConfig time_grid;
  SphereOrder sphere_order{};  ///< zeros select the extent-based default
  int retarded_order = 16;
  SingleRunConfig single;
  SweepSpec sweep;
  AcceptanceConfig acceptance;

  /// Re-checks every parameter; throws ConfigError(validation).
  void validate() const;
};

/// Parses the JSON configuration text; throws ConfigError(parse) on malformed
/// input or unknown keys and ConfigError(validation) on bad values.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

std::vector<double> make_time_grid(const TimeGridConfig& grid, const CloudParams& cloud);

/// Human-readable validity warnings for the large-sample regime.
std::vector<std::string> regime_warnings(const CloudParams& cloud);

const char* to_string(RunMode mode);

}  // namespace coopemit
