#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "coopemit/config.hpp"

namespace coopemit::tools {

enum ExitCode : int {
  kOk = 0,
  kAcceptanceFailed = 1,
  kConfigParse = 2,
  kConfigValidation = 3,
  kNumerical = 4,
};

struct RunOptions {
  bool quiet = false;
  std::ostream* log = nullptr;  ///< progress and summary; null means std::cerr
};

struct RunOutcome {
  int exit_code = kOk;
  std::vector<std::filesystem::path> files;
};

/// Runs a validated configuration and writes its artifacts into
/// config.output_dir. Nothing is written unless every computation succeeded.
/// Throws NumericalError, ParameterError or ConfigError.
RunOutcome run(const RunConfig& config, const RunOptions& options = {});

/// Full command line: parsing, overrides, validation, run and exit-code mapping.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

}  // namespace coopemit::tools
