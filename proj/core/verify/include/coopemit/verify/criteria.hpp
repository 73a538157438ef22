#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "coopemit/config.hpp"

namespace coopemit::verify {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;  ///< numeric checks only; runtime is judged separately
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> notes;
  double runtime_seconds = 0.0;
  double runtime_budget_seconds = 0.0;

  bool within_budget() const { return runtime_seconds <= runtime_budget_seconds; }
};

struct AcceptanceContext {
  AcceptanceConfig config;
  std::uint64_t seed = 0;
  int threads = 1;
};

CriterionResult kernel_oracle(const AcceptanceContext& ctx);
CriterionResult gauge_spectrum(const AcceptanceContext& ctx);
CriterionResult dicke_basis(const AcceptanceContext& ctx);
CriterionResult exact_dynamics(const AcceptanceContext& ctx);
CriterionResult gamma_col_scaling(const AcceptanceContext& ctx);
CriterionResult perturbative_chain(const AcceptanceContext& ctx);
CriterionResult mixing_amplitude(const AcceptanceContext& ctx);
CriterionResult afterglow_rate(const AcceptanceContext& ctx);
CriterionResult forward_directivity(const AcceptanceContext& ctx);
CriterionResult retardation_buildup(const AcceptanceContext& ctx);

/// Criteria 1-10 in order. `on_result` fires after each one.
std::vector<CriterionResult> run_criteria(const AcceptanceContext& ctx,
                                          const std::function<void(const CriterionResult&)>& on_result = {});

/// Line-delimited JSON, one object per criterion. Runtimes are left out so
/// that identical inputs give byte-identical output.
void write_records(const std::vector<CriterionResult>& results, std::ostream& out);

/// "[PASS] C1 ..." style lines, runtimes included.
std::string format_line(const CriterionResult& r);

}  // namespace coopemit::verify
