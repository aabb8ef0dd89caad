#pragma once

// Acceptance suite: one check per published result the simulator must
// reproduce. Shared by the acceptance test binary and `chiralcav check`.

#include <functional>
#include <string>
#include <vector>

namespace chiralcav {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int acceptance_criterion_count = 11;

std::string criterion_name(int id);

// Runs criterion `id` (1-based). Exceptions are reported as failures.
CriterionResult run_criterion(int id, unsigned jobs = 1);

// Runs the given criteria in order (all when `ids` is empty), calling
// `on_result` after each.
std::vector<CriterionResult> run_acceptance(
    const std::vector<int>& ids, unsigned jobs,
    const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace chiralcav
