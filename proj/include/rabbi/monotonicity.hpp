#pragma once

#include <cstddef>
#include <vector>

#include "rabbi/knapsack.hpp"
#include "rabbi/learning.hpp"
#include "rabbi/probing.hpp"

namespace rabbi {

struct MonotonicityViolation {
  int t = 0;
  int b = 0;
  int b2 = 0;        // probe budget (probing only)
  int arrival = 0;
  int sub_type = -1;  // probing only
  std::vector<int> z_next;  // realized counts of the remaining t-1 periods
  double overshoot = 0.0;
  bool excluded = false;
  bool accept_feasible = false;  // the arrival could be accepted at this budget
};

struct MonotonicityReport {
  std::size_t triples = 0;
  std::size_t excluded_triples = 0;
  std::vector<MonotonicityViolation> violations;
  std::size_t nonexcluded_violations = 0;
  double max_excluded_overshoot = 0.0;
  /// Same maximum restricted to triples where accepting the arrival is feasible.
  double max_excluded_overshoot_feasible = 0.0;
  double rmax = 0.0;
  double tolerance = 0.0;

  bool passed() const noexcept {
    return nonexcluded_violations == 0 && max_excluded_overshoot <= rmax + tolerance;
  }
};

/// Exhaustive check of phi(t, s) <= max_u { R(u) + phi(t-1, s') } + tolerance
/// over t <= max_T, integral budgets up to the instance budget, the arriving
/// input and every composition of the remaining arrivals. `lhs_perturbation`
/// is added to phi(t, s) (forced-failure hook). Throws ScaleGuardError past
/// 1e6 triples.
MonotonicityReport check_bellman_monotonicity(const knapsack::KnapsackInstance& inst, int max_T,
                                              double tolerance, double lhs_perturbation = 0.0);

/// Same with the relaxation evaluated at the true reward means.
MonotonicityReport check_bellman_monotonicity(const learning::LearningInstance& inst, int max_T,
                                              double tolerance, double lhs_perturbation = 0.0);

/// Also enumerates the sub-type; the probe branch takes the better of hiring
/// and passing after the reveal. rmax is the largest sub-type reward.
MonotonicityReport check_bellman_monotonicity(const probing::ProbingInstance& inst, int max_T,
                                              double tolerance, double lhs_perturbation = 0.0);

}  // namespace rabbi
