#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rabbi/knapsack.hpp"
#include "rabbi/pricing.hpp"
#include "rabbi/rng.hpp"
#include "rabbi/trajectory.hpp"

namespace rabbi::learning {

using pricing::DiscreteDistribution;

enum class Feedback { full, censored };

struct LearningInstance {
  std::vector<double> weights;
  std::vector<double> arrival_probs;
  std::vector<DiscreteDistribution> rewards;  // one bounded distribution per type
  int horizon = 0;
  double budget = 0.0;
  Feedback feedback = Feedback::full;

  std::size_t n() const noexcept { return weights.size(); }
  std::vector<double> means() const;
  /// min over j != j' of |E[R_j]/w_j - E[R_j']/w_j'|; 0 for a single type.
  double separation() const;
  void validate() const;
};

struct EmpiricalStats {
  std::vector<std::int64_t> counts;
  std::vector<double> means;
};

struct ExplorerSchedule {
  std::vector<std::int64_t> required_samples;
};

knapsack::KnapsackLpSolution knapsack_lp_solve(double b, std::span<const double> y,
                                               std::span<const double> w,
                                               std::span<const double> z);

Action learning_rabbi_step(const LearningInstance& inst, int t, double b,
                           const EmpiricalStats& stats, std::size_t j,
                           std::span<const double> mu);

EmpiricalStats update_stats(EmpiricalStats stats, std::size_t j, double reward);
void update_stats_in_place(EmpiricalStats& stats, std::size_t j, double reward);

/// Types by y/w descending; ties to the lower index.
std::vector<std::size_t> ranking(std::span<const double> y, std::span<const double> w);

/// required_j = max(1, ceil(8 ln T / (w_j delta)^2)). Throws PreconditionError
/// when delta = 0.
ExplorerSchedule naive_explorer_schedule(const LearningInstance& inst, int horizon);

enum class BanditDecision { explore_accept, exploit_accept, exploit_reject };

BanditDecision bandits_rabbi_step(const LearningInstance& inst, int t, double b,
                                  const EmpiricalStats& stats, std::size_t j,
                                  const ExplorerSchedule& schedule);

/// Full feedback runs Learning RABBI; censored feedback runs Bandits RABBI
/// with the naive explorer. One free sample per type is drawn before the
/// first period; every period then draws a type and a reward.
Trajectory run_learning(const LearningInstance& inst, Stream& rng, const SimOptions& opts);

}  // namespace rabbi::learning
