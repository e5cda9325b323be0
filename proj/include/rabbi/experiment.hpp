#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rabbi/knapsack.hpp"
#include "rabbi/learning.hpp"
#include "rabbi/pricing.hpp"
#include "rabbi/probing.hpp"
#include "rabbi/rng.hpp"
#include "rabbi/trajectory.hpp"

namespace rabbi {

enum class Setting { knapsack, probing, pricing, learning };

std::string to_string(Setting s);
Setting parse_setting(std::string_view name);

using Instance = std::variant<knapsack::KnapsackInstance, probing::ProbingInstance,
                              pricing::PricingInstance, learning::LearningInstance>;

Setting setting_of(const Instance& inst);
int horizon_of(const Instance& inst);
double budget_of(const Instance& inst);
void validate_instance(const Instance& inst);

/// T = k T0, B = k B0 (and the probe budget likewise).
Instance scale_instance(const Instance& base, int k);

/// Policy names accepted for a setting; the first is the default.
std::vector<std::string> policies_for(Setting s);

struct ExperimentConfig {
  Setting setting = Setting::knapsack;
  Instance base;
  std::vector<int> scaling{1};
  std::size_t replications = 1;
  std::uint64_t seed = 0;
  std::vector<std::string> policies;
  std::string output;
  bool diagnostics = true;
  double tolerance = 1e-9;

  void validate() const;
};

/// Read-only per-k data shared by all replications.
struct PolicyContext {
  std::optional<knapsack::KnapsackDp> knapsack_dp;
  std::optional<pricing::PricingDp> pricing_dp;
  std::optional<double> dp_value;
};

/// Builds the DP oracle for settings that have one; leaves it empty when the
/// instance is outside the oracle's domain or scale guard.
PolicyContext make_context(const Instance& inst, bool need_table);

/// One episode of `policy` on its own trajectory, with the realized-randomness
/// relaxation at the root as the benchmark and per-step diagnostics.
Trajectory coupled_regret(const Instance& inst, Stream& rng, const std::string& policy,
                          const SimOptions& opts, const PolicyContext* ctx = nullptr);

struct SampleStats {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 for a single value
};

SampleStats sample_stats(std::span<const double> xs);

/// 1.645 * sd / sqrt(n).
double ci90_halfwidth(double sd, std::size_t n);

struct RegretRow {
  std::string setting;
  std::string policy;
  int k = 1;
  int T = 0;
  double B = 0.0;
  std::size_t replications = 0;
  double mean_regret = 0.0;
  double sd_regret = 0.0;
  double ci90_halfwidth = 0.0;
  std::optional<double> dp_value;
  std::optional<double> mean_dp_gap;  // V^DP - mean reward
  double mean_reward = 0.0;
  double sd_reward = 0.0;
  double mean_benchmark = 0.0;
  double mean_bellman_loss_steps = 0.0;
  double mean_info_loss_steps = 0.0;
  std::uint64_t seed = 0;
};

struct RegretReport {
  std::vector<RegretRow> rows;

  const RegretRow* find(const std::string& policy, int k) const;
};

/// Runs every (k, policy, replication) on `threads` workers. Replication r at
/// scale k uses derive_stream(seed, k, r, setting name), shared by all
/// policies. Aggregation is in (k, policy, rep) order, so the report does not
/// depend on the worker count.
RegretReport run_experiment(const ExperimentConfig& config, unsigned threads);

/// --threads value, else RABBI_THREADS, else hardware concurrency (>= 1).
unsigned resolve_threads(std::optional<unsigned> requested);

}  // namespace rabbi
