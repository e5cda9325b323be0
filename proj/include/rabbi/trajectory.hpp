#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace rabbi {

/// Actions across all settings. Pricing records the posted menu index in
/// StepRecord::price instead.
enum class Action : std::uint8_t { accept, reject, probe, post, halt };

std::string to_string(Action a);

struct StepFlags {
  bool evaluated = false;   // satisfying-action diagnostic ran for this step
  bool satisfying = false;
  bool excluded = false;    // exclusion event held (potential Bellman loss)
  bool explore = false;
  bool ranking_evaluated = false;
  bool ranking_ok = false;
};

struct StepRecord {
  int t = 0;                // periods to go
  double budget = 0.0;      // hire budget / inventory / knapsack capacity
  double budget2 = 0.0;     // probe budget (probing only)
  int input = -1;           // arriving type, or -1 for pricing
  int sub_input = -1;       // revealed sub-type (probing) when probed
  Action action = Action::reject;
  Action second_action = Action::reject;  // probing second stage
  int price = -1;           // posted menu index (pricing)
  double reward = 0.0;
  StepFlags flags;
};

struct Trajectory {
  std::vector<StepRecord> steps;  // filled only when recording is requested
  std::size_t periods = 0;
  double total_reward = 0.0;
  double offline_benchmark_value = 0.0;
  std::size_t bellman_loss_count = 0;
  std::size_t info_loss_count = 0;
  std::size_t satisfying_count = 0;
  std::size_t non_evaluable_count = 0;
  std::size_t explore_count = 0;
  std::size_t ranking_mismatch_count = 0;

  double regret() const noexcept { return offline_benchmark_value - total_reward; }

  /// Adds a finished step to the counters (and to `steps` when `keep`).
  void record(const StepRecord& s, bool keep);
};

struct SimOptions {
  bool record_steps = false;
  bool diagnostics = true;
};

}  // namespace rabbi
