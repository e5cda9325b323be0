#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rabbi/lp.hpp"
#include "rabbi/rng.hpp"
#include "rabbi/trajectory.hpp"

namespace rabbi::knapsack {

struct KnapsackInstance {
  std::vector<double> weights;
  std::vector<double> rewards;
  /// One row for i.i.d. arrivals, or `horizon` rows indexed by elapsed period.
  std::vector<std::vector<double>> arrival_probs;
  int horizon = 0;
  double budget = 0.0;

  std::size_t n() const noexcept { return weights.size(); }
  /// Arrival distribution of the period with `t` periods to go.
  std::span<const double> probs_at(int t) const;
  void validate() const;
};

struct KnapsackState {
  int t = 0;
  double b = 0.0;
};

/// Fractional knapsack solution split into accept / reject summaries.
struct KnapsackLpSolution {
  std::vector<double> accept;
  std::vector<double> reject;
  double value = 0.0;
};

/// Types sorted by y/w descending, ties to the lower index.
std::vector<std::size_t> ratio_order(std::span<const double> y, std::span<const double> w);

/// Greedy optimum of  max y'x_a  s.t.  w'x_a <= b,  x_a + x_r = z,  x >= 0.
/// Types with y <= 0 are never accepted.
KnapsackLpSolution greedy_knapsack(double b, std::span<const double> y, std::span<const double> w,
                                   std::span<const double> z);
KnapsackLpSolution greedy_knapsack(double b, std::span<const double> y, std::span<const double> w,
                                   std::span<const double> z, std::span<const std::size_t> order);

/// Same program as an explicit StandardLp; variables ordered (a_1, r_1, a_2, r_2, ...).
lp::StandardLp knapsack_program(double b, std::span<const double> y, std::span<const double> w,
                                std::span<const double> z);

/// True when no optimal solution of the program at (b, z) has x_{j,a} >= 1 or
/// x_{j,r} >= 1.
bool knapsack_excluded(double b, std::span<const double> y, std::span<const double> w,
                       std::span<const double> z, std::size_t j);

/// Pathwise satisfying check: phi(b, z) <= R(a) + phi(b', z - e_j), where z
/// counts the arrivals of the current and all later periods.
bool knapsack_step_satisfying(double b, std::span<const double> y, std::span<const double> w,
                              std::span<const double> z, std::size_t j, Action a);

/// mu(t) = sum over the last t periods of the arrival probabilities.
std::vector<double> expected_counts(const KnapsackInstance& inst, int t);

double relaxed_value(const KnapsackInstance& inst, const KnapsackState& state,
                     std::span<const double> z);

/// Exact integer optimum; requires integral weights. Throws ScaleGuardError
/// when n * b * max(z) > 1e7.
double offline_ip_value(const KnapsackInstance& inst, std::span<const int> z, double b);

Action rabbi_action(const KnapsackInstance& inst, const KnapsackState& state, std::size_t j,
                    std::span<const double> mu);

struct KnapsackDp {
  double value = 0.0;
  int horizon = 0;
  int budget = 0;
  std::size_t n = 0;
  std::vector<std::uint8_t> accept;  // [t][b][j], t = 1..T

  bool accepts(int t, int b, std::size_t j) const {
    return accept[((static_cast<std::size_t>(t) - 1) * (budget + 1) + b) * n + j] != 0;
  }
};

/// Backward induction over (t, b). Requires integral weights and budget;
/// guard T * (B+1) * n <= 1e8.
KnapsackDp dp_online(const KnapsackInstance& inst);
double dp_online_value(const KnapsackInstance& inst);

double rmax_bound(const KnapsackInstance& inst);

enum class Policy { rabbi, dp_table };

/// One episode. Arrivals are drawn up front from `rng`, one per period.
Trajectory run_knapsack(const KnapsackInstance& inst, Stream& rng, Policy policy,
                        const SimOptions& opts, const KnapsackDp* table = nullptr);

}  // namespace rabbi::knapsack
