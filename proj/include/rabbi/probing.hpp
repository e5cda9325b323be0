#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rabbi/lp.hpp"
#include "rabbi/rng.hpp"
#include "rabbi/trajectory.hpp"

namespace rabbi::probing {

enum class Variant { budgeted, costed };

struct ProbingInstance {
  std::vector<std::vector<double>> rewards;    // n x m, strictly increasing per row
  std::vector<std::vector<double>> sub_probs;  // n x m, rows sum to 1
  std::vector<double> arrival_probs;           // length n
  std::vector<double> probe_cost;              // length n; used by the costed variant
  int horizon = 0;
  int hire_budget = 0;
  int probe_budget = 0;
  Variant variant = Variant::budgeted;

  std::size_t n() const noexcept { return rewards.size(); }
  std::size_t m() const noexcept { return rewards.empty() ? 0 : rewards.front().size(); }
  double mean_reward(std::size_t j) const;
  double max_reward() const;
  double cost(std::size_t j) const;
  void validate() const;
};

/// Marker of the half-stage: `none` at first stages, otherwise the
/// first-stage action just taken.
enum class Stage { none, accept, probe, reject };

/// Budgets as of the start of the current period.
struct ProbingState {
  int b_h = 0;
  int b_p = 0;
  Stage stage = Stage::none;
};

/// Column layout of the probing program.
struct Layout {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t accept(std::size_t j) const { return 3 * j; }
  std::size_t probe(std::size_t j) const { return 3 * j + 1; }
  std::size_t reject(std::size_t j) const { return 3 * j + 2; }
  std::size_t sub_accept(std::size_t j, std::size_t k) const { return 3 * n + 2 * (j * m + k); }
  std::size_t sub_reject(std::size_t j, std::size_t k) const { return sub_accept(j, k) + 1; }
  std::size_t size() const { return 3 * n + 2 * n * m; }
};

Layout layout_of(const ProbingInstance& inst);

/// Builds the probing program. Equality rows: demand (n), then splitting
/// (n*m, row j*m+k). Inequality rows: hire capacity, then probe budget
/// (budgeted variant only).
lp::StandardLp probing_program(const ProbingInstance& inst, int b_h, int b_p,
                               std::span<const double> z);

lp::LpSolution probing_lp(const ProbingInstance& inst, int b_h, int b_p,
                          std::span<const double> z);

/// P[b, z]; negative budgets give -infinity.
double probing_value(const ProbingInstance& inst, int b_h, int b_p, std::span<const double> z);

/// First-stage scores from `x`; tie order accept > probe > reject.
Action first_stage_action(const ProbingInstance& inst, const lp::LpSolution& x, int b_h, int b_p,
                          std::size_t j);

/// Second-stage scores after a probe revealing sub-type k; ties accept.
Action second_stage_action(const ProbingInstance& inst, const lp::LpSolution& x, int b_h,
                           std::size_t j, std::size_t k);

/// Solves the program at (state budgets, mu) and acts. At a first stage pass
/// no sub-type; after a probe (state.stage == probe) pass the revealed k.
Action probing_rabbi_step(const ProbingInstance& inst, const ProbingState& state, int t,
                          std::span<const double> mu, std::size_t j,
                          std::optional<std::size_t> k = std::nullopt);

/// Relaxation value. First stage: P[b, z] with z = Z(t). Second stage (z =
/// Z(t-1), budgets as of the period start):
///   reject: P[b, z];  accept: rbar_j + P[b - e_h, z];
///   probe:  max(r_jk + P[b - e_p - e_h, z], P[b - e_p, z]).
double probing_offline_relaxation(const ProbingInstance& inst, const ProbingState& state,
                                  std::span<const double> z, std::optional<std::size_t> j = {},
                                  std::optional<std::size_t> k = {});

/// Value after first-stage action u on arrival j, averaging the probe branch
/// over sub-types. `z` is Z(t-1). Probe cost is charged in the costed variant.
double first_stage_continuation(const ProbingInstance& inst, int b_h, int b_p,
                                std::span<const double> z, std::size_t j, Action u);

/// True (excluded) iff no optimal solution of the program at (b, z) has
/// x_ja >= 1 or x_jr >= 1, nor x_jp >= 1 together with x_jka >= 1 or
/// x_jkr >= 1 (the latter only when k is given).
bool probing_exclusion_check(const ProbingInstance& inst, int b_h, int b_p,
                             std::span<const double> z, const lp::LpSolution& x, std::size_t j,
                             std::optional<std::size_t> k = std::nullopt);

/// One episode; types and sub-types are drawn up front for every period.
Trajectory run_probing(const ProbingInstance& inst, Stream& rng, const SimOptions& opts);

}  // namespace rabbi::probing
