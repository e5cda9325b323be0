#include "rabbi/learning.hpp"

#include <algorithm>
#include <cmath>

#include "rabbi/error.hpp"

namespace rabbi::learning {

namespace {

constexpr double kScoreTol = 1e-9;

}  // namespace

std::vector<double> LearningInstance::means() const {
  std::vector<double> mu(rewards.size());
  for (std::size_t j = 0; j < rewards.size(); ++j) mu[j] = rewards[j].mean();
  return mu;
}

double LearningInstance::separation() const {
  const auto mu = means();
  double best = 0.0;
  bool any = false;
  for (std::size_t j = 0; j < n(); ++j)
    for (std::size_t i = j + 1; i < n(); ++i) {
      const double d = std::abs(mu[j] / weights[j] - mu[i] / weights[i]);
      if (!any || d < best) best = d;
      any = true;
    }
  return best;
}

void LearningInstance::validate() const {
  const std::size_t k = n();
  if (k == 0) throw StructuralError("learning instance needs at least one type");
  if (arrival_probs.size() != k || rewards.size() != k)
    throw StructuralError("learning instance arrays disagree on the number of types");
  if (horizon < 0 || !(budget >= 0.0)) throw StructuralError("horizon and budget must be >= 0");
  double s = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    if (!(weights[j] > 0.0)) throw StructuralError("weights must be positive");
    if (!(arrival_probs[j] >= 0.0)) throw StructuralError("arrival probabilities must be >= 0");
    s += arrival_probs[j];
    rewards[j].validate();
  }
  if (std::abs(s - 1.0) > 1e-12) throw StructuralError("arrival probabilities must sum to 1");
}

knapsack::KnapsackLpSolution knapsack_lp_solve(double b, std::span<const double> y,
                                               std::span<const double> w,
                                               std::span<const double> z) {
  return knapsack::greedy_knapsack(b, y, w, z);
}

Action learning_rabbi_step(const LearningInstance& inst, int t, double b,
                           const EmpiricalStats& stats, std::size_t j,
                           std::span<const double> mu) {
  if (t < 1) throw PreconditionError("learning_rabbi_step needs t >= 1");
  if (inst.weights[j] > b) return Action::reject;
  const auto s = knapsack::greedy_knapsack(b, stats.means, inst.weights, mu);
  return s.accept[j] >= s.reject[j] - kScoreTol ? Action::accept : Action::reject;
}

void update_stats_in_place(EmpiricalStats& stats, std::size_t j, double reward) {
  ++stats.counts[j];
  stats.means[j] += (reward - stats.means[j]) / static_cast<double>(stats.counts[j]);
}

EmpiricalStats update_stats(EmpiricalStats stats, std::size_t j, double reward) {
  update_stats_in_place(stats, j, reward);
  return stats;
}

std::vector<std::size_t> ranking(std::span<const double> y, std::span<const double> w) {
  return knapsack::ratio_order(y, w);
}

ExplorerSchedule naive_explorer_schedule(const LearningInstance& inst, int horizon) {
  const double delta = inst.separation();
  if (!(delta > 0.0)) throw PreconditionError("explorer schedule needs a positive separation");
  ExplorerSchedule s;
  const double lt = horizon > 1 ? std::log(static_cast<double>(horizon)) : 0.0;
  for (double w : inst.weights) {
    const double need = std::ceil(8.0 * lt / ((w * delta) * (w * delta)) - 1e-9);
    s.required_samples.push_back(std::max<std::int64_t>(1, static_cast<std::int64_t>(need)));
  }
  return s;
}

BanditDecision bandits_rabbi_step(const LearningInstance& inst, int t, double b,
                                  const EmpiricalStats& stats, std::size_t j,
                                  const ExplorerSchedule& schedule) {
  if (stats.counts[j] < schedule.required_samples[j] && inst.weights[j] <= b)
    return BanditDecision::explore_accept;
  std::vector<double> mu(inst.n());
  for (std::size_t i = 0; i < inst.n(); ++i) mu[i] = t * inst.arrival_probs[i];
  return learning_rabbi_step(inst, t, b, stats, j, mu) == Action::accept
             ? BanditDecision::exploit_accept
             : BanditDecision::exploit_reject;
}

Trajectory run_learning(const LearningInstance& inst, Stream& rng, const SimOptions& opts) {
  const std::size_t n = inst.n();
  const int horizon = inst.horizon;
  const auto truth = inst.means();
  const auto true_rank = ranking(truth, inst.weights);

  EmpiricalStats stats;
  stats.counts.assign(n, 1);
  stats.means.resize(n);
  for (std::size_t j = 0; j < n; ++j)
    stats.means[j] = inst.rewards[j].values[rng.categorical(inst.rewards[j].probs)];

  std::vector<int> types(static_cast<std::size_t>(horizon));
  std::vector<double> draws(types.size());
  std::vector<double> z(n, 0.0);
  for (int s = 0; s < horizon; ++s) {
    types[s] = static_cast<int>(rng.categorical(inst.arrival_probs));
    const auto& d = inst.rewards[types[s]];
    draws[s] = d.values[rng.categorical(d.probs)];
    z[types[s]] += 1.0;
  }

  ExplorerSchedule schedule;
  if (inst.feedback == Feedback::censored) schedule = naive_explorer_schedule(inst, horizon);

  Trajectory tr;
  tr.offline_benchmark_value = knapsack::greedy_knapsack(inst.budget, truth, inst.weights, z).value;
  double b = inst.budget;
  std::vector<double> mu(n);
  for (int s = 0; s < horizon; ++s) {
    const int t = horizon - s;
    const std::size_t j = static_cast<std::size_t>(types[s]);
    StepRecord rec;
    rec.t = t;
    rec.budget = b;
    rec.input = static_cast<int>(j);

    Action a;
    if (inst.feedback == Feedback::censored) {
      const BanditDecision d = bandits_rabbi_step(inst, t, b, stats, j, schedule);
      a = d == BanditDecision::exploit_reject ? Action::reject : Action::accept;
      rec.flags.explore = d == BanditDecision::explore_accept;
    } else {
      for (std::size_t i = 0; i < n; ++i) mu[i] = t * inst.arrival_probs[i];
      a = learning_rabbi_step(inst, t, b, stats, j, mu);
    }
    rec.action = a;

    if (opts.diagnostics) {
      rec.flags.evaluated = true;
      rec.flags.satisfying = knapsack::knapsack_step_satisfying(b, truth, inst.weights, z, j, a);
      rec.flags.excluded = z[j] < 2.0 && knapsack::knapsack_excluded(b, truth, inst.weights, z, j);
      if (!rec.flags.explore) {
        rec.flags.ranking_evaluated = true;
        rec.flags.ranking_ok = ranking(stats.means, inst.weights) == true_rank;
      }
    }

    if (a == Action::accept) {
      rec.reward = draws[s];
      b -= inst.weights[j];
    }
    if (inst.feedback == Feedback::full || a == Action::accept)
      update_stats_in_place(stats, j, draws[s]);
    z[j] -= 1.0;
    tr.record(rec, opts.record_steps);
  }
  return tr;
}

}  // namespace rabbi::learning
