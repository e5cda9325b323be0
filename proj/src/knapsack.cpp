#include "rabbi/knapsack.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rabbi/error.hpp"

namespace rabbi::knapsack {

namespace {

constexpr double kScoreTol = 1e-9;

bool is_integral(double x) { return std::abs(x - std::round(x)) <= 1e-9; }

double value_tol(double v) { return 1e-9 * std::max(1.0, std::abs(v)); }

// Accept decision of the greedy fractional solution for type j only.
bool greedy_accepts(double b, std::span<const double> y, std::span<const double> w,
                    std::span<const double> z, std::span<const std::size_t> order, std::size_t j) {
  double room = std::max(0.0, b);
  for (std::size_t i : order) {
    if (y[i] <= 0.0 || z[i] <= 0.0) {
      if (i == j) return 0.0 >= z[i] - kScoreTol;
      continue;
    }
    const double take = room > 0.0 ? std::min(z[i], room / w[i]) : 0.0;
    if (i == j) return take >= z[i] - take - kScoreTol;
    room -= take * w[i];
    if (take < z[i]) room = 0.0;
  }
  return false;
}

}  // namespace

std::span<const double> KnapsackInstance::probs_at(int t) const {
  if (arrival_probs.size() == 1) return arrival_probs.front();
  return arrival_probs[static_cast<std::size_t>(horizon - t)];
}

void KnapsackInstance::validate() const {
  const std::size_t k = weights.size();
  if (k == 0) throw StructuralError("knapsack instance needs at least one type");
  if (rewards.size() != k) throw StructuralError("rewards and weights differ in length");
  if (horizon < 0) throw StructuralError("horizon must be nonnegative");
  if (!(budget >= 0.0) || !std::isfinite(budget)) throw StructuralError("budget must be >= 0");
  for (std::size_t j = 0; j < k; ++j) {
    if (!(weights[j] > 0.0) || !std::isfinite(weights[j]))
      throw StructuralError("weights must be positive");
    if (!std::isfinite(rewards[j])) throw StructuralError("rewards must be finite");
  }
  if (arrival_probs.size() != 1 && arrival_probs.size() != static_cast<std::size_t>(horizon))
    throw StructuralError("arrival_probs needs one row or one row per period");
  for (const auto& row : arrival_probs) {
    if (row.size() != k) throw StructuralError("arrival_probs row has the wrong length");
    double s = 0.0;
    for (double p : row) {
      if (!(p >= 0.0)) throw StructuralError("arrival probabilities must be nonnegative");
      s += p;
    }
    if (std::abs(s - 1.0) > 1e-12) throw StructuralError("arrival probabilities must sum to 1");
  }
}

std::vector<std::size_t> ratio_order(std::span<const double> y, std::span<const double> w) {
  std::vector<std::size_t> order(y.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return y[a] / w[a] > y[b] / w[b]; });
  return order;
}

KnapsackLpSolution greedy_knapsack(double b, std::span<const double> y, std::span<const double> w,
                                   std::span<const double> z, std::span<const std::size_t> order) {
  KnapsackLpSolution s;
  s.accept.assign(z.begin(), z.end());
  s.reject.assign(z.begin(), z.end());
  std::fill(s.accept.begin(), s.accept.end(), 0.0);
  double room = std::max(0.0, b);
  for (std::size_t j : order) {
    if (y[j] <= 0.0 || room <= 0.0 || z[j] <= 0.0) continue;
    const double take = std::min(z[j], room / w[j]);
    s.accept[j] = take;
    s.reject[j] = z[j] - take;
    s.value += y[j] * take;
    room -= take * w[j];
    if (take < z[j]) room = 0.0;
  }
  return s;
}

KnapsackLpSolution greedy_knapsack(double b, std::span<const double> y, std::span<const double> w,
                                   std::span<const double> z) {
  const auto order = ratio_order(y, w);
  return greedy_knapsack(b, y, w, z, order);
}

lp::StandardLp knapsack_program(double b, std::span<const double> y, std::span<const double> w,
                                std::span<const double> z) {
  const std::size_t n = y.size();
  lp::StandardLp p;
  p.objective.assign(2 * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) p.objective[2 * j] = y[j];
  std::vector<double> row(2 * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(row.begin(), row.end(), 0.0);
    row[2 * j] = 1.0;
    row[2 * j + 1] = 1.0;
    p.eq_matrix.append_row(row);
    p.eq_rhs.push_back(z[j]);
  }
  std::fill(row.begin(), row.end(), 0.0);
  for (std::size_t j = 0; j < n; ++j) row[2 * j] = w[j];
  p.ineq_matrix.append_row(row);
  p.ineq_rhs.push_back(b);
  return p;
}

bool knapsack_excluded(double b, std::span<const double> y, std::span<const double> w,
                       std::span<const double> z, std::size_t j) {
  const KnapsackLpSolution g = greedy_knapsack(b, y, w, z);
  if (g.accept[j] >= 1.0 - kScoreTol || g.reject[j] >= 1.0 - kScoreTol) return false;
  const lp::StandardLp p = knapsack_program(b, y, w, z);
  if (lp::max_on_optimal_face(p, g.value, 2 * j) >= 1.0 - kScoreTol) return false;
  if (lp::max_on_optimal_face(p, g.value, 2 * j + 1) >= 1.0 - kScoreTol) return false;
  return true;
}

bool knapsack_step_satisfying(double b, std::span<const double> y, std::span<const double> w,
                              std::span<const double> z, std::size_t j, Action a) {
  const auto order = ratio_order(y, w);
  const double now = greedy_knapsack(b, y, w, z, order).value;
  std::vector<double> next(z.begin(), z.end());
  next[j] -= 1.0;
  double after;
  if (a == Action::accept)
    after = y[j] + greedy_knapsack(b - w[j], y, w, next, order).value;
  else
    after = greedy_knapsack(b, y, w, next, order).value;
  return now <= after + value_tol(now);
}

std::vector<double> expected_counts(const KnapsackInstance& inst, int t) {
  std::vector<double> mu(inst.n(), 0.0);
  if (inst.arrival_probs.size() == 1) {
    for (std::size_t j = 0; j < inst.n(); ++j) mu[j] = t * inst.arrival_probs[0][j];
    return mu;
  }
  for (int l = 1; l <= t; ++l) {
    const auto p = inst.probs_at(l);
    for (std::size_t j = 0; j < inst.n(); ++j) mu[j] += p[j];
  }
  return mu;
}

double relaxed_value(const KnapsackInstance& inst, const KnapsackState& state,
                     std::span<const double> z) {
  if (z.size() != inst.n()) throw StructuralError("arrival counts have the wrong length");
  const double total = std::accumulate(z.begin(), z.end(), 0.0);
  if (std::abs(total - state.t) > 1e-9 * std::max(1.0, total))
    throw PreconditionError("arrival counts do not sum to the periods to go");
  return greedy_knapsack(state.b, inst.rewards, inst.weights, z).value;
}

double offline_ip_value(const KnapsackInstance& inst, std::span<const int> z, double b) {
  if (z.size() != inst.n()) throw StructuralError("arrival counts have the wrong length");
  for (double w : inst.weights)
    if (!is_integral(w)) throw PreconditionError("offline_ip_value requires integral weights");
  const long cap = static_cast<long>(std::floor(b + 1e-9));
  if (cap <= 0) return 0.0;
  const int zmax = z.empty() ? 0 : *std::max_element(z.begin(), z.end());
  if (static_cast<double>(inst.n()) * cap * zmax > 1e7)
    throw ScaleGuardError("offline_ip_value: n * b * max(z) exceeds 1e7");
  std::vector<double> best(static_cast<std::size_t>(cap) + 1, 0.0);
  for (std::size_t j = 0; j < inst.n(); ++j) {
    const long w = std::lround(inst.weights[j]);
    if (inst.rewards[j] <= 0.0 || w > cap) continue;
    for (int copy = 0; copy < z[j]; ++copy) {
      for (long c = cap; c >= w; --c)
        best[c] = std::max(best[c], best[c - w] + inst.rewards[j]);
    }
  }
  return best[cap];
}

Action rabbi_action(const KnapsackInstance& inst, const KnapsackState& state, std::size_t j,
                    std::span<const double> mu) {
  if (inst.weights[j] > state.b) return Action::reject;
  const KnapsackLpSolution s = greedy_knapsack(state.b, inst.rewards, inst.weights, mu);
  return s.accept[j] >= s.reject[j] - kScoreTol ? Action::accept : Action::reject;
}

KnapsackDp dp_online(const KnapsackInstance& inst) {
  inst.validate();
  if (!is_integral(inst.budget)) throw PreconditionError("DP oracle requires an integral budget");
  for (double w : inst.weights)
    if (!is_integral(w)) throw PreconditionError("DP oracle requires integral weights");
  KnapsackDp dp;
  dp.horizon = inst.horizon;
  dp.budget = static_cast<int>(std::lround(inst.budget));
  dp.n = inst.n();
  const double cells = static_cast<double>(dp.horizon) * (dp.budget + 1) * dp.n;
  if (cells > 1e8) throw ScaleGuardError("knapsack DP: T * (B+1) * n exceeds 1e8");
  dp.accept.assign(static_cast<std::size_t>(cells), 0);
  std::vector<double> prev(dp.budget + 1, 0.0), cur(dp.budget + 1, 0.0);
  for (int t = 1; t <= dp.horizon; ++t) {
    const auto p = inst.probs_at(t);
    for (int b = 0; b <= dp.budget; ++b) {
      double v = 0.0;
      for (std::size_t j = 0; j < dp.n; ++j) {
        const long w = std::lround(inst.weights[j]);
        double best = prev[b];
        if (w <= b && inst.rewards[j] + prev[b - w] >= prev[b]) {
          best = inst.rewards[j] + prev[b - w];
          dp.accept[((static_cast<std::size_t>(t) - 1) * (dp.budget + 1) + b) * dp.n + j] = 1;
        }
        v += p[j] * best;
      }
      cur[b] = v;
    }
    std::swap(prev, cur);
  }
  dp.value = prev[dp.budget];
  return dp;
}

double dp_online_value(const KnapsackInstance& inst) { return dp_online(inst).value; }

double rmax_bound(const KnapsackInstance& inst) {
  double best = 0.0;
  for (std::size_t j = 0; j < inst.n(); ++j)
    for (std::size_t i = 0; i < inst.n(); ++i)
      best = std::max(best, inst.weights[i] * inst.rewards[j] / inst.weights[j] - inst.rewards[i]);
  return best;
}

Trajectory run_knapsack(const KnapsackInstance& inst, Stream& rng, Policy policy,
                        const SimOptions& opts, const KnapsackDp* table) {
  if (policy == Policy::dp_table && table == nullptr)
    throw PreconditionError("dp_table policy needs a DP table");
  const int horizon = inst.horizon;
  const std::size_t n = inst.n();
  std::vector<int> arrivals(static_cast<std::size_t>(horizon));
  std::vector<double> z(n, 0.0);
  for (int s = 0; s < horizon; ++s) {
    arrivals[s] = static_cast<int>(rng.categorical(inst.probs_at(horizon - s)));
    z[arrivals[s]] += 1.0;
  }
  const auto order = ratio_order(inst.rewards, inst.weights);

  Trajectory tr;
  tr.offline_benchmark_value = greedy_knapsack(inst.budget, inst.rewards, inst.weights, z, order).value;
  double b = inst.budget;
  std::vector<double> mu(n);
  for (int s = 0; s < horizon; ++s) {
    const int t = horizon - s;
    const std::size_t j = static_cast<std::size_t>(arrivals[s]);
    StepRecord rec;
    rec.t = t;
    rec.budget = b;
    rec.input = static_cast<int>(j);
    Action a;
    if (policy == Policy::rabbi) {
      if (inst.arrival_probs.size() == 1) {
        for (std::size_t i = 0; i < n; ++i) mu[i] = t * inst.arrival_probs[0][i];
      } else {
        mu = expected_counts(inst, t);
      }
      a = inst.weights[j] <= b && greedy_accepts(b, inst.rewards, inst.weights, mu, order, j)
              ? Action::accept
              : Action::reject;
    } else {
      const int bi = static_cast<int>(std::lround(b));
      a = inst.weights[j] <= b && table->accepts(t, bi, j) ? Action::accept : Action::reject;
    }
    rec.action = a;
    if (opts.diagnostics) {
      rec.flags.evaluated = true;
      rec.flags.satisfying = knapsack_step_satisfying(b, inst.rewards, inst.weights, z, j, a);
      rec.flags.excluded = z[j] < 2.0 && knapsack_excluded(b, inst.rewards, inst.weights, z, j);
    }
    if (a == Action::accept) {
      rec.reward = inst.rewards[j];
      b -= inst.weights[j];
    }
    z[j] -= 1.0;
    tr.record(rec, opts.record_steps);
  }
  return tr;
}

}  // namespace rabbi::knapsack
