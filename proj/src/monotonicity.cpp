#include "rabbi/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "rabbi/error.hpp"

namespace rabbi {

namespace {

constexpr double kTripleGuard = 1e6;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Calls fn for every vector of n nonnegative ints summing to total.
void for_each_composition(int total, std::size_t n, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> z(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == n) {
      z[i] = left;
      fn(z);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      z[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, total);
}

int integral_budget(double b) {
  if (std::abs(b - std::round(b)) > 1e-9)
    throw PreconditionError("monotonicity check needs an integral budget");
  return static_cast<int>(std::lround(b));
}

void note(MonotonicityReport& rep, MonotonicityViolation v) {
  ++rep.triples;
  if (v.excluded) {
    ++rep.excluded_triples;
    rep.max_excluded_overshoot = std::max(rep.max_excluded_overshoot, v.overshoot);
    if (v.accept_feasible)
      rep.max_excluded_overshoot_feasible =
          std::max(rep.max_excluded_overshoot_feasible, v.overshoot);
  }
  if (v.overshoot > rep.tolerance) {
    if (!v.excluded) ++rep.nonexcluded_violations;
    rep.violations.push_back(std::move(v));
  }
}

MonotonicityReport check_knapsack_family(std::span<const double> y, std::span<const double> w,
                                         std::span<const double> probs, double budget, int max_T,
                                         double tol, double pert) {
  const std::size_t n = y.size();
  const int B = integral_budget(budget);
  double count = 0.0;
  for (int t = 1; t <= max_T; ++t) count += (B + 1.0) * n * binomial(t - 1 + n - 1, n - 1);
  if (count > kTripleGuard) throw ScaleGuardError("monotonicity check exceeds 1e6 triples");

  MonotonicityReport rep;
  rep.tolerance = tol;
  std::vector<double> yy(y.begin(), y.end()), ww(w.begin(), w.end());
  knapsack::KnapsackInstance tmp{ww, yy, {}, 0, 0.0};
  rep.rmax = knapsack::rmax_bound(tmp);
  const auto order = knapsack::ratio_order(y, w);
  std::vector<double> zn(n), zt(n);
  for (int t = 1; t <= max_T; ++t) {
    for (int b = 0; b <= B; ++b) {
      for (std::size_t j = 0; j < n; ++j) {
        if (probs[j] <= 0.0) continue;
        for_each_composition(t - 1, n, [&](const std::vector<int>& zprev) {
          for (std::size_t i = 0; i < n; ++i) {
            zn[i] = zprev[i];
            zt[i] = zprev[i];
          }
          zt[j] += 1.0;
          const double lhs = knapsack::greedy_knapsack(b, y, w, zt, order).value + pert;
          double rhs = knapsack::greedy_knapsack(b, y, w, zn, order).value;
          if (w[j] <= b) rhs = std::max(rhs, y[j] + knapsack::greedy_knapsack(b - w[j], y, w, zn, order).value);
          MonotonicityViolation v;
          v.t = t;
          v.b = b;
          v.arrival = static_cast<int>(j);
          v.z_next = zprev;
          v.overshoot = lhs - rhs;
          v.excluded = knapsack::knapsack_excluded(b, y, w, zt, j);
          v.accept_feasible = w[j] <= b;
          note(rep, std::move(v));
        });
      }
    }
  }
  return rep;
}

}  // namespace

MonotonicityReport check_bellman_monotonicity(const knapsack::KnapsackInstance& inst, int max_T,
                                              double tolerance, double lhs_perturbation) {
  inst.validate();
  if (inst.arrival_probs.size() != 1)
    throw PreconditionError("monotonicity check supports i.i.d. arrivals only");
  return check_knapsack_family(inst.rewards, inst.weights, inst.arrival_probs[0], inst.budget,
                               max_T, tolerance, lhs_perturbation);
}

MonotonicityReport check_bellman_monotonicity(const learning::LearningInstance& inst, int max_T,
                                              double tolerance, double lhs_perturbation) {
  inst.validate();
  const auto means = inst.means();
  return check_knapsack_family(means, inst.weights, inst.arrival_probs, inst.budget, max_T,
                               tolerance, lhs_perturbation);
}

MonotonicityReport check_bellman_monotonicity(const probing::ProbingInstance& inst, int max_T,
                                              double tolerance, double lhs_perturbation) {
  inst.validate();
  const std::size_t n = inst.n();
  const std::size_t m = inst.m();
  const int bp_max = inst.variant == probing::Variant::budgeted ? inst.probe_budget : 0;
  double count = 0.0;
  for (int t = 1; t <= max_T; ++t)
    count += (inst.hire_budget + 1.0) * (bp_max + 1.0) * n * m * binomial(t - 1 + n - 1, n - 1);
  if (count > kTripleGuard) throw ScaleGuardError("monotonicity check exceeds 1e6 triples");

  MonotonicityReport rep;
  rep.tolerance = tolerance;
  rep.rmax = inst.max_reward();
  std::vector<double> zn(n), zt(n);
  for (int t = 1; t <= max_T; ++t) {
    for (int bh = 0; bh <= inst.hire_budget; ++bh) {
      for (int bp = 0; bp <= bp_max; ++bp) {
        for (std::size_t j = 0; j < n; ++j) {
          if (inst.arrival_probs[j] <= 0.0) continue;
          for_each_composition(t - 1, n, [&](const std::vector<int>& zprev) {
            for (std::size_t i = 0; i < n; ++i) zn[i] = zt[i] = zprev[i];
            zt[j] += 1.0;
            const lp::LpSolution x = probing::probing_lp(inst, bh, bp, zt);
            const double rej = probing::probing_value(inst, bh, bp, zn);
            const double acc =
                bh > 0 ? probing::first_stage_continuation(inst, bh, bp, zn, j, Action::accept) : rej;
            const bool probe_ok = bh > 0 && (inst.variant == probing::Variant::costed || bp > 0);
            const int bp_next = inst.variant == probing::Variant::budgeted ? bp - 1 : bp;
            for (std::size_t k = 0; k < m; ++k) {
              if (inst.sub_probs[j][k] <= 0.0) continue;
              double rhs = std::max(rej, acc);
              if (probe_ok) {
                const double hire =
                    inst.rewards[j][k] + probing::probing_value(inst, bh - 1, bp_next, zn);
                const double pass = probing::probing_value(inst, bh, bp_next, zn);
                rhs = std::max(rhs, -inst.cost(j) + std::max(hire, pass));
              }
              MonotonicityViolation v;
              v.t = t;
              v.b = bh;
              v.b2 = bp;
              v.arrival = static_cast<int>(j);
              v.sub_type = static_cast<int>(k);
              v.z_next = zprev;
              v.overshoot = x.value + lhs_perturbation - rhs;
              v.excluded = probing::probing_exclusion_check(inst, bh, bp, zt, x, j, k);
              v.accept_feasible = bh > 0;
              note(rep, std::move(v));
            }
          });
        }
      }
    }
  }
  return rep;
}

}  // namespace rabbi
