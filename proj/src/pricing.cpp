#include "rabbi/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rabbi/error.hpp"

namespace rabbi::pricing {

namespace {

constexpr double kScoreTol = 1e-9;

struct HullPoint {
  double q;
  double rev;
  std::size_t index;
};

double cross(const HullPoint& o, const HullPoint& a, const HullPoint& b) {
  return (a.q - o.q) * (b.rev - o.rev) - (a.rev - o.rev) * (b.q - o.q);
}

void check_menu(std::span<const double> q, std::span<const double> f) {
  if (q.size() != f.size()) throw StructuralError("q and f differ in length");
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(q[i] >= 0.0 && q[i] <= 1.0)) throw StructuralError("acceptance probabilities must lie in [0,1]");
    if (i > 0 && q[i] < q[i - 1] - 1e-12) throw StructuralError("acceptance probabilities must be nondecreasing");
  }
}

// Vertices of the upper concave hull of (0,0) and (q_i, f_i q_i), origin
// excluded, truncated at the first vertex of maximal revenue.
std::vector<HullPoint> revenue_hull(std::span<const double> q, std::span<const double> f) {
  std::vector<HullPoint> hull{{0.0, 0.0, static_cast<std::size_t>(-1)}};
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] <= 0.0) continue;
    const HullPoint p{q[i], f[i] * q[i], i};
    if (hull.size() > 1 && std::abs(hull.back().q - p.q) <= 1e-15) {
      if (p.rev <= hull.back().rev) continue;
      hull.pop_back();
    }
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= 0.0) hull.pop_back();
    hull.push_back(p);
  }
  hull.erase(hull.begin());
  std::size_t top = hull.size();
  double best = 0.0;
  for (std::size_t v = 0; v < hull.size(); ++v) {
    if (hull[v].rev > best) {
      best = hull[v].rev;
      top = v;
    }
  }
  if (top == hull.size()) return {};
  hull.resize(top + 1);
  return hull;
}

double log_binomial_pmf(int n, int k, double lq, double lp) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * lq +
         (n - k) * lp;
}

}  // namespace

double DiscreteDistribution::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * probs[i];
  return s;
}

void DiscreteDistribution::validate() const {
  if (values.empty() || values.size() != probs.size())
    throw StructuralError("distribution needs matching, nonempty values and probabilities");
  double s = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0) || !std::isfinite(values[i]))
      throw StructuralError("distribution entries must be finite with nonnegative mass");
    s += probs[i];
  }
  if (std::abs(s - 1.0) > 1e-12) throw StructuralError("probabilities must sum to 1");
}

std::vector<double> PricingInstance::acceptance_probs() const {
  std::vector<double> q(prices.size(), 0.0);
  for (std::size_t i = 0; i < prices.size(); ++i)
    for (std::size_t v = 0; v < valuation.values.size(); ++v)
      if (valuation.values[v] >= prices[i]) q[i] += valuation.probs[v];
  for (double& x : q) x = std::min(1.0, x);
  return q;
}

void PricingInstance::validate() const {
  if (prices.empty()) throw StructuralError("price menu is empty");
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (!(prices[i] > 0.0) || !std::isfinite(prices[i]))
      throw StructuralError("prices must be positive and finite");
    if (i > 0 && !(prices[i] < prices[i - 1]))
      throw StructuralError("prices must be strictly decreasing");
  }
  valuation.validate();
  if (horizon < 0 || inventory < 0) throw StructuralError("horizon and inventory must be >= 0");
}

lp::StandardLp pricing_program(double t, double b, std::span<const double> q,
                               std::span<const double> f) {
  lp::StandardLp p;
  const std::size_t m = q.size();
  p.objective.resize(m);
  for (std::size_t i = 0; i < m; ++i) p.objective[i] = f[i] * q[i];
  p.ineq_matrix.append_row(q);
  p.ineq_rhs.push_back(b);
  std::vector<double> ones(m, 1.0);
  p.ineq_matrix.append_row(ones);
  p.ineq_rhs.push_back(t);
  return p;
}

PricingLpResult pricing_lp_closed_form(double t, double b, std::span<const double> q,
                                       std::span<const double> f) {
  check_menu(q, f);
  PricingLpResult r;
  r.x.assign(q.size(), 0.0);
  if (t <= 0.0 || b <= 0.0) return r;
  const auto hull = revenue_hull(q, f);
  if (hull.empty()) return r;
  if (b <= t * hull.front().q) {
    r.x[hull.front().index] = b / hull.front().q;
  } else if (b > t * hull.back().q) {
    r.x[hull.back().index] = t;
  } else {
    for (std::size_t l = 0; l + 1 < hull.size(); ++l) {
      const HullPoint& lo = hull[l];
      const HullPoint& hi = hull[l + 1];
      if (b <= t * hi.q) {
        r.x[lo.index] = (t * hi.q - b) / (hi.q - lo.q);
        r.x[hi.index] = (b - t * lo.q) / (hi.q - lo.q);
        break;
      }
    }
  }
  for (std::size_t i = 0; i < q.size(); ++i) r.value += f[i] * q[i] * r.x[i];
  return r;
}

std::optional<std::size_t> pricing_rabbi_step(int t, int b, std::span<const double> q_bar,
                                              std::span<const double> f) {
  if (b <= 0) return std::nullopt;
  const PricingLpResult r = pricing_lp_closed_form(t, b, q_bar, f);
  const double top = *std::max_element(r.x.begin(), r.x.end());
  const double tol = kScoreTol * std::max(1.0, std::abs(top));
  for (std::size_t i = 0; i < r.x.size(); ++i)
    if (r.x[i] >= top - tol) return i;
  return 0;
}

AcceptanceMartingale::AcceptanceMartingale(const std::vector<std::vector<std::uint8_t>>& y) {
  counts_.assign(y.size(), 0);
  t_ = y.empty() ? 0 : static_cast<int>(y.front().size());
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::uint8_t v : y[i]) counts_[i] += v;
}

std::vector<double> AcceptanceMartingale::q() const {
  std::vector<double> out(counts_.size(), 0.0);
  if (t_ <= 0) return out;
  for (std::size_t i = 0; i < counts_.size(); ++i)
    out[i] = static_cast<double>(counts_[i]) / t_;
  return out;
}

void AcceptanceMartingale::step(std::span<const std::uint8_t> column) {
  if (t_ <= 0) throw PreconditionError("acceptance martingale already at t = 0");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] -= column[i];
  --t_;
}

std::vector<std::vector<std::uint8_t>> acceptance_matrix(std::span<const double> valuations,
                                                         std::span<const double> f) {
  std::vector<std::vector<std::uint8_t>> y(f.size(), std::vector<std::uint8_t>(valuations.size()));
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t s = 0; s < valuations.size(); ++s) y[i][s] = valuations[s] >= f[i] ? 1 : 0;
  return y;
}

double offline_pricing_benchmark(const PricingInstance& inst,
                                 const std::vector<std::vector<std::uint8_t>>& y) {
  const AcceptanceMartingale mart(y);
  if (mart.t() == 0) return 0.0;
  return pricing_lp_closed_form(mart.t(), inst.inventory, mart.q(), inst.prices).value;
}

PricingDp dp_pricing(const PricingInstance& inst) {
  inst.validate();
  const double cells = static_cast<double>(inst.horizon) * inst.inventory;
  if (cells > 1e8) throw ScaleGuardError("pricing DP: T * B exceeds 1e8");
  const auto q = inst.acceptance_probs();
  PricingDp dp;
  dp.horizon = inst.horizon;
  dp.inventory = inst.inventory;
  dp.policy.assign(static_cast<std::size_t>(cells), 0);
  std::vector<double> prev(inst.inventory + 1, 0.0), cur(inst.inventory + 1, 0.0);
  for (int t = 1; t <= inst.horizon; ++t) {
    cur[0] = 0.0;
    for (int b = 1; b <= inst.inventory; ++b) {
      double best = -std::numeric_limits<double>::infinity();
      std::uint16_t arg = 0;
      for (std::size_t j = 0; j < q.size(); ++j) {
        const double v = q[j] * (inst.prices[j] + prev[b - 1]) + (1.0 - q[j]) * prev[b];
        if (v > best) {
          best = v;
          arg = static_cast<std::uint16_t>(j);
        }
      }
      cur[b] = best;
      dp.policy[(static_cast<std::size_t>(t) - 1) * inst.inventory + (b - 1)] = arg;
    }
    std::swap(prev, cur);
  }
  dp.value = prev[inst.inventory];
  return dp;
}

double dp_pricing_value(const PricingInstance& inst) { return dp_pricing(inst).value; }

double expected_capped_binomial(int n, double q, int cap) {
  if (n <= 0 || cap <= 0 || q <= 0.0) return 0.0;
  if (q >= 1.0) return std::min(n, cap);
  const double lq = std::log(q);
  const double lp = std::log1p(-q);
  double e = 0.0;
  for (int k = 1; k <= n; ++k) e += std::min(k, cap) * std::exp(log_binomial_pmf(n, k, lq, lp));
  return e;
}

StaticPrice static_price_baseline(const PricingInstance& inst) {
  const auto q = inst.acceptance_probs();
  const double T = inst.horizon;
  const double B = inst.inventory;
  StaticPrice out;
  bool found = false;
  double best = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (T * q[j] > B + 1e-12) continue;
    const double rev = inst.prices[j] * T * q[j];
    if (!found || rev > best) {
      found = true;
      best = rev;
      out.index = j;
    }
  }
  if (!found) {
    // Market-clearing menu price: demand closest to B from above; monopoly:
    // argmax f q. Keep the better under the inventory cap.
    std::size_t clearing = 0;
    for (std::size_t j = 0; j < q.size(); ++j)
      if (T * q[j] < T * q[clearing]) clearing = j;
    std::size_t monopoly = 0;
    for (std::size_t j = 0; j < q.size(); ++j)
      if (inst.prices[j] * q[j] > inst.prices[monopoly] * q[monopoly]) monopoly = j;
    auto capped = [&](std::size_t j) { return inst.prices[j] * std::min(T * q[j], B); };
    out.index = capped(monopoly) > capped(clearing) ? monopoly : clearing;
  }
  out.expected_value =
      inst.prices[out.index] * expected_capped_binomial(inst.horizon, q[out.index], inst.inventory);
  return out;
}

double full_information_value(const PricingInstance& inst) {
  const auto q = inst.acceptance_probs();
  double v = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double next = i + 1 < q.size() ? inst.prices[i + 1] : 0.0;
    v += (inst.prices[i] - next) * expected_capped_binomial(inst.horizon, q[i], inst.inventory);
  }
  return v;
}

double selection_program(double t, double b, std::span<const double> q, std::span<const double> f,
                         double target, std::size_t j) {
  check_menu(q, f);
  if (j >= q.size()) throw StructuralError("price index out of range");
  if (t <= 0.0) return 0.0;
  lp::StandardLp p = pricing_program(t, b, q, f);
  std::vector<double> row(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) row[i] = -f[i] * q[i];
  p.ineq_matrix.append_row(row);
  p.ineq_rhs.push_back(-(target - 1e-9 * std::max(1.0, std::abs(target))));
  std::fill(p.objective.begin(), p.objective.end(), 0.0);
  p.objective[j] = 1.0;
  const lp::LpSolution s = lp::solve_lp(p);
  if (s.status == lp::LpStatus::infeasible)
    throw StructuralError("selection program: target value is unattainable");
  return s.value;
}

Trajectory run_pricing(const PricingInstance& inst, Stream& rng, Policy policy,
                       const SimOptions& opts, const PricingDp* table) {
  std::vector<double> valuations(static_cast<std::size_t>(inst.horizon));
  for (double& v : valuations) v = inst.valuation.values[rng.categorical(inst.valuation.probs)];
  return run_pricing_on(inst, valuations, policy, opts, table);
}

Trajectory run_pricing_on(const PricingInstance& inst, std::span<const double> valuations,
                          Policy policy, const SimOptions& opts, const PricingDp* table) {
  if (policy == Policy::dp_table && table == nullptr)
    throw PreconditionError("dp_table policy needs a DP table");
  if (valuations.size() != static_cast<std::size_t>(inst.horizon))
    throw StructuralError("need one valuation per period");
  const auto& f = inst.prices;
  const auto q_bar = inst.acceptance_probs();
  const auto y = acceptance_matrix(valuations, f);
  const std::size_t fixed = policy == Policy::static_price ? static_price_baseline(inst).index : 0;

  Trajectory tr;
  tr.offline_benchmark_value = offline_pricing_benchmark(inst, y);
  AcceptanceMartingale mart(y);
  std::vector<std::uint8_t> column(f.size());
  int b = inst.inventory;
  for (int s = 0; s < inst.horizon; ++s) {
    const int t = inst.horizon - s;
    StepRecord rec;
    rec.t = t;
    rec.budget = b;
    std::optional<std::size_t> j;
    if (b > 0) {
      switch (policy) {
        case Policy::rabbi:
          j = pricing_rabbi_step(t, b, q_bar, f);
          break;
        case Policy::static_price:
          j = fixed;
          break;
        case Policy::dp_table:
          j = table->action(t, b);
          break;
      }
    }
    if (j) {
      rec.action = Action::post;
      rec.price = static_cast<int>(*j);
      if (opts.diagnostics) {
        const auto Q = mart.q();
        const double target = pricing_lp_closed_form(t, b, Q, f).value;
        rec.flags.evaluated = true;
        rec.flags.satisfying = selection_program(t, b, Q, f, target, *j) >= 1.0 - kScoreTol;
        rec.flags.excluded = b < 4 || t == 1;
      }
      if (valuations[s] >= f[*j]) {
        rec.reward = f[*j];
        --b;
      }
    } else {
      rec.action = Action::halt;
    }
    for (std::size_t i = 0; i < f.size(); ++i) column[i] = y[i][s];
    mart.step(column);
    tr.record(rec, opts.record_steps);
  }
  return tr;
}

}  // namespace rabbi::pricing
