#include "rabbi/probing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rabbi/error.hpp"

namespace rabbi::probing {

namespace {

constexpr double kScoreTol = 1e-9;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double value_tol(double v) { return 1e-9 * std::max(1.0, std::abs(v)); }

bool can_probe(const ProbingInstance& inst, int b_h, int b_p) {
  if (b_h <= 0) return false;
  return inst.variant == Variant::costed || b_p > 0;
}

int probe_budget_after(const ProbingInstance& inst, int b_p) {
  return inst.variant == Variant::budgeted ? b_p - 1 : b_p;
}

}  // namespace

double ProbingInstance::mean_reward(std::size_t j) const {
  double s = 0.0;
  for (std::size_t k = 0; k < m(); ++k) s += rewards[j][k] * sub_probs[j][k];
  return s;
}

double ProbingInstance::max_reward() const {
  double best = 0.0;
  for (const auto& row : rewards)
    for (double r : row) best = std::max(best, r);
  return best;
}

double ProbingInstance::cost(std::size_t j) const {
  if (variant != Variant::costed || probe_cost.empty()) return 0.0;
  return probe_cost[j];
}

void ProbingInstance::validate() const {
  const std::size_t types = n();
  if (types == 0 || m() == 0) throw StructuralError("probing instance needs types and sub-types");
  if (sub_probs.size() != types || arrival_probs.size() != types)
    throw StructuralError("probing instance arrays disagree on the number of types");
  if (!probe_cost.empty() && probe_cost.size() != types)
    throw StructuralError("probe_cost has the wrong length");
  if (horizon < 0 || hire_budget < 0 || probe_budget < 0)
    throw StructuralError("horizon and budgets must be nonnegative");
  double ps = 0.0;
  for (double p : arrival_probs) {
    if (!(p >= 0.0)) throw StructuralError("arrival probabilities must be nonnegative");
    ps += p;
  }
  if (std::abs(ps - 1.0) > 1e-12) throw StructuralError("arrival probabilities must sum to 1");
  for (std::size_t j = 0; j < types; ++j) {
    if (rewards[j].size() != m() || sub_probs[j].size() != m())
      throw StructuralError("reward and sub-type rows must all have length m");
    double s = 0.0;
    for (std::size_t k = 0; k < m(); ++k) {
      if (!(sub_probs[j][k] >= 0.0)) throw StructuralError("sub-type probabilities must be >= 0");
      s += sub_probs[j][k];
      if (k > 0 && !(rewards[j][k] > rewards[j][k - 1]))
        throw StructuralError("sub-type rewards must be strictly increasing");
    }
    if (std::abs(s - 1.0) > 1e-12) throw StructuralError("sub-type probabilities must sum to 1");
    if (!(rewards[j].back() > 0.0)) throw StructuralError("top sub-type reward must be positive");
    if (!probe_cost.empty() && !(probe_cost[j] >= 0.0))
      throw StructuralError("probe costs must be nonnegative");
  }
}

Layout layout_of(const ProbingInstance& inst) { return Layout{inst.n(), inst.m()}; }

lp::StandardLp probing_program(const ProbingInstance& inst, int b_h, int b_p,
                               std::span<const double> z) {
  const Layout L = layout_of(inst);
  if (z.size() != L.n) throw StructuralError("arrival counts have the wrong length");
  lp::StandardLp p;
  p.objective.assign(L.size(), 0.0);
  for (std::size_t j = 0; j < L.n; ++j) {
    p.objective[L.accept(j)] = inst.mean_reward(j);
    p.objective[L.probe(j)] = -inst.cost(j);
    for (std::size_t k = 0; k < L.m; ++k) p.objective[L.sub_accept(j, k)] = inst.rewards[j][k];
  }
  std::vector<double> row(L.size());
  for (std::size_t j = 0; j < L.n; ++j) {
    std::fill(row.begin(), row.end(), 0.0);
    row[L.accept(j)] = row[L.probe(j)] = row[L.reject(j)] = 1.0;
    p.eq_matrix.append_row(row);
    p.eq_rhs.push_back(z[j]);
  }
  for (std::size_t j = 0; j < L.n; ++j) {
    for (std::size_t k = 0; k < L.m; ++k) {
      std::fill(row.begin(), row.end(), 0.0);
      row[L.sub_accept(j, k)] = row[L.sub_reject(j, k)] = 1.0;
      row[L.probe(j)] = -inst.sub_probs[j][k];
      p.eq_matrix.append_row(row);
      p.eq_rhs.push_back(0.0);
    }
  }
  std::fill(row.begin(), row.end(), 0.0);
  for (std::size_t j = 0; j < L.n; ++j) {
    row[L.accept(j)] = 1.0;
    for (std::size_t k = 0; k < L.m; ++k) row[L.sub_accept(j, k)] = 1.0;
  }
  p.ineq_matrix.append_row(row);
  p.ineq_rhs.push_back(b_h);
  if (inst.variant == Variant::budgeted) {
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t j = 0; j < L.n; ++j) row[L.probe(j)] = 1.0;
    p.ineq_matrix.append_row(row);
    p.ineq_rhs.push_back(b_p);
  }
  return p;
}

lp::LpSolution probing_lp(const ProbingInstance& inst, int b_h, int b_p,
                          std::span<const double> z) {
  return lp::solve_lp(probing_program(inst, b_h, b_p, z));
}

double probing_value(const ProbingInstance& inst, int b_h, int b_p, std::span<const double> z) {
  if (b_h < 0 || (inst.variant == Variant::budgeted && b_p < 0)) return kNegInf;
  const lp::LpSolution s = probing_lp(inst, b_h, b_p, z);
  if (!s.optimal()) throw Error("probing program is " + lp::to_string(s.status));
  return s.value;
}

Action first_stage_action(const ProbingInstance& inst, const lp::LpSolution& x, int b_h, int b_p,
                          std::size_t j) {
  const Layout L = layout_of(inst);
  Action best = Action::reject;
  double score = x.primal[L.reject(j)];
  if (can_probe(inst, b_h, b_p) && x.primal[L.probe(j)] >= score - kScoreTol) {
    best = Action::probe;
    score = x.primal[L.probe(j)];
  }
  if (b_h > 0 && x.primal[L.accept(j)] >= score - kScoreTol) best = Action::accept;
  return best;
}

Action second_stage_action(const ProbingInstance& inst, const lp::LpSolution& x, int b_h,
                           std::size_t j, std::size_t k) {
  const Layout L = layout_of(inst);
  if (b_h <= 0) return Action::reject;
  return x.primal[L.sub_accept(j, k)] >= x.primal[L.sub_reject(j, k)] - kScoreTol
             ? Action::accept
             : Action::reject;
}

Action probing_rabbi_step(const ProbingInstance& inst, const ProbingState& state, int t,
                          std::span<const double> mu, std::size_t j,
                          std::optional<std::size_t> k) {
  if (t < 1) throw PreconditionError("probing_rabbi_step needs t >= 1");
  if (k && state.stage != Stage::probe)
    throw StructuralError("sub-type supplied at a stage that did not follow a probe");
  if (!k && state.stage != Stage::none)
    throw StructuralError("second stage after a probe needs the revealed sub-type");
  const lp::LpSolution x = probing_lp(inst, state.b_h, state.b_p, mu);
  if (k) return second_stage_action(inst, x, state.b_h, j, *k);
  return first_stage_action(inst, x, state.b_h, state.b_p, j);
}

double probing_offline_relaxation(const ProbingInstance& inst, const ProbingState& state,
                                  std::span<const double> z, std::optional<std::size_t> j,
                                  std::optional<std::size_t> k) {
  switch (state.stage) {
    case Stage::none:
      return probing_value(inst, state.b_h, state.b_p, z);
    case Stage::reject:
      return probing_value(inst, state.b_h, state.b_p, z);
    case Stage::accept:
      if (!j) throw StructuralError("accept branch needs the arriving type");
      return inst.mean_reward(*j) + probing_value(inst, state.b_h - 1, state.b_p, z);
    case Stage::probe: {
      if (!j || !k) throw StructuralError("probe branch needs the type and revealed sub-type");
      const int bp = probe_budget_after(inst, state.b_p);
      const double acc = inst.rewards[*j][*k] + probing_value(inst, state.b_h - 1, bp, z);
      return std::max(acc, probing_value(inst, state.b_h, bp, z));
    }
  }
  return 0.0;
}

double first_stage_continuation(const ProbingInstance& inst, int b_h, int b_p,
                                std::span<const double> z, std::size_t j, Action u) {
  switch (u) {
    case Action::reject:
      return probing_value(inst, b_h, b_p, z);
    case Action::accept:
      if (b_h <= 0) return kNegInf;
      return inst.mean_reward(j) + probing_value(inst, b_h - 1, b_p, z);
    case Action::probe: {
      if (!can_probe(inst, b_h, b_p)) return kNegInf;
      const int bp = probe_budget_after(inst, b_p);
      const double hire = probing_value(inst, b_h - 1, bp, z);
      const double pass = probing_value(inst, b_h, bp, z);
      double v = -inst.cost(j);
      for (std::size_t k = 0; k < inst.m(); ++k)
        v += inst.sub_probs[j][k] * std::max(inst.rewards[j][k] + hire, pass);
      return v;
    }
    default:
      throw StructuralError("invalid probing action");
  }
}

bool probing_exclusion_check(const ProbingInstance& inst, int b_h, int b_p,
                             std::span<const double> z, const lp::LpSolution& x, std::size_t j,
                             std::optional<std::size_t> k) {
  const Layout L = layout_of(inst);
  const auto& v = x.primal;
  const double one = 1.0 - kScoreTol;
  if (v[L.accept(j)] >= one || v[L.reject(j)] >= one) return false;
  if (k && v[L.probe(j)] >= one &&
      std::max(v[L.sub_accept(j, *k)], v[L.sub_reject(j, *k)]) >= one)
    return false;
  const lp::StandardLp p = probing_program(inst, b_h, b_p, z);
  if (lp::max_on_optimal_face(p, x.value, L.accept(j)) >= one) return false;
  if (lp::max_on_optimal_face(p, x.value, L.reject(j)) >= one) return false;
  if (k) {
    const std::size_t need[] = {L.probe(j)};
    if (lp::max_on_optimal_face(p, x.value, L.sub_accept(j, *k), need) >= one) return false;
    if (lp::max_on_optimal_face(p, x.value, L.sub_reject(j, *k), need) >= one) return false;
  }
  return true;
}

Trajectory run_probing(const ProbingInstance& inst, Stream& rng, const SimOptions& opts) {
  const int horizon = inst.horizon;
  const std::size_t n = inst.n();
  std::vector<int> types(static_cast<std::size_t>(horizon)), subs(types.size());
  std::vector<double> z(n, 0.0);
  for (int s = 0; s < horizon; ++s) {
    types[s] = static_cast<int>(rng.categorical(inst.arrival_probs));
    subs[s] = static_cast<int>(rng.categorical(inst.sub_probs[types[s]]));
    z[types[s]] += 1.0;
  }

  Trajectory tr;
  tr.offline_benchmark_value = probing_value(inst, inst.hire_budget, inst.probe_budget, z);
  int b_h = inst.hire_budget;
  int b_p = inst.probe_budget;
  std::vector<double> mu(n);
  for (int s = 0; s < horizon; ++s) {
    const int t = horizon - s;
    const std::size_t j = static_cast<std::size_t>(types[s]);
    const std::size_t k = static_cast<std::size_t>(subs[s]);
    for (std::size_t i = 0; i < n; ++i) mu[i] = t * inst.arrival_probs[i];
    const lp::LpSolution x = probing_lp(inst, b_h, b_p, mu);

    StepRecord rec;
    rec.t = t;
    rec.budget = b_h;
    rec.budget2 = b_p;
    rec.input = static_cast<int>(j);
    rec.action = first_stage_action(inst, x, b_h, b_p, j);
    if (rec.action == Action::probe) {
      rec.sub_input = static_cast<int>(k);
      rec.second_action = second_stage_action(inst, x, b_h, j, k);
    }

    if (opts.diagnostics) {
      const lp::LpSolution real = probing_lp(inst, b_h, b_p, z);
      std::vector<double> next(z);
      next[j] -= 1.0;
      const double now = real.value;
      bool ok = now <= first_stage_continuation(inst, b_h, b_p, next, j, rec.action) + value_tol(now);
      if (ok && rec.action == Action::probe) {
        const int bp = probe_budget_after(inst, b_p);
        const double hire = inst.rewards[j][k] + probing_value(inst, b_h - 1, bp, next);
        const double pass = probing_value(inst, b_h, bp, next);
        const double half = std::max(hire, pass);
        const double chosen = rec.second_action == Action::accept ? hire : pass;
        ok = half <= chosen + value_tol(half);
      }
      rec.flags.evaluated = true;
      rec.flags.satisfying = ok;
      rec.flags.excluded = probing_exclusion_check(inst, b_h, b_p, z, real, j, k);
    }

    if (rec.action == Action::accept) {
      rec.reward = inst.rewards[j][k];
      --b_h;
    } else if (rec.action == Action::probe) {
      rec.reward = -inst.cost(j);
      if (inst.variant == Variant::budgeted) --b_p;
      if (rec.second_action == Action::accept) {
        rec.reward += inst.rewards[j][k];
        --b_h;
      }
    }
    z[j] -= 1.0;
    tr.record(rec, opts.record_steps);
  }
  return tr;
}

}  // namespace rabbi::probing
