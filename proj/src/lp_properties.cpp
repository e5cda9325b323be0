#include <algorithm>
#include <cmath>
#include <limits>

#include "rabbi/error.hpp"
#include "rabbi/lp.hpp"
#include "rabbi/rng.hpp"

namespace rabbi::lp {

namespace {

struct RandomFamily {
  StandardLp lp;
  std::size_t nv = 0;
};

// rhs that makes `x` feasible for the family's rows, with random slack on the
// inequality rows.
std::vector<double> feasible_rhs(const StandardLp& lp, std::span<const double> x, Stream& rng) {
  std::vector<double> rhs;
  for (std::size_t r = 0; r < lp.eq_matrix.rows(); ++r) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += lp.eq_matrix(r, j) * x[j];
    rhs.push_back(s);
  }
  for (std::size_t r = 0; r < lp.ineq_matrix.rows(); ++r) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += lp.ineq_matrix(r, j) * x[j];
    rhs.push_back(s + (rng.bernoulli(0.3) ? 0.0 : rng.uniform(0.0, 2.0)));
  }
  return rhs;
}

std::vector<double> random_point(std::size_t nv, Stream& rng) {
  std::vector<double> x(nv);
  for (auto& v : x) v = rng.bernoulli(0.25) ? 0.0 : rng.uniform(0.0, 5.0);
  return x;
}

// Feasible by construction (rhs built from a nonnegative point) and bounded
// by a final all-ones row.
RandomFamily random_family(Stream& rng) {
  RandomFamily f;
  f.nv = 2 + static_cast<std::size_t>(rng.uniform() * 5.0);
  const std::size_t me = static_cast<std::size_t>(rng.uniform() * 3.0);
  const std::size_t mi = 1 + static_cast<std::size_t>(rng.uniform() * 4.0);
  f.lp.objective.resize(f.nv);
  for (auto& c : f.lp.objective) c = std::round(rng.uniform(-1.0, 3.0) * 4.0) / 4.0;
  std::vector<double> row(f.nv);
  for (std::size_t r = 0; r < me; ++r) {
    for (auto& a : row) a = rng.bernoulli(0.3) ? 0.0 : rng.uniform(-1.0, 2.0);
    f.lp.eq_matrix.append_row(row);
    f.lp.eq_rhs.push_back(0.0);
  }
  for (std::size_t r = 0; r < mi; ++r) {
    for (auto& a : row) a = rng.bernoulli(0.3) ? 0.0 : rng.uniform(-1.0, 2.0);
    f.lp.ineq_matrix.append_row(row);
    f.lp.ineq_rhs.push_back(0.0);
  }
  std::fill(row.begin(), row.end(), 1.0);
  f.lp.ineq_matrix.append_row(row);
  f.lp.ineq_rhs.push_back(0.0);
  return f;
}

double duality_gap(const StandardLp& lp, const LpSolution& s) {
  double dual = 0.0;
  for (std::size_t r = 0; r < lp.num_eq(); ++r) dual += s.dual_eq[r] * lp.eq_rhs[r];
  for (std::size_t r = 0; r < lp.num_ineq(); ++r) dual += s.dual_ineq[r] * lp.ineq_rhs[r];
  return std::abs(dual - s.value);
}

bool primal_feasible(const StandardLp& lp, const LpSolution& s) {
  for (double x : s.primal)
    if (x < -kFeasibilityTol) return false;
  for (std::size_t r = 0; r < lp.num_eq(); ++r) {
    double a = 0.0;
    for (std::size_t j = 0; j < lp.num_vars(); ++j) a += lp.eq_matrix(r, j) * s.primal[j];
    if (std::abs(a - lp.eq_rhs[r]) > kFeasibilityTol) return false;
  }
  for (std::size_t r = 0; r < lp.num_ineq(); ++r) {
    double a = 0.0;
    for (std::size_t j = 0; j < lp.num_vars(); ++j) a += lp.ineq_matrix(r, j) * s.primal[j];
    if (a - lp.ineq_rhs[r] > kFeasibilityTol) return false;
  }
  for (double y : s.dual_ineq)
    if (y < -kFeasibilityTol) return false;
  return true;
}

}  // namespace

PropertySuiteReport run_property_suite(std::size_t count, std::uint64_t seed) {
  PropertySuiteReport rep;
  Stream rng = derive_stream(seed, 0, 0, "lp-properties");
  for (std::size_t i = 0; i < count; ++i) {
    RandomFamily fam = random_family(rng);
    const auto x0 = random_point(fam.nv, rng);
    const auto rhs_a = feasible_rhs(fam.lp, x0, rng);
    const StandardLp lp = with_rhs(fam.lp, rhs_a);
    ++rep.instances;

    const LpSolution s = solve_lp(lp);
    if (!s.optimal()) {
      ++rep.duality_failures;
      continue;
    }
    const double gap = duality_gap(lp, s);
    rep.max_duality_gap = std::max(rep.max_duality_gap, gap);
    if (gap > kFeasibilityTol || !primal_feasible(lp, s)) ++rep.duality_failures;

    for (std::size_t j = 0; j < fam.nv; ++j) {
      if (s.primal[j] < 1.0) continue;
      ++rep.unit_identity_checks;
      try {
        const UnitReduction u = reduce_by_unit(lp, j);
        const LpSolution rs = solve_lp(u.residual);
        const double err = rs.optimal() ? std::abs(s.value - u.coefficient - rs.value)
                                        : std::numeric_limits<double>::infinity();
        rep.max_unit_identity_error = std::max(rep.max_unit_identity_error, err);
        if (!(err <= kIdentityTol)) ++rep.unit_identity_failures;
      } catch (const PreconditionError&) {
        ++rep.unit_identity_failures;
      }
    }

    const auto x1 = random_point(fam.nv, rng);
    const auto rhs_b = feasible_rhs(fam.lp, x1, rng);
    const double lambda = rng.uniform();
    ++rep.concavity_checks;
    try {
      if (!check_concavity(fam.lp, rhs_a, rhs_b, lambda)) ++rep.concavity_failures;
    } catch (const PreconditionError&) {
      ++rep.concavity_failures;
    }
  }
  return rep;
}

}  // namespace rabbi::lp
