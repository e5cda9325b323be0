#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace rabbi::lp {

/// Componentwise feasibility tolerance for reported optimal solutions.
inline constexpr double kFeasibilityTol = 1e-9;
/// Tolerance for value identities between related LPs (unit reduction, concavity).
inline constexpr double kIdentityTol = 1e-8;

/// Dense row-major matrix. An empty matrix (zero rows) is compatible with any
/// column count.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  /// Appends a row; the first row appended to an empty matrix fixes the width.
  void append_row(std::span<const double> values);
  void append_row(std::initializer_list<double> values) {
    append_row(std::span<const double>(values.begin(), values.size()));
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// max objective'x  s.t.  eq_matrix x = eq_rhs,  ineq_matrix x <= ineq_rhs,  x >= 0.
struct StandardLp {
  std::vector<double> objective;
  Matrix eq_matrix;
  std::vector<double> eq_rhs;
  Matrix ineq_matrix;
  std::vector<double> ineq_rhs;

  std::size_t num_vars() const noexcept { return objective.size(); }
  std::size_t num_eq() const noexcept { return eq_rhs.size(); }
  std::size_t num_ineq() const noexcept { return ineq_rhs.size(); }
};

enum class LpStatus { optimal, infeasible, unbounded };

std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> primal;
  double value = 0.0;
  std::vector<double> dual_eq;
  std::vector<double> dual_ineq;

  bool optimal() const noexcept { return status == LpStatus::optimal; }
};

/// Throws StructuralError on inconsistent dimensions or non-finite entries.
void validate(const StandardLp& lp);

/// Two-phase dense tableau simplex with Bland's rule. Primal and dual vectors
/// of an optimal basis are recomputed from the original data by an LU solve,
/// so the reported pair satisfies strong duality to round-off.
LpSolution solve_lp(const StandardLp& lp);

/// Concatenated right-hand side: equality rows first, then inequality rows.
std::vector<double> rhs_of(const StandardLp& lp);

/// Copy of `lp` with its right-hand side replaced (same layout as rhs_of).
StandardLp with_rhs(const StandardLp& lp, std::span<const double> rhs);

/// Largest value of x[target] over solutions with objective >= optimal_value
/// (relaxed by kFeasibilityTol relative), optionally forcing x[k] >= 1 for each
/// k in `unit_lower_bounds`. Returns a negative number when that face is empty.
double max_on_optimal_face(const StandardLp& lp, double optimal_value, std::size_t target,
                           std::span<const std::size_t> unit_lower_bounds = {});

struct UnitReduction {
  double coefficient = 0.0;
  StandardLp residual;
};

/// Splits off one unit of variable j: value(lp) = objective[j] + value(residual),
/// where the residual has column j subtracted from its right-hand side. Throws
/// PreconditionError ("unit mass absent") unless some optimal solution has
/// x[j] >= 1.
UnitReduction reduce_by_unit(const StandardLp& lp, std::size_t j);

/// Concavity of the optimal value in the right-hand side:
/// value(l*a + (1-l)*b) >= l*value(a) + (1-l)*value(b) - 1e-9.
/// Throws PreconditionError naming the endpoint that is infeasible or unbounded.
bool check_concavity(const StandardLp& lp, std::span<const double> rhs_a,
                     std::span<const double> rhs_b, double lambda);

struct PropertySuiteReport {
  std::size_t instances = 0;
  std::size_t duality_failures = 0;
  double max_duality_gap = 0.0;
  std::size_t unit_identity_checks = 0;
  std::size_t unit_identity_failures = 0;
  double max_unit_identity_error = 0.0;
  std::size_t concavity_checks = 0;
  std::size_t concavity_failures = 0;

  bool passed() const noexcept {
    return duality_failures == 0 && unit_identity_failures == 0 && concavity_failures == 0;
  }
};

/// Randomized feasible, bounded LPs checked for strong duality, the unit
/// reduction identity and rhs concavity.
PropertySuiteReport run_property_suite(std::size_t count, std::uint64_t seed);

}  // namespace rabbi::lp
