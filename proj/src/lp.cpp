#include "rabbi/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rabbi/error.hpp"

namespace rabbi::lp {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  for (const auto& r : rows) append_row(r);
}

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && data_.empty()) {
    cols_ = values.size();
  } else if (values.size() != cols_) {
    throw StructuralError("matrix row has " + std::to_string(values.size()) +
                          " entries, expected " + std::to_string(cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal:
      return "optimal";
    case LpStatus::infeasible:
      return "infeasible";
    case LpStatus::unbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;
constexpr std::size_t kIterationLimit = 200000;

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void check_block(const Matrix& m, std::size_t rhs_len, std::size_t nv, const char* name) {
  if (m.rows() != rhs_len) {
    std::ostringstream os;
    os << name << " has " << m.rows() << " rows but rhs length " << rhs_len;
    throw StructuralError(os.str());
  }
  if (m.rows() > 0 && m.cols() != nv) {
    std::ostringstream os;
    os << name << " has " << m.cols() << " columns but " << nv << " variables";
    throw StructuralError(os.str());
  }
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (!all_finite(m.row(r))) throw StructuralError(std::string(name) + " has a non-finite entry");
  }
}

// Solves A x = b in place for a small dense square system (row-major, n x n).
// Returns false when a pivot is numerically zero.
bool lu_solve(std::vector<double> a, std::size_t n, std::vector<double>& b) {
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(a[i * n + k]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best < 1e-13) return false;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      std::swap(b[k], b[piv]);
    }
    const double d = a[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i * n + k] / d;
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
      b[i] -= f * b[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k * n + j] * b[j];
    b[k] = s / a[k * n + k];
  }
  return true;
}

// Tableau over columns [structural | slack | artificial | rhs]. Every row is
// oriented so that its rhs is nonnegative; `sign` records the orientation.
class Simplex {
 public:
  explicit Simplex(const StandardLp& lp)
      : lp_(lp), me_(lp.num_eq()), mi_(lp.num_ineq()), nv_(lp.num_vars()) {
    m_ = me_ + mi_;
    ncol_ = nv_ + mi_;
    sign_.assign(m_, 1.0);
    art_col_.assign(m_, npos);
    for (std::size_t r = 0; r < m_; ++r) {
      const double rhs = r < me_ ? lp.eq_rhs[r] : lp.ineq_rhs[r - me_];
      if (rhs < 0.0) sign_[r] = -1.0;
      if (r < me_ || rhs < 0.0) art_col_[r] = ncol_ + nart_++;
    }
    width_ = ncol_ + nart_ + 1;
    tab_.assign(m_ * width_, 0.0);
    z_.assign(width_, 0.0);
    basis_.assign(m_, 0);
    for (std::size_t r = 0; r < m_; ++r) {
      const auto src = r < me_ ? lp.eq_matrix.row(r) : lp.ineq_matrix.row(r - me_);
      for (std::size_t j = 0; j < nv_; ++j) at(r, j) = sign_[r] * src[j];
      if (r >= me_) at(r, nv_ + (r - me_)) = sign_[r];
      const double rhs = r < me_ ? lp.eq_rhs[r] : lp.ineq_rhs[r - me_];
      at(r, width_ - 1) = sign_[r] * rhs;
      if (art_col_[r] != npos) {
        at(r, art_col_[r]) = 1.0;
        basis_[r] = art_col_[r];
      } else {
        basis_[r] = nv_ + (r - me_);
      }
    }
  }

  LpSolution run() {
    LpSolution out;
    out.primal.assign(nv_, 0.0);
    out.dual_eq.assign(me_, 0.0);
    out.dual_ineq.assign(mi_, 0.0);

    if (nart_ > 0) {
      std::fill(z_.begin(), z_.end(), 0.0);
      for (std::size_t r = 0; r < m_; ++r) {
        if (basis_[r] < ncol_) continue;
        for (std::size_t j = 0; j < width_; ++j) z_[j] += at(r, j);
      }
      for (std::size_t r = 0; r < m_; ++r) {
        if (art_col_[r] != npos) z_[art_col_[r]] = 0.0;
      }
      iterate();
      double infeasibility = 0.0;
      double scale = 1.0;
      for (std::size_t r = 0; r < m_; ++r) {
        scale = std::max(scale, std::abs(at(r, width_ - 1)));
        if (basis_[r] >= ncol_) infeasibility += at(r, width_ - 1);
      }
      if (infeasibility > kFeasibilityTol * scale) {
        out.status = LpStatus::infeasible;
        out.value = -std::numeric_limits<double>::infinity();
        return out;
      }
      drive_out_artificials();
    }

    // Phase 2 reduced costs for the true objective.
    for (std::size_t j = 0; j + 1 < width_; ++j) {
      double zj = cost(j);
      for (std::size_t r = 0; r < m_; ++r) zj -= cost(basis_[r]) * at(r, j);
      z_[j] = zj;
    }
    z_[width_ - 1] = 0.0;
    if (!iterate()) {
      out.status = LpStatus::unbounded;
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }

    out.status = LpStatus::optimal;
    extract(out);
    return out;
  }

 private:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  double& at(std::size_t r, std::size_t c) { return tab_[r * width_ + c]; }
  double at(std::size_t r, std::size_t c) const { return tab_[r * width_ + c]; }

  double cost(std::size_t col) const { return col < nv_ ? lp_.objective[col] : 0.0; }

  void pivot(std::size_t pr, std::size_t pc) {
    double* prow = &tab_[pr * width_];
    const double p = prow[pc];
    for (std::size_t j = 0; j < width_; ++j) prow[j] /= p;
    prow[pc] = 1.0;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == pr) continue;
      double* row = &tab_[r * width_];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) row[j] -= f * prow[j];
      row[pc] = 0.0;
    }
    const double f = z_[pc];
    if (f != 0.0) {
      for (std::size_t j = 0; j < width_; ++j) z_[j] -= f * prow[j];
      z_[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  // Bland's rule: lowest-index improving column enters; ratio ties leave by
  // lowest basic index. Returns false on an unbounded ray.
  bool iterate() {
    for (std::size_t iter = 0; iter < kIterationLimit; ++iter) {
      std::size_t enter = npos;
      for (std::size_t j = 0; j < ncol_; ++j) {
        if (z_[j] > kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter == npos) return true;
      std::size_t leave = npos;
      double best = 0.0;
      for (std::size_t r = 0; r < m_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(0.0, at(r, width_ - 1)) / a;
        const double eps = 1e-12 * (1.0 + best);
        if (leave == npos || ratio < best - eps) {
          leave = r;
          best = ratio;
        } else if (ratio <= best + eps && basis_[r] < basis_[leave]) {
          leave = r;
          best = std::min(best, ratio);
        }
      }
      if (leave == npos) return false;
      pivot(leave, enter);
    }
    throw Error("simplex exceeded its iteration limit");
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < ncol_) continue;
      std::size_t col = npos;
      double best = 1e-9;
      for (std::size_t j = 0; j < ncol_; ++j) {
        const double a = std::abs(at(r, j));
        if (a > best) {
          best = a;
          col = j;
        }
      }
      if (col == npos) continue;  // redundant row; its artificial stays basic at zero
      at(r, width_ - 1) = 0.0;
      pivot(r, col);
    }
  }

  double original_entry(std::size_t row, std::size_t col) const {
    if (col < nv_) return row < me_ ? lp_.eq_matrix(row, col) : lp_.ineq_matrix(row - me_, col);
    if (col < ncol_) return row == me_ + (col - nv_) ? 1.0 : 0.0;
    return art_col_[row] == col ? sign_[row] : 0.0;
  }

  void extract(LpSolution& out) const {
    std::vector<double> bmat(m_ * m_);
    for (std::size_t c = 0; c < m_; ++c)
      for (std::size_t r = 0; r < m_; ++r) bmat[r * m_ + c] = original_entry(r, basis_[c]);

    std::vector<double> xb(m_);
    for (std::size_t r = 0; r < m_; ++r) xb[r] = r < me_ ? lp_.eq_rhs[r] : lp_.ineq_rhs[r - me_];
    std::vector<double> y(m_);
    for (std::size_t r = 0; r < m_; ++r) y[r] = cost(basis_[r]);

    std::vector<double> bt(m_ * m_);
    for (std::size_t r = 0; r < m_; ++r)
      for (std::size_t c = 0; c < m_; ++c) bt[c * m_ + r] = bmat[r * m_ + c];

    const bool refined = lu_solve(bmat, m_, xb) && lu_solve(bt, m_, y);
    if (!refined) {
      for (std::size_t r = 0; r < m_; ++r) xb[r] = at(r, width_ - 1);
      // Initial basic column of each row carries B^{-1}; y_r = -z of that column.
      for (std::size_t r = 0; r < m_; ++r) {
        const std::size_t init = art_col_[r] != npos ? art_col_[r] : nv_ + (r - me_);
        y[r] = -z_[init] * sign_[r];
      }
    }
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < nv_) out.primal[basis_[r]] = std::max(0.0, xb[r]);
    }
    double value = 0.0;
    for (std::size_t j = 0; j < nv_; ++j) value += lp_.objective[j] * out.primal[j];
    out.value = value;
    for (std::size_t r = 0; r < me_; ++r) out.dual_eq[r] = y[r];
    for (std::size_t r = 0; r < mi_; ++r) out.dual_ineq[r] = y[me_ + r];
  }

  const StandardLp& lp_;
  std::size_t me_, mi_, nv_;
  std::size_t m_ = 0, ncol_ = 0, nart_ = 0, width_ = 0;
  std::vector<double> sign_;
  std::vector<std::size_t> art_col_;
  std::vector<double> tab_;
  std::vector<double> z_;
  std::vector<std::size_t> basis_;
};

}  // namespace

void validate(const StandardLp& lp) {
  const std::size_t nv = lp.num_vars();
  if (!all_finite(lp.objective)) throw StructuralError("objective has a non-finite entry");
  check_block(lp.eq_matrix, lp.eq_rhs.size(), nv, "eq_matrix");
  check_block(lp.ineq_matrix, lp.ineq_rhs.size(), nv, "ineq_matrix");
  if (!all_finite(lp.eq_rhs) || !all_finite(lp.ineq_rhs))
    throw StructuralError("rhs has a non-finite entry");
}

LpSolution solve_lp(const StandardLp& lp) {
  validate(lp);
  return Simplex(lp).run();
}

std::vector<double> rhs_of(const StandardLp& lp) {
  std::vector<double> rhs(lp.eq_rhs);
  rhs.insert(rhs.end(), lp.ineq_rhs.begin(), lp.ineq_rhs.end());
  return rhs;
}

StandardLp with_rhs(const StandardLp& lp, std::span<const double> rhs) {
  if (rhs.size() != lp.num_eq() + lp.num_ineq())
    throw StructuralError("rhs length does not match the number of constraint rows");
  StandardLp out = lp;
  std::copy(rhs.begin(), rhs.begin() + static_cast<std::ptrdiff_t>(lp.num_eq()), out.eq_rhs.begin());
  std::copy(rhs.begin() + static_cast<std::ptrdiff_t>(lp.num_eq()), rhs.end(), out.ineq_rhs.begin());
  return out;
}

double max_on_optimal_face(const StandardLp& lp, double optimal_value, std::size_t target,
                           std::span<const std::size_t> unit_lower_bounds) {
  const std::size_t nv = lp.num_vars();
  if (target >= nv) throw StructuralError("selection target index out of range");
  StandardLp sel;
  sel.objective.assign(nv, 0.0);
  sel.objective[target] = 1.0;
  sel.eq_matrix = lp.eq_matrix;
  sel.eq_rhs = lp.eq_rhs;
  sel.ineq_matrix = lp.ineq_matrix.empty() ? Matrix() : lp.ineq_matrix;
  sel.ineq_rhs = lp.ineq_rhs;
  std::vector<double> row(nv);
  for (std::size_t j = 0; j < nv; ++j) row[j] = -lp.objective[j];
  sel.ineq_matrix.append_row(row);
  sel.ineq_rhs.push_back(-(optimal_value - kFeasibilityTol * std::max(1.0, std::abs(optimal_value))));
  for (std::size_t k : unit_lower_bounds) {
    if (k >= nv) throw StructuralError("lower-bound index out of range");
    std::fill(row.begin(), row.end(), 0.0);
    row[k] = -1.0;
    sel.ineq_matrix.append_row(row);
    sel.ineq_rhs.push_back(-1.0);
  }
  const LpSolution s = solve_lp(sel);
  if (s.status == LpStatus::infeasible) return -1.0;
  if (s.status == LpStatus::unbounded) return std::numeric_limits<double>::infinity();
  return s.value;
}

UnitReduction reduce_by_unit(const StandardLp& lp, std::size_t j) {
  if (j >= lp.num_vars()) throw StructuralError("unit reduction index out of range");
  const LpSolution base = solve_lp(lp);
  if (!base.optimal())
    throw PreconditionError("unit mass absent: LP is " + to_string(base.status));
  if (base.primal[j] < 1.0 - kFeasibilityTol &&
      max_on_optimal_face(lp, base.value, j) < 1.0 - kFeasibilityTol) {
    throw PreconditionError("unit mass absent: no optimal solution has x[" + std::to_string(j) +
                            "] >= 1");
  }
  UnitReduction out;
  out.coefficient = lp.objective[j];
  out.residual = lp;
  for (std::size_t r = 0; r < lp.num_eq(); ++r) out.residual.eq_rhs[r] -= lp.eq_matrix(r, j);
  for (std::size_t r = 0; r < lp.num_ineq(); ++r)
    out.residual.ineq_rhs[r] -= lp.ineq_matrix(r, j);
  return out;
}

bool check_concavity(const StandardLp& lp, std::span<const double> rhs_a,
                     std::span<const double> rhs_b, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw StructuralError("lambda must lie in [0,1]");
  if (rhs_a.size() != rhs_b.size()) throw StructuralError("rhs endpoints differ in length");
  const LpSolution a = solve_lp(with_rhs(lp, rhs_a));
  if (!a.optimal()) throw PreconditionError("rhs_a instantiation is " + to_string(a.status));
  const LpSolution b = solve_lp(with_rhs(lp, rhs_b));
  if (!b.optimal()) throw PreconditionError("rhs_b instantiation is " + to_string(b.status));
  std::vector<double> mid(rhs_a.size());
  for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = lambda * rhs_a[i] + (1.0 - lambda) * rhs_b[i];
  const LpSolution m = solve_lp(with_rhs(lp, mid));
  if (!m.optimal()) return false;
  return m.value >= lambda * a.value + (1.0 - lambda) * b.value - 1e-9;
}

}  // namespace rabbi::lp
