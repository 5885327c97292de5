#include "credal/lp.hpp"

#include "credal/error.hpp"

#include <cmath>
#include <limits>

namespace credal::lp {
namespace {

constexpr double kPivotEps = 1e-12;

class Tableau {
 public:
  Tableau(const Matrix& A, std::span<const double> b)
      : rows_(A.size()), cols_(rows_ == 0 ? 0 : A.front().size()), basis_(rows_) {
    // Columns: structural [0, cols_), artificial [cols_, cols_ + rows_), rhs.
    width_ = cols_ + rows_ + 1;
    t_.assign((rows_ + 1) * width_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (A[i].size() != cols_) throw InvalidInput("lp: ragged constraint matrix");
      const double sign = b[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < cols_; ++j) at(i, j) = sign * A[i][j];
      at(i, cols_ + i) = 1.0;
      rhs(i) = sign * b[i];
      basis_[i] = cols_ + i;
    }
  }

  double& at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * width_ + j]; }
  double& rhs(std::size_t i) { return at(i, width_ - 1); }
  double& cost(std::size_t j) { return at(rows_, j); }
  double objective() const { return -at(rows_, width_ - 1); }

  // Phase one cost: sum of artificials, priced out against the initial basis.
  void load_phase_one() {
    for (std::size_t j = 0; j < width_; ++j) at(rows_, j) = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) cost(j) -= at(i, j);
      at(rows_, width_ - 1) -= rhs(i);
    }
  }

  void load_phase_two(std::span<const double> c) {
    for (std::size_t j = 0; j < width_; ++j) at(rows_, j) = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) cost(j) = c[j];
    for (std::size_t i = 0; i < rows_; ++i) {
      const std::size_t bj = basis_[i];
      const double cb = bj < cols_ ? c[bj] : 0.0;
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) at(rows_, j) -= cb * at(i, j);
    }
  }

  // Returns false when unbounded.
  bool run(std::size_t allowed_cols) {
    for (;;) {
      std::size_t enter = allowed_cols;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (cost(j) < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter == allowed_cols) return true;
      std::size_t leave = rows_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows_; ++i) {
        const double a = at(i, enter);
        if (a <= kPivotEps) continue;
        const double ratio = rhs(i) / a;
        if (ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 && leave < rows_ && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == rows_) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t j = 0; j < width_; ++j) at(r, j) /= p;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) at(i, j) -= f * at(r, j);
    }
    basis_[r] = c;
  }

  // After phase one, pivot zero-level artificials out of the basis where a
  // structural column allows it.
  void expel_artificials() {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (basis_[i] < cols_) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (std::abs(at(i, j)) > 1e-9) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  std::vector<double> solution() const {
    std::vector<double> x(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (basis_[i] < cols_) x[basis_[i]] = at(i, width_ - 1);
    }
    return x;
  }

  std::size_t structural() const { return cols_; }
  std::size_t artificial_end() const { return cols_ + rows_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t width_ = 0;
  std::vector<std::size_t> basis_;
  std::vector<double> t_;
};

}  // namespace

Result minimize(const Matrix& A, std::span<const double> b, std::span<const double> c,
                double feasibility_tol) {
  if (A.size() != b.size()) throw InvalidInput("lp: row count does not match rhs");
  Tableau tab(A, b);
  if (c.size() != tab.structural()) throw InvalidInput("lp: cost vector has wrong length");
  Result result;
  tab.load_phase_one();
  tab.run(tab.artificial_end());
  result.infeasibility = std::max(0.0, tab.objective());
  if (result.infeasibility > feasibility_tol) {
    result.status = Status::kInfeasible;
    return result;
  }
  tab.expel_artificials();
  tab.load_phase_two(c);
  if (!tab.run(tab.structural())) {
    result.status = Status::kUnbounded;
    return result;
  }
  result.status = Status::kOptimal;
  result.x = tab.solution();
  result.objective = tab.objective();
  return result;
}

bool feasible(const Matrix& A, std::span<const double> b, double feasibility_tol) {
  if (A.size() != b.size()) throw InvalidInput("lp: row count does not match rhs");
  Tableau tab(A, b);
  tab.load_phase_one();
  tab.run(tab.artificial_end());
  return tab.objective() <= feasibility_tol;
}

}  // namespace credal::lp
