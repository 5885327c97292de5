#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace credal::lp {

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Result {
  Status status = Status::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  // Sum of artificial variables at the end of phase one: the L1 distance
  // by which the equality system misses feasibility.
  double infeasibility = 0.0;
};

// Dense row-major constraint matrix.
using Matrix = std::vector<std::vector<double>>;

// Two-phase tableau simplex with Bland's rule for
//   minimize c.x  subject to  A x = b,  x >= 0.
// Sized for the small redundancy problems of vertex pruning (a handful of
// rows, a few hundred columns). A system is declared feasible when the
// phase-one residual is at most feasibility_tol.
Result minimize(const Matrix& A, std::span<const double> b, std::span<const double> c,
                double feasibility_tol = 1e-11);

// Phase one only.
bool feasible(const Matrix& A, std::span<const double> b, double feasibility_tol = 1e-11);

}  // namespace credal::lp
