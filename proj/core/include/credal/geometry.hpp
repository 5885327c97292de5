#pragma once

#include "credal/model.hpp"
#include "credal/random.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace credal::geometry {

// A distribution or an unnormalized potential row.
using Point = std::vector<double>;

inline constexpr double kDuplicateTolerance = 1e-12;
inline constexpr std::size_t kDefaultPruneCap = 256;

// Removes points that are convex combinations of the others (one small LP
// per point); duplicates within kDuplicateTolerance collapse to the first
// copy. Input order is preserved. Above `cap` points the set is only
// deduplicated.
std::vector<Point> prune_redundant(std::span<const Point> points,
                                   std::size_t cap = kDefaultPruneCap);

// True when `p` lies in the convex hull of `hull` (up to LP tolerance).
bool in_convex_hull(std::span<const Point> hull, const Point& p);

// Collapses points equal within kDuplicateTolerance, keeping first copies.
std::vector<Point> deduplicate(std::span<const Point> points);

// Vertices of {p : lower <= p <= upper, sum p = 1}: every vertex has at most
// one coordinate strictly inside its bounds. Throws Infeasible when the
// polytope is empty.
std::vector<Distribution> interval_credal_vertices(const IntervalPotential& intervals);

struct ExtremeMass {
  std::vector<double> assignment;
  double objective = 0.0;
};

// Optimizes sum_k coeffs[k] * q[k] over q within `bounds` with sum q = 1.
// Greedy: start from the lower bounds and hand the residual mass to the
// cheapest (Minimize) or dearest (Maximize) coordinates first, ties by index.
ExtremeMass constrained_extreme_mass(std::span<const double> coeffs,
                                     const IntervalPotential& bounds, Direction direction);

// Uniform draw from the probability simplex of the given dimension
// (normalized exponential spacings).
Distribution sample_simplex(std::size_t dimension, Rng& rng);

// Throws Infeasible unless lower <= upper entrywise and
// sum lower <= 1 <= sum upper, both within `tol`.
void check_feasible(const IntervalPotential& intervals, double tol = kNormalizationTolerance);

}  // namespace credal::geometry
