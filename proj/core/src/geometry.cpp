#include "credal/geometry.hpp"

#include "credal/error.hpp"
#include "credal/lp.hpp"
#include "hull.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>

namespace credal::geometry {
namespace {

bool nearly_equal(const Point& a, const Point& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (std::abs(a[j] - b[j]) > kDuplicateTolerance) return false;
  }
  return true;
}

// A point that alone attains the minimum or maximum of some coordinate is a
// vertex of the hull; this spares most LPs on low-dimensional sets.
std::vector<bool> coordinate_extremes(std::span<const Point> pts) {
  std::vector<bool> extreme(pts.size(), false);
  const std::size_t dim = pts.front().size();
  for (std::size_t j = 0; j < dim; ++j) {
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (pts[i][j] < pts[lo][j]) lo = i;
      if (pts[i][j] > pts[hi][j]) hi = i;
    }
    std::size_t lo_ties = 0, hi_ties = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i][j] <= pts[lo][j] + kDuplicateTolerance) ++lo_ties;
      if (pts[i][j] >= pts[hi][j] - kDuplicateTolerance) ++hi_ties;
    }
    if (lo_ties == 1) extreme[lo] = true;
    if (hi_ties == 1) extreme[hi] = true;
  }
  return extreme;
}

bool in_hull_of(std::span<const Point> pts, const std::vector<bool>& alive, std::size_t skip,
                const Point& p) {
  const std::size_t dim = p.size();
  lp::Matrix A(dim + 1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!alive[i] || i == skip) continue;
    for (std::size_t j = 0; j < dim; ++j) A[j].push_back(pts[i][j]);
    A[dim].push_back(1.0);
  }
  if (A[dim].empty()) return false;
  std::vector<double> b(p.begin(), p.end());
  b.push_back(1.0);
  return lp::feasible(A, b);
}

// Points with a common coordinate sum (distributions, or partial sums of
// scaled distributions) determine their last coordinate, so the hull can be
// computed in the chart that drops it.
std::size_t chart_dimension(std::span<const Point> pts) {
  const std::size_t dim = pts.front().size();
  if (dim < 2) return dim;
  const double first = std::accumulate(pts.front().begin(), pts.front().end(), 0.0);
  for (const auto& p : pts) {
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    if (std::abs(sum - first) > kNormalizationTolerance) return dim;
  }
  return dim - 1;
}

// Keep flags from the exact low-dimensional filters, or empty when the chart
// is too large or the 3-d construction is degenerate.
std::optional<std::vector<bool>> chart_hull(std::span<const Point> pts, std::size_t chart) {
  const std::size_t n = pts.size();
  switch (chart) {
    case 1: {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = pts[i][0];
      return detail::hull_1d(x);
    }
    case 2: {
      std::vector<detail::Vec2> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = {pts[i][0], pts[i][1]};
      return detail::hull_2d(x);
    }
    case 3: {
      std::vector<detail::Vec3> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = {pts[i][0], pts[i][1], pts[i][2]};
      return detail::hull_3d(x);
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

std::vector<Point> deduplicate(std::span<const Point> points) {
  std::vector<Point> out;
  out.reserve(points.size());
  // Kept points keyed by their first coordinate; only neighbours within the
  // tolerance need a full comparison.
  std::multimap<double, std::size_t> index;
  for (const auto& p : points) {
    const double key = p.empty() ? 0.0 : p.front();
    bool dup = false;
    for (auto it = index.lower_bound(key - kDuplicateTolerance);
         it != index.end() && it->first <= key + kDuplicateTolerance; ++it) {
      if (nearly_equal(p, out[it->second])) {
        dup = true;
        break;
      }
    }
    if (!dup) {
      index.emplace(key, out.size());
      out.push_back(p);
    }
  }
  return out;
}

bool in_convex_hull(std::span<const Point> hull, const Point& p) {
  if (hull.empty()) return false;
  std::vector<bool> alive(hull.size(), true);
  return in_hull_of(hull, alive, hull.size(), p);
}

std::vector<Point> prune_redundant(std::span<const Point> points, std::size_t cap) {
  if (points.empty()) throw InvalidInput("prune_redundant: empty point set");
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw InvalidInput("prune_redundant: points differ in dimension");
  }
  std::vector<Point> pts = deduplicate(points);
  if (pts.size() <= 2 || pts.size() > cap) return pts;

  if (const auto keep = chart_hull(pts, chart_dimension(pts))) {
    std::vector<Point> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if ((*keep)[i]) out.push_back(std::move(pts[i]));
    }
    return out;
  }

  const std::vector<bool> extreme = coordinate_extremes(pts);
  std::vector<bool> alive(pts.size(), true);
  // Dropping a redundant point leaves the hull unchanged, so a single pass
  // against the survivors ends with exactly the extreme points.
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (extreme[i]) continue;
    if (in_hull_of(pts, alive, i, pts[i])) alive[i] = false;
  }
  std::vector<Point> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (alive[i]) out.push_back(std::move(pts[i]));
  }
  return out;
}

void check_feasible(const IntervalPotential& intervals, double tol) {
  if (intervals.empty()) throw Infeasible("empty interval potential");
  double lo = 0.0, hi = 0.0;
  for (std::size_t j = 0; j < intervals.size(); ++j) {
    const auto& iv = intervals[j];
    if (!(iv.lower <= iv.upper + tol)) {
      throw Infeasible("interval " + std::to_string(j) + " has lower > upper");
    }
    lo += iv.lower;
    hi += iv.upper;
  }
  if (lo > 1.0 + tol || hi < 1.0 - tol) {
    throw Infeasible("interval bounds admit no distribution (sum of lowers " +
                     std::to_string(lo) + ", sum of uppers " + std::to_string(hi) + ")");
  }
}

std::vector<Distribution> interval_credal_vertices(const IntervalPotential& intervals) {
  check_feasible(intervals);
  const std::size_t n = intervals.size();
  if (n > 20) throw CapExceeded("interval_credal_vertices: more than 20 categories");
  if (n == 1) return {Distribution{1.0}};

  std::vector<Distribution> found;
  const std::size_t patterns = std::size_t{1} << (n - 1);
  Distribution p(n);
  for (std::size_t free = 0; free < n; ++free) {
    for (std::size_t mask = 0; mask < patterns; ++mask) {
      double sum = 0.0;
      std::size_t bit = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == free) continue;
        p[j] = ((mask >> bit) & 1U) ? intervals[j].upper : intervals[j].lower;
        sum += p[j];
        ++bit;
      }
      const double rest = 1.0 - sum;
      const auto& iv = intervals[free];
      if (rest < iv.lower - kNormalizationTolerance || rest > iv.upper + kNormalizationTolerance) {
        continue;
      }
      p[free] = std::clamp(rest, iv.lower, iv.upper);
      found.push_back(p);
    }
  }
  return deduplicate(found);
}

ExtremeMass constrained_extreme_mass(std::span<const double> coeffs,
                                     const IntervalPotential& bounds, Direction direction) {
  if (coeffs.size() != bounds.size()) {
    throw InvalidInput("constrained_extreme_mass: " + std::to_string(coeffs.size()) +
                       " coefficients for " + std::to_string(bounds.size()) + " bounds");
  }
  check_feasible(bounds);
  const std::size_t n = bounds.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (direction == Direction::Minimize) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return coeffs[a] < coeffs[b]; });
  } else {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return coeffs[a] > coeffs[b]; });
  }
  ExtremeMass out;
  out.assignment.resize(n);
  double residual = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    out.assignment[k] = bounds[k].lower;
    residual -= bounds[k].lower;
  }
  residual = std::max(residual, 0.0);
  for (std::size_t k : order) {
    if (residual <= 0.0) break;
    const double room = std::max(0.0, bounds[k].upper - bounds[k].lower);
    const double add = std::min(room, residual);
    out.assignment[k] += add;
    residual -= add;
  }
  for (std::size_t k = 0; k < n; ++k) out.objective += coeffs[k] * out.assignment[k];
  return out;
}

Distribution sample_simplex(std::size_t dimension, Rng& rng) {
  if (dimension == 0) throw InvalidInput("sample_simplex: dimension must be positive");
  if (dimension == 1) return {1.0};
  Distribution p(dimension);
  double total = 0.0;
  for (auto& x : p) {
    x = rng.exponential();
    total += x;
  }
  for (auto& x : p) x /= total;
  return p;
}

}  // namespace credal::geometry
