#pragma once

#include <array>
#include <optional>
#include <vector>

// Exact extreme-point filters for point sets of dimension one to three.
// Each returns a keep flag per input point; points on the boundary but not
// at a corner are dropped. Inputs must be free of duplicates.
namespace credal::geometry::detail {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

std::vector<bool> hull_1d(const std::vector<double>& x);
std::vector<bool> hull_2d(const std::vector<Vec2>& pts);
// Quickhull. Empty when the construction meets a numerically degenerate
// face, so callers can fall back to a slower exact test.
std::optional<std::vector<bool>> hull_3d(const std::vector<Vec3>& pts);

}  // namespace credal::geometry::detail
