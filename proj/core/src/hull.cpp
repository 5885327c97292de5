#include "hull.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <unordered_map>

namespace credal::geometry::detail {
namespace {

constexpr double kTurn = 1e-14;
constexpr double kPlane = 1e-12;

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

struct Face {
  std::array<std::size_t, 3> v;
  Vec3 normal;
  double offset = 0.0;
  std::vector<std::size_t> outside;
  bool alive = true;
};

std::uint64_t edge_key(std::size_t a, std::size_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

}  // namespace

std::vector<bool> hull_1d(const std::vector<double>& x) {
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] < x[lo]) lo = i;
    if (x[i] > x[hi]) hi = i;
  }
  std::vector<bool> keep(x.size(), false);
  keep[lo] = keep[hi] = true;
  return keep;
}

// Monotone chain.
std::vector<bool> hull_2d(const std::vector<Vec2>& pts) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
  auto turn = [&](std::size_t o, std::size_t a, std::size_t b) {
    return (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) -
           (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0]);
  };
  std::vector<std::size_t> chain(2 * order.size());
  std::size_t k = 0;
  for (std::size_t i : order) {
    while (k >= 2 && turn(chain[k - 2], chain[k - 1], i) <= kTurn) --k;
    chain[k++] = i;
  }
  const std::size_t lower = k + 1;
  for (std::size_t j = order.size() - 1; j-- > 0;) {
    const std::size_t i = order[j];
    while (k >= lower && turn(chain[k - 2], chain[k - 1], i) <= kTurn) --k;
    chain[k++] = i;
  }
  std::vector<bool> keep(pts.size(), false);
  for (std::size_t j = 0; j + 1 < k; ++j) keep[chain[j]] = true;
  if (k <= 2) keep[chain[0]] = true;
  return keep;
}

std::optional<std::vector<bool>> hull_3d(const std::vector<Vec3>& pts) {
  const std::size_t n = pts.size();
  std::vector<bool> keep(n, false);
  if (n <= 3) {
    keep.assign(n, true);
    return keep;
  }

  // Initial simplex: extremes along the widest axis, then the farthest point
  // from their line, then the farthest from their plane.
  std::size_t axis = 0;
  double widest = -1.0;
  std::size_t i0 = 0, i1 = 0;
  for (std::size_t d = 0; d < 3; ++d) {
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (pts[i][d] < pts[lo][d]) lo = i;
      if (pts[i][d] > pts[hi][d]) hi = i;
    }
    if (pts[hi][d] - pts[lo][d] > widest) {
      widest = pts[hi][d] - pts[lo][d];
      axis = d;
      i0 = lo;
      i1 = hi;
    }
  }
  (void)axis;
  if (widest <= kPlane) {
    keep[i0] = true;
    return keep;
  }
  const Vec3 dir = sub(pts[i1], pts[i0]);
  std::size_t i2 = i0;
  double far_line = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = norm(cross(dir, sub(pts[i], pts[i0]))) / norm(dir);
    if (d > far_line) {
      far_line = d;
      i2 = i;
    }
  }
  if (far_line <= kPlane) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = dot(sub(pts[i], pts[i0]), dir);
    return hull_1d(t);
  }
  Vec3 base_normal = cross(dir, sub(pts[i2], pts[i0]));
  base_normal = {base_normal[0] / norm(base_normal), base_normal[1] / norm(base_normal),
                 base_normal[2] / norm(base_normal)};
  std::size_t i3 = i0;
  double far_plane = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs(dot(base_normal, sub(pts[i], pts[i0])));
    if (d > far_plane) {
      far_plane = d;
      i3 = i;
    }
  }
  if (far_plane <= kPlane) {
    // Coplanar: hull in an orthonormal basis of the plane.
    const Vec3 u{dir[0] / norm(dir), dir[1] / norm(dir), dir[2] / norm(dir)};
    const Vec3 w = cross(base_normal, u);
    std::vector<Vec2> flat(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3 r = sub(pts[i], pts[i0]);
      flat[i] = {dot(r, u), dot(r, w)};
    }
    return hull_2d(flat);
  }

  std::vector<Face> faces;
  std::unordered_map<std::uint64_t, std::size_t> edges;  // directed edge -> face
  Vec3 inner{};
  for (std::size_t i : {i0, i1, i2, i3}) {
    for (std::size_t d = 0; d < 3; ++d) inner[d] += pts[i][d] / 4.0;
  }
  auto add_face = [&](std::size_t a, std::size_t b, std::size_t c) -> bool {
    Face f;
    f.v = {a, b, c};
    Vec3 nrm = cross(sub(pts[b], pts[a]), sub(pts[c], pts[a]));
    const double len = norm(nrm);
    if (!(len > kTurn)) return false;
    f.normal = {nrm[0] / len, nrm[1] / len, nrm[2] / len};
    f.offset = dot(f.normal, pts[a]);
    edges[edge_key(a, b)] = faces.size();
    edges[edge_key(b, c)] = faces.size();
    edges[edge_key(c, a)] = faces.size();
    faces.push_back(std::move(f));
    return true;
  };
  auto distance = [&](const Face& f, std::size_t i) { return dot(f.normal, pts[i]) - f.offset; };

  const std::array<std::size_t, 4> tet{i0, i1, i2, i3};
  for (std::size_t k = 0; k < 4; ++k) {
    std::array<std::size_t, 3> tri;
    std::size_t m = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      if (j != k) tri[m++] = tet[j];
    }
    const Vec3 nrm = cross(sub(pts[tri[1]], pts[tri[0]]), sub(pts[tri[2]], pts[tri[0]]));
    if (dot(nrm, sub(inner, pts[tri[0]])) > 0.0) std::swap(tri[1], tri[2]);
    if (!add_face(tri[0], tri[1], tri[2])) return std::nullopt;
  }

  auto assign = [&](std::size_t i, std::size_t first_face) {
    for (std::size_t f = first_face; f < faces.size(); ++f) {
      if (faces[f].alive && distance(faces[f], i) > kPlane) {
        faces[f].outside.push_back(i);
        return;
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (i != i0 && i != i1 && i != i2 && i != i3) assign(i, 0);
  }

  std::vector<std::size_t> visible, stack, work;
  std::vector<std::uint8_t> mark;
  for (std::size_t f = 0; f < faces.size(); ++f) work.push_back(f);
  while (!work.empty()) {
    const std::size_t f = work.back();
    work.pop_back();
    if (!faces[f].alive || faces[f].outside.empty()) continue;
    std::size_t eye = faces[f].outside.front();
    double best = distance(faces[f], eye);
    for (std::size_t i : faces[f].outside) {
      const double d = distance(faces[f], i);
      if (d > best) {
        best = d;
        eye = i;
      }
    }

    // Visible region by flood fill across shared edges.
    mark.assign(faces.size(), 0);
    visible.clear();
    stack.assign(1, f);
    mark[f] = 1;
    std::vector<std::pair<std::size_t, std::size_t>> horizon;
    while (!stack.empty()) {
      const std::size_t g = stack.back();
      stack.pop_back();
      visible.push_back(g);
      for (std::size_t e = 0; e < 3; ++e) {
        const std::size_t a = faces[g].v[e], b = faces[g].v[(e + 1) % 3];
        const auto it = edges.find(edge_key(b, a));
        if (it == edges.end()) return std::nullopt;
        const std::size_t h = it->second;
        if (mark[h] == 1) continue;
        if (mark[h] == 2) {
          horizon.emplace_back(a, b);
          continue;
        }
        if (distance(faces[h], eye) > kPlane) {
          mark[h] = 1;
          stack.push_back(h);
        } else {
          mark[h] = 2;
          horizon.emplace_back(a, b);
        }
      }
    }
    // A face first classified invisible may be reached again through another
    // visible face; those edges were recorded when met, so deduplicate.
    std::sort(horizon.begin(), horizon.end());
    horizon.erase(std::unique(horizon.begin(), horizon.end()), horizon.end());

    std::vector<std::size_t> orphans;
    for (std::size_t g : visible) {
      faces[g].alive = false;
      for (std::size_t e = 0; e < 3; ++e) {
        const auto it = edges.find(edge_key(faces[g].v[e], faces[g].v[(e + 1) % 3]));
        if (it != edges.end() && it->second == g) edges.erase(it);
      }
      for (std::size_t i : faces[g].outside) {
        if (i != eye) orphans.push_back(i);
      }
      faces[g].outside.clear();
      faces[g].outside.shrink_to_fit();
    }
    const std::size_t first_new = faces.size();
    for (const auto& [a, b] : horizon) {
      if (!add_face(a, b, eye)) return std::nullopt;
    }
    for (std::size_t i : orphans) assign(i, first_new);
    for (std::size_t g = first_new; g < faces.size(); ++g) {
      if (!faces[g].outside.empty()) work.push_back(g);
    }
  }

  for (const auto& face : faces) {
    if (!face.alive) continue;
    for (std::size_t i : face.v) keep[i] = true;
  }
  return keep;
}

}  // namespace credal::geometry::detail
