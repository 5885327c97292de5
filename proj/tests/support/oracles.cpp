#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace credal::testing {
namespace {

// Visits every joint state of the network, passing its probability.
template <class Visit>
void for_each_joint(const CredalNetwork& net, Visit&& visit) {
  const std::size_t n = net.size();
  std::vector<std::size_t> state(n, 0);
  for (;;) {
    double p = 1.0;
    for (std::size_t v = 0; v < n && p > 0.0; ++v) {
      std::vector<std::size_t> pa;
      for (std::size_t u : net.parents(v)) pa.push_back(state[u]);
      const std::size_t cfg = net.encode_config(v, pa);
      p *= net.table(v).vertices[cfg].front()[state[v]];
    }
    visit(state, p);
    std::size_t k = n;
    while (k-- > 0) {
      if (++state[k] < net.cardinality(k)) break;
      state[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) return;
  }
}

bool consistent(const std::vector<std::size_t>& state, const Evidence& evidence) {
  for (const auto& [v, c] : evidence) {
    if (state[v] != c) return false;
  }
  return true;
}

}  // namespace

Distribution naive_marginal(const CredalNetwork& precise, std::size_t query,
                            const Evidence& evidence) {
  Distribution out(precise.cardinality(query), 0.0);
  for_each_joint(precise, [&](const std::vector<std::size_t>& s, double p) {
    if (consistent(s, evidence)) out[s[query]] += p;
  });
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  if (!(total > 0.0)) return {};
  for (double& x : out) x /= total;
  return out;
}

double naive_evidence_probability(const CredalNetwork& precise, const Evidence& evidence) {
  double total = 0.0;
  for_each_joint(precise, [&](const std::vector<std::size_t>& s, double p) {
    if (consistent(s, evidence)) total += p;
  });
  return total;
}

BruteForceBounds brute_force_bounds(const CredalNetwork& net, std::size_t query,
                                    const Evidence& evidence) {
  const auto sets = net.local_sets();
  std::vector<std::size_t> digit(sets.size(), 0);
  BruteForceBounds out;
  out.bounds.assign(net.cardinality(query), {INFINITY, -INFINITY});
  for (;;) {
    auto tables = net.tables();
    for (std::size_t k = 0; k < sets.size(); ++k) {
      auto& list = tables[sets[k].variable].vertices[sets[k].config];
      Distribution chosen = list[digit[k]];
      list.assign(1, chosen);
    }
    const CredalNetwork precise(net.variables(), std::move(tables));
    const Distribution m = naive_marginal(precise, query, evidence);
    ++out.selections;
    for (std::size_t x = 0; x < m.size(); ++x) {
      out.bounds[x].lower = std::min(out.bounds[x].lower, m[x]);
      out.bounds[x].upper = std::max(out.bounds[x].upper, m[x]);
    }
    std::size_t k = sets.size();
    while (k-- > 0) {
      if (++digit[k] < net.vertices(sets[k]).size()) break;
      digit[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

std::vector<Distribution> box_simplex_vertices_by_permutation(const IntervalPotential& box) {
  const std::size_t n = box.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<Distribution> out;
  do {
    Distribution p(n);
    double residual = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      p[j] = box[j].lower;
      residual -= box[j].lower;
    }
    for (std::size_t j : perm) {
      const double add = std::min(std::max(residual, 0.0), box[j].upper - box[j].lower);
      p[j] += add;
      residual -= add;
    }
    bool dup = false;
    for (const auto& q : out) {
      bool same = true;
      for (std::size_t j = 0; j < n; ++j) same = same && std::abs(p[j] - q[j]) <= 1e-12;
      dup = dup || same;
    }
    if (!dup) out.push_back(p);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

namespace {

// Solves the k x k system M w = r by Gaussian elimination with partial
// pivoting; false when singular.
bool solve(std::vector<std::vector<double>> M, std::vector<double> r, std::vector<double>& w) {
  const std::size_t k = r.size();
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < k; ++i) {
      if (std::abs(M[i][c]) > std::abs(M[piv][c])) piv = i;
    }
    if (std::abs(M[piv][c]) < 1e-12) return false;
    std::swap(M[c], M[piv]);
    std::swap(r[c], r[piv]);
    for (std::size_t i = 0; i < k; ++i) {
      if (i == c) continue;
      const double f = M[i][c] / M[c][c];
      for (std::size_t j = c; j < k; ++j) M[i][j] -= f * M[c][j];
      r[i] -= f * r[c];
    }
  }
  w.resize(k);
  for (std::size_t i = 0; i < k; ++i) w[i] = r[i] / M[i][i];
  return true;
}

bool in_simplex_of(const std::vector<const std::vector<double>*>& pts,
                   const std::vector<double>& p, double tol) {
  // Least squares on [points; 1] w = [p; 1] through the normal equations.
  const std::size_t k = pts.size();
  const std::size_t d = p.size();
  auto col = [&](std::size_t j, std::size_t row) { return row < d ? (*pts[j])[row] : 1.0; };
  auto target = [&](std::size_t row) { return row < d ? p[row] : 1.0; };
  std::vector<std::vector<double>> M(k, std::vector<double>(k, 0.0));
  std::vector<double> r(k, 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      for (std::size_t row = 0; row <= d; ++row) M[a][b] += col(a, row) * col(b, row);
    }
    for (std::size_t row = 0; row <= d; ++row) r[a] += col(a, row) * target(row);
  }
  std::vector<double> w;
  if (!solve(M, r, w)) return false;
  for (double x : w) {
    if (x < -tol) return false;
  }
  for (std::size_t row = 0; row <= d; ++row) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += w[j] * col(j, row);
    if (std::abs(s - target(row)) > tol) return false;
  }
  return true;
}

}  // namespace

bool in_hull_caratheodory(const std::vector<std::vector<double>>& points,
                          const std::vector<double>& p, double tol) {
  const std::size_t n = points.size();
  const std::size_t max_k = std::min(n, p.size() + 1);
  for (std::size_t k = 1; k <= max_k; ++k) {
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
      std::vector<const std::vector<double>*> sub;
      for (std::size_t i = 0; i < n; ++i) {
        if (pick[i]) sub.push_back(&points[i]);
      }
      if (in_simplex_of(sub, p, tol)) return true;
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return false;
}

std::vector<std::vector<double>> extreme_points(const std::vector<std::vector<double>>& points) {
  std::vector<std::vector<double>> distinct;
  for (const auto& p : points) {
    bool dup = false;
    for (const auto& q : distinct) {
      bool same = true;
      for (std::size_t j = 0; j < p.size(); ++j) same = same && std::abs(p[j] - q[j]) <= 1e-12;
      dup = dup || same;
    }
    if (!dup) distinct.push_back(p);
  }
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    std::vector<std::vector<double>> others;
    for (std::size_t j = 0; j < distinct.size(); ++j) {
      if (j != i) others.push_back(distinct[j]);
    }
    if (others.empty() || !in_hull_caratheodory(others, distinct[i])) out.push_back(distinct[i]);
  }
  return out;
}

}  // namespace credal::testing
