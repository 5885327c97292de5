#include "credal/ar_plus.hpp"

#include "credal/error.hpp"
#include "credal/geometry.hpp"
#include "propagation.hpp"
#include "radix.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace credal::ar_plus {
namespace {

using geometry::Point;

// Candidate sets are at most budget * |set| points, so pruning is never
// skipped; the budget applies to the pruned working sets.
constexpr std::size_t kUncapped = std::numeric_limits<std::size_t>::max();

std::vector<std::size_t> cards_of(std::span<const CredalMessage> parents,
                                  std::optional<std::size_t> skip, std::size_t skip_card) {
  std::vector<std::size_t> cards;
  for (std::size_t j = 0; j < parents.size(); ++j) {
    if (skip && *skip == j) {
      cards.push_back(skip_card);
      continue;
    }
    if (parents[j].vertices.empty()) throw InvalidInput("empty credal message");
    cards.push_back(parents[j].vertices.front().size());
  }
  return cards;
}

bool within_budget(const ar::TableView& table, std::span<const CredalMessage> parents,
                   std::optional<std::size_t> skip, VertexBudget budget) {
  for (const auto& list : table) {
    if (list.empty()) throw InvalidInput("empty vertex list in conditional table");
    if (list.size() > budget.max_vertices) return false;
  }
  for (std::size_t j = 0; j < parents.size(); ++j) {
    if (!(skip && *skip == j) && parents[j].vertices.size() > budget.max_vertices) return false;
  }
  return true;
}

// Splits index i over `cards` into (high, digit k, low) parts.
struct Split {
  std::size_t stride;  // product of cards after k
  std::size_t card;
  std::size_t index(std::size_t rest, std::size_t digit) const {
    return (rest / stride) * card * stride + digit * stride + rest % stride;
  }
};

}  // namespace

CredalMessage lift_to_credal(const IntervalPotential& potential) {
  return CredalMessage{geometry::interval_credal_vertices(potential)};
}

std::optional<CredalMessage> local_eliminate(const ar::TableView& table,
                                             std::span<const CredalMessage> parents,
                                             VertexBudget budget) {
  if (budget.max_vertices == 0) throw InvalidInput("vertex budget must be positive");
  std::vector<std::size_t> cards = cards_of(parents, std::nullopt, 0);
  if (table.size() != detail::radix_size(cards)) {
    throw InvalidInput("local_eliminate: table has " + std::to_string(table.size()) +
                       " configurations, parents span " + std::to_string(detail::radix_size(cards)));
  }
  if (!within_budget(table, parents, std::nullopt, budget)) return std::nullopt;
  const std::size_t dim = table.front().front().size();

  std::vector<std::vector<Point>> sets(table.size());
  for (std::size_t c = 0; c < table.size(); ++c) {
    for (const auto& v : table[c]) {
      if (v.size() != dim) throw InvalidInput("local_eliminate: vertex dimension mismatch");
      sets[c].push_back(v);
    }
  }

  // Cheapest parents first; `remaining` keeps declared order so the flat
  // index stays mixed radix.
  std::vector<std::size_t> order(parents.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cards[a] * parents[a].vertices.size() < cards[b] * parents[b].vertices.size();
  });
  std::vector<std::size_t> remaining(parents.size());
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});

  for (std::size_t p : order) {
    const std::size_t pos =
        static_cast<std::size_t>(std::find(remaining.begin(), remaining.end(), p) - remaining.begin());
    std::size_t stride = 1;
    for (std::size_t k = pos + 1; k < remaining.size(); ++k) stride *= cards[remaining[k]];
    const Split split{stride, cards[p]};
    const std::size_t out_size = sets.size() / cards[p];
    std::vector<std::vector<Point>> next(out_size);

    for (std::size_t r = 0; r < out_size; ++r) {
      std::vector<Point> merged;
      for (const auto& m : parents[p].vertices) {
        // Minkowski sum of m(y) * S_y over the states y, pruned as it grows.
        std::vector<Point> partial{Point(dim, 0.0)};
        for (std::size_t y = 0; y < cards[p]; ++y) {
          if (m[y] == 0.0) continue;
          const auto& s = sets[split.index(r, y)];
          std::vector<Point> grown;
          grown.reserve(partial.size() * s.size());
          for (const auto& a : partial) {
            for (const auto& v : s) {
              Point q = a;
              for (std::size_t d = 0; d < dim; ++d) q[d] += m[y] * v[d];
              grown.push_back(std::move(q));
            }
          }
          partial = geometry::prune_redundant(grown, kUncapped);
          if (partial.size() > budget.max_vertices) return std::nullopt;
        }
        merged.insert(merged.end(), partial.begin(), partial.end());
      }
      next[r] = geometry::prune_redundant(merged, kUncapped);
      if (next[r].size() > budget.max_vertices) return std::nullopt;
    }
    sets = std::move(next);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pos));
  }
  return CredalMessage{std::move(sets.front())};
}

std::optional<IntervalPotential> lambda_eliminate(const ar::TableView& table,
                                                  std::span<const CredalMessage> parents,
                                                  std::size_t target,
                                                  const IntervalPotential& lambda,
                                                  VertexBudget budget) {
  if (budget.max_vertices == 0) throw InvalidInput("vertex budget must be positive");
  if (target >= parents.size()) throw InvalidInput("lambda_eliminate: bad parent index");
  const std::size_t dim = lambda.size();
  // The target's cardinality is recovered from the table size.
  std::size_t others = 1;
  for (std::size_t j = 0; j < parents.size(); ++j) {
    if (j == target) continue;
    if (parents[j].vertices.empty()) throw InvalidInput("empty credal message");
    others *= parents[j].vertices.front().size();
  }
  if (table.size() % others != 0) throw InvalidInput("lambda_eliminate: table size mismatch");
  std::vector<std::size_t> cards = cards_of(parents, target, table.size() / others);
  if (!within_budget(table, parents, target, budget)) return std::nullopt;

  std::vector<double> lo(table.size()), hi(table.size());
  for (std::size_t c = 0; c < table.size(); ++c) {
    lo[c] = std::numeric_limits<double>::infinity();
    hi[c] = -std::numeric_limits<double>::infinity();
    for (const auto& v : table[c]) {
      if (v.size() != dim) throw InvalidInput("lambda_eliminate: lambda size mismatch");
      double a = 0.0, b = 0.0;
      for (std::size_t x = 0; x < dim; ++x) {
        a += lambda[x].lower * v[x];
        b += lambda[x].upper * v[x];
      }
      lo[c] = std::min(lo[c], a);
      hi[c] = std::max(hi[c], b);
    }
  }

  // Each elimination is a linear program over one credal set, solved at a
  // vertex; separate configurations are optimized separately.
  std::vector<std::size_t> remaining(parents.size());
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});
  for (std::size_t p = 0; p < parents.size(); ++p) {
    if (p == target) continue;
    const std::size_t pos =
        static_cast<std::size_t>(std::find(remaining.begin(), remaining.end(), p) - remaining.begin());
    std::size_t stride = 1;
    for (std::size_t k = pos + 1; k < remaining.size(); ++k) stride *= cards[remaining[k]];
    const Split split{stride, cards[p]};
    const std::size_t out_size = lo.size() / cards[p];
    std::vector<double> nlo(out_size, std::numeric_limits<double>::infinity());
    std::vector<double> nhi(out_size, -std::numeric_limits<double>::infinity());
    for (std::size_t r = 0; r < out_size; ++r) {
      for (const auto& m : parents[p].vertices) {
        double a = 0.0, b = 0.0;
        for (std::size_t y = 0; y < cards[p]; ++y) {
          a += m[y] * lo[split.index(r, y)];
          b += m[y] * hi[split.index(r, y)];
        }
        nlo[r] = std::min(nlo[r], a);
        nhi[r] = std::max(nhi[r], b);
      }
    }
    lo = std::move(nlo);
    hi = std::move(nhi);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pos));
  }

  IntervalPotential out(lo.size());
  for (std::size_t u = 0; u < lo.size(); ++u) out[u] = {std::max(0.0, lo[u]), std::max(0.0, hi[u])};
  return out;
}

IntervalPotential propagate_plus(const CredalNetwork& net, std::size_t query,
                                 const Evidence& evidence, VertexBudget budget,
                                 const VertexSelection* selection) {
  return detail::propagate(net, query, evidence, selection, detail::Mode::kARPlus,
                           budget.max_vertices, nullptr);
}

PlusResult propagate_plus_with_stats(const CredalNetwork& net, std::size_t query,
                                     const Evidence& evidence, VertexBudget budget,
                                     const VertexSelection* selection) {
  detail::EngineStats stats;
  PlusResult out;
  out.bounds = detail::propagate(net, query, evidence, selection, detail::Mode::kARPlus,
                                 budget.max_vertices, &stats);
  out.stats = {stats.credal_sites, stats.fallbacks, stats.peak_vertices};
  return out;
}

}  // namespace credal::ar_plus
