#pragma once

#include "credal/ar.hpp"
#include "credal/model.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace credal::ar_plus {

struct VertexBudget {
  std::size_t max_vertices = 256;
};

// A credal set given by its vertices.
struct CredalMessage {
  std::vector<Distribution> vertices;
};

// The credal set of every distribution inside the interval box.
// Throws Infeasible when the box holds no distribution.
CredalMessage lift_to_credal(const IntervalPotential& potential);

// Credal set of sum_config p(x | config) prod_j q_j(config_j), eliminating the
// parents one at a time (cheapest first) with every parent message q_j drawn
// from its credal set and each remaining configuration handled separately.
// Redundant points are pruned after every partial sum. Returns nullopt
// (fall back to interval arithmetic) when any input or working set would
// exceed the budget.
std::optional<CredalMessage> local_eliminate(const ar::TableView& table,
                                             std::span<const CredalMessage> parents,
                                             VertexBudget budget);

// Diagnostic message from a child to parent `target` using table vertices
// and parent credal sets directly; same contract and fallback rule as
// local_eliminate. parents[target] is ignored. The result is unnormalized.
std::optional<IntervalPotential> lambda_eliminate(const ar::TableView& table,
                                                  std::span<const CredalMessage> parents,
                                                  std::size_t target,
                                                  const IntervalPotential& lambda,
                                                  VertexBudget budget);

struct PlusStats {
  // Message computations that involve a conditional table and at least one
  // non-degenerate input.
  std::size_t credal_sites = 0;
  // Of those, the ones that reverted to interval arithmetic.
  std::size_t fallbacks = 0;
  // Largest vertex set produced by predictive (pi) local elimination.
  std::size_t peak_vertices = 0;
};

struct PlusResult {
  IntervalPotential bounds;
  PlusStats stats;
};

// A/R schedule with credal local elimination at every product site. Bounds
// are nested inside ar::propagate's and still enclose the exact answer.
IntervalPotential propagate_plus(const CredalNetwork& net, std::size_t query,
                                 const Evidence& evidence, VertexBudget budget = {},
                                 const VertexSelection* selection = nullptr);

PlusResult propagate_plus_with_stats(const CredalNetwork& net, std::size_t query,
                                     const Evidence& evidence, VertexBudget budget = {},
                                     const VertexSelection* selection = nullptr);

}  // namespace credal::ar_plus
