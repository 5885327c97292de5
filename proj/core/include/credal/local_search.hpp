#pragma once

#include "credal/model.hpp"
#include "credal/random.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace credal::local_search {

// Order in which local sets are revisited; covers every set once.
struct NodeOrdering {
  std::vector<LocalSetId> sets;

  // Topological order of variables, configurations in mixed-radix order.
  static NodeOrdering topological(const CredalNetwork& net);
};

struct SearchState {
  VertexSelection selection;
  // p(query = category | evidence) under `selection`.
  double value = 0.0;
  Direction direction = Direction::Maximize;
  // Accepted vertex changes and completed passes over the ordering.
  std::size_t moves = 0;
  std::size_t cycles = 0;
  bool hit_cycle_cap = false;
  // Value after the initial evaluation and after every accepted move.
  std::vector<double> trajectory;
};

struct Options {
  std::size_t cycle_cap = 100;
  unsigned threads = 1;
};

// Best vertex of `set_id` with every other set held fixed, by direct
// evaluation of p(query = category, evidence) / p(evidence) per candidate.
// Candidates with p(evidence) = 0 are skipped; ties go to the lowest index.
// Throws ZeroProbabilityEvidence when every candidate is skipped.
std::pair<std::size_t, double> best_vertex_for_set(const CredalNetwork& net,
                                                   const VertexSelection& selection,
                                                   LocalSetId set_id, std::size_t query,
                                                   std::size_t category, const Evidence& evidence,
                                                   Direction direction);

// Coordinate ascent (descent for Minimize) over local sets until a full pass
// changes nothing by more than 1e-12. Without `initial` every set starts at
// a vertex drawn uniformly from `rng`.
SearchState optimize(const CredalNetwork& net, std::size_t query, std::size_t category,
                     const Evidence& evidence, Direction direction, const NodeOrdering& ordering,
                     std::optional<VertexSelection> initial, Rng& rng, const Options& options = {});

// Best of `restarts` optimize() runs from random starts. The starts are drawn
// from `rng` in order before any run, so the result does not depend on the
// thread count; ties keep the earliest run.
SearchState multistart(const CredalNetwork& net, std::size_t query, std::size_t category,
                       const Evidence& evidence, Direction direction, std::size_t restarts,
                       Rng& rng, const Options& options = {});

// Uniform random total selection.
VertexSelection random_selection(const CredalNetwork& net, Rng& rng);

}  // namespace credal::local_search
