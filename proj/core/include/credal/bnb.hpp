#pragma once

#include "credal/ar_plus.hpp"
#include "credal/model.hpp"
#include "credal/random.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace credal::bnb {

enum class BoundAlgorithm { kARPlus, kAR };
enum class Mode { kExact, kApproximate };

struct SearchNode {
  VertexSelection selection;
  // Outer bound on the subproblem's optimum.
  double bound = 0.0;
  // Number of entries of the set order fixed so far.
  std::size_t depth = 0;
};

struct SolveStats {
  // Subproblems that were bounded or evaluated exactly, root included.
  std::uint64_t nodes_expanded = 0;
  std::uint64_t leaves_evaluated = 0;
  std::uint64_t pruned = 0;
  double wall_time_s = 0.0;
  double final_gap = 0.0;
  bool hit_node_limit = false;
};

// Incumbent and global outer bound each time either changes.
struct BoundRecord {
  std::uint64_t nodes = 0;
  double incumbent = 0.0;
  double outer = 0.0;
};

struct SolveOptions {
  double epsilon = 0.0;
  ar_plus::VertexBudget budget;
  // Branching order; default_set_order() when empty.
  std::vector<LocalSetId> set_order;
  BoundAlgorithm bounds = BoundAlgorithm::kARPlus;
  std::size_t restarts = 8;
  // Re-run local search from a leaf that improves the incumbent by > 1e-6.
  bool refresh = true;
  // Stop with an approximate answer after this many nodes (0 = no limit).
  std::uint64_t node_limit = 0;
  unsigned threads = 1;
};

struct SolveResult {
  double value = 0.0;
  // Total selection attaining `value`.
  VertexSelection witness;
  Mode mode = Mode::kExact;
  // Best known outer bound when the search stopped (equals value in exact
  // mode).
  double outer = 0.0;
  SolveStats stats;
  std::vector<BoundRecord> trajectory;
};

// Requisite local sets with more than one vertex, most vertices first; ties
// go to variables with fewer configurations (roots first), then to
// (variable, configuration) order.
std::vector<LocalSetId> default_set_order(const CredalNetwork& net, std::size_t query,
                                          const Evidence& evidence);

// Lower (Minimize) or upper (Maximize) p(query = category | evidence) by
// depth-first branch-and-bound over vertex choices. Children are bounded by
// A/R+ (or A/R) on the partially fixed network and visited best bound first;
// the incumbent starts from local-search multistart. With epsilon > 0 the
// search stops once outer bound - incumbent <= epsilon.
SolveResult solve(const CredalNetwork& net, std::size_t query, std::size_t category,
                  const Evidence& evidence, Direction direction, const SolveOptions& options,
                  Rng& rng);

struct IntervalResult {
  ProbabilityInterval interval;
  SolveResult lower;
  SolveResult upper;
};

IntervalResult solve_interval(const CredalNetwork& net, std::size_t query, std::size_t category,
                              const Evidence& evidence, const SolveOptions& options, Rng& rng);

}  // namespace credal::bnb
