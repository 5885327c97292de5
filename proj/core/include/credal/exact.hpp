#pragma once

#include "credal/model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace credal::exact {

// Compiled variable elimination for one (query, evidence) pair on a polytree.
// The elimination schedule (leaf stripping over the requisite variables) is
// fixed at construction; each evaluation only reads the currently selected
// vertex of every requisite local set, so one evaluator serves many vertex
// selections of the same network.
class PointEvaluator {
 public:
  // Without a query the evaluator computes p(evidence) alone.
  PointEvaluator(const CredalNetwork& net, std::optional<std::size_t> query,
                 const Evidence& evidence);

  // p(query = x, evidence) for every category x, or {p(evidence)} without a
  // query. Every requisite local set must resolve to a single vertex under
  // `selection` (null = use the network as is). Throws InvalidInput otherwise.
  const std::vector<double>& joint(const VertexSelection* selection) const;

  const std::vector<bool>& requisite() const { return requisite_; }
  // Requisite local sets, in (variable, configuration) order.
  const std::vector<LocalSetId>& requisite_sets() const { return requisite_sets_; }

 private:
  struct Entry {
    std::uint32_t config;
    std::uint32_t category;
  };
  struct Factor {
    std::vector<std::size_t> scope;
    std::vector<std::size_t> card;
    std::size_t size = 1;
  };
  struct Step {
    std::vector<std::size_t> inputs;
    std::size_t output = 0;
    std::vector<std::size_t> card;                  // union scope cardinalities
    std::vector<std::vector<std::size_t>> strides;  // per input, per union var
    std::vector<std::size_t> out_strides;           // per union var
  };

  const CredalNetwork* net_;
  std::optional<std::size_t> query_;
  std::vector<bool> requisite_;
  std::vector<LocalSetId> requisite_sets_;
  std::vector<Factor> factors_;
  std::vector<std::size_t> source_variable_;  // initial factor -> variable
  std::vector<std::vector<Entry>> entries_;   // initial factor -> table layout
  std::vector<Step> steps_;
  std::vector<std::size_t> final_factors_;
  std::vector<std::size_t> final_query_stride_;
  std::size_t result_size_ = 1;

  mutable std::vector<std::vector<double>> values_;
  mutable std::vector<double> result_;
};

// p(query | evidence) on a network whose requisite local sets are singletons
// (or fixed by `selection`). Throws ZeroProbabilityEvidence when p(evidence)
// is zero.
Distribution marginal(const CredalNetwork& net, std::size_t query, const Evidence& evidence,
                      const VertexSelection* selection = nullptr);

// p(evidence); 1 for empty evidence, 0 for impossible evidence.
double evidence_probability(const CredalNetwork& net, const Evidence& evidence,
                            const VertexSelection* selection = nullptr);

struct ExhaustiveOptions {
  // Limit on the number of enumerated selections.
  std::uint64_t cap = std::uint64_t{1} << 24;
  unsigned threads = 1;
};

struct ExhaustiveResult {
  // Per category of the query.
  IntervalPotential bounds;
  std::vector<VertexSelection> argmin;
  std::vector<VertexSelection> argmax;
  std::uint64_t enumerated = 0;
  // Selections under which the evidence has probability zero; these are
  // excluded because the conditional is undefined there.
  std::uint64_t skipped_zero_evidence = 0;
};

// Exact bounds on p(query = x | evidence) for every category x, by
// enumerating every combination of vertices of the requisite local sets.
// Barren sets cannot change the answer and are fixed at vertex 0 in the
// reported argmin/argmax selections. Throws CapExceeded above options.cap and
// ZeroProbabilityEvidence when no selection gives the evidence positive mass.
ExhaustiveResult exhaustive_bounds_all(const CredalNetwork& net, std::size_t query,
                                       const Evidence& evidence,
                                       const ExhaustiveOptions& options = {});

ProbabilityInterval exhaustive_bounds(const CredalNetwork& net, std::size_t query,
                                      std::size_t category, const Evidence& evidence,
                                      const ExhaustiveOptions& options = {});

}  // namespace credal::exact
