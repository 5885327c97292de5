#pragma once

#include "credal/model.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace credal::ar {

// Vertex lists of one conditional table, one entry per parent configuration
// (mixed radix, first parent most significant).
using TableView = std::vector<std::span<const Distribution>>;

// View of v's table with `selection` applied (null = every set free).
TableView table_view(const CredalNetwork& net, std::size_t v, const VertexSelection* selection);
TableView table_view(const ConditionalCredalTable& table);

// Interval normalization: the tightest box holding q / sum(q) for every
// nonnegative q in the input box. lower'_i = l_i / (l_i + sum_{j!=i} u_j) and
// upper'_i = u_i / (u_i + sum_{j!=i} l_j). Entries that can only be zero map
// to [0, 0]; an entry that is the only one able to be positive gets lower 1.
// Throws ZeroProbabilityEvidence when every upper bound is zero.
IntervalPotential ar_normalize(const IntervalPotential& potential);

// Componentwise product of nonnegative intervals.
IntervalPotential interval_product(const IntervalPotential& a, const IntervalPotential& b);

// Product of all messages; an empty list gives `cardinality` copies of [1, 1].
IntervalPotential lambda_combine(std::span<const IntervalPotential> messages,
                                 std::size_t cardinality);

// Interval box of the joint parent distribution: the product of the parent
// messages over the mixed-radix configuration index, normalized with
// ar_normalize. No parents gives the single configuration [1, 1].
IntervalPotential joint_parent_box(std::span<const IntervalPotential> parent_messages);

// Bounds on p(child) given interval messages from every parent: for each
// child category, the greedy extreme mass over joint_parent_box with the
// per-configuration minimum (maximum) of p(x | config) as coefficients.
IntervalPotential pi_from_parents(const TableView& table,
                                  std::span<const IntervalPotential> parent_messages);
IntervalPotential pi_from_parents(const ConditionalCredalTable& table,
                                  std::span<const IntervalPotential> parent_messages);

// Unnormalized bounds on the diagnostic message from a child to its parent
// number `target`: for each parent state u, extremes of
// sum_config q(config) sum_x lambda(x) p(x | u, config) with q ranging over
// the joint box of the other parents. parent_messages[target] is ignored.
IntervalPotential lambda_to_parent(const TableView& table,
                                   std::span<const IntervalPotential> parent_messages,
                                   std::size_t target, const IntervalPotential& lambda);

// Outer bounds on p(query = x | evidence) for every category x by interval
// message passing over the requisite part of the polytree. `selection`
// restricts fixed sets to their chosen vertex. Throws
// ZeroProbabilityEvidence when the evidence is impossible under every
// selection.
IntervalPotential propagate(const CredalNetwork& net, std::size_t query, const Evidence& evidence,
                            const VertexSelection* selection = nullptr);

}  // namespace credal::ar
