#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace credal {

// One probability per category.
using Distribution = std::vector<double>;

// Variable index -> observed category index.
using Evidence = std::map<std::size_t, std::size_t>;

using BigCount = boost::multiprecision::cpp_int;

enum class Direction { Minimize, Maximize };

inline constexpr double kNormalizationTolerance = 1e-9;

struct Variable {
  std::string name;
  std::vector<std::string> categories;

  std::size_t cardinality() const { return categories.size(); }
  bool operator==(const Variable&) const = default;
};

struct ProbabilityInterval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  bool operator==(const ProbabilityInterval&) const = default;
};

// One interval per category of some variable (or per joint configuration).
using IntervalPotential = std::vector<ProbabilityInterval>;

// Vertex lists of K(child | parents = c) for every parent configuration c.
// Configurations are indexed in mixed radix over `parents`, first parent most
// significant.
struct ConditionalCredalTable {
  std::size_t child = 0;
  std::vector<std::size_t> parents;
  std::vector<std::vector<Distribution>> vertices;

  bool operator==(const ConditionalCredalTable&) const = default;
};

// Addresses one local credal set: a variable and one of its parent
// configurations.
struct LocalSetId {
  std::size_t variable = 0;
  std::size_t config = 0;

  auto operator<=>(const LocalSetId&) const = default;
};

class CredalNetwork {
 public:
  CredalNetwork() = default;

  // No validation is performed here; run validate() on untrusted input.
  // tables[i].child must equal i.
  CredalNetwork(std::vector<Variable> variables,
                std::vector<ConditionalCredalTable> tables);

  std::size_t size() const { return variables_.size(); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(std::size_t v) const { return variables_[v]; }
  const std::vector<ConditionalCredalTable>& tables() const { return tables_; }
  const ConditionalCredalTable& table(std::size_t v) const { return tables_[v]; }
  std::size_t cardinality(std::size_t v) const {
    return variables_[v].cardinality();
  }
  const std::vector<std::size_t>& parents(std::size_t v) const {
    return tables_[v].parents;
  }
  const std::vector<std::size_t>& children(std::size_t v) const {
    return children_[v];
  }

  std::optional<std::size_t> find(std::string_view name) const;
  // Throws InvalidInput naming the variable when absent.
  std::size_t index_of(std::string_view name) const;
  std::size_t category_of(std::size_t v, std::string_view label) const;

  // Number of parent configurations of v (1 for roots).
  std::size_t config_count(std::size_t v) const;
  // Parent states (in declared parent order) for configuration index cfg.
  std::vector<std::size_t> decode_config(std::size_t v, std::size_t cfg) const;
  std::size_t encode_config(std::size_t v,
                            std::span<const std::size_t> parent_states) const;

  const std::vector<Distribution>& vertices(LocalSetId id) const {
    return tables_[id.variable].vertices[id.config];
  }

  // Every local set in (variable, configuration) order.
  std::vector<LocalSetId> local_sets() const;
  std::size_t local_set_count() const;

  // Parents before children; ties in declaration order.
  std::vector<std::size_t> topological_order() const;

  bool operator==(const CredalNetwork& other) const {
    return variables_ == other.variables_ && tables_ == other.tables_;
  }

 private:
  std::vector<Variable> variables_;
  std::vector<ConditionalCredalTable> tables_;
  std::vector<std::vector<std::size_t>> children_;
};

// A choice of one vertex per local credal set. Partial selections describe
// branch-and-bound subproblems; total ones describe Bayesian networks, i.e.
// vertices of the strong extension.
class VertexSelection {
 public:
  static constexpr std::int32_t kUnset = -1;

  VertexSelection() = default;
  explicit VertexSelection(const CredalNetwork& net);

  bool is_set(LocalSetId id) const { return choice_[id.variable][id.config] != kUnset; }
  std::size_t get(LocalSetId id) const {
    return static_cast<std::size_t>(choice_[id.variable][id.config]);
  }
  void set(LocalSetId id, std::size_t vertex) {
    choice_[id.variable][id.config] = static_cast<std::int32_t>(vertex);
  }
  void unset(LocalSetId id) { choice_[id.variable][id.config] = kUnset; }

  std::size_t fixed_count() const;
  bool is_total() const;
  bool empty() const { return fixed_count() == 0; }

  // Raw per-variable choices, kUnset where free.
  const std::vector<std::vector<std::int32_t>>& choices() const { return choice_; }

  bool operator==(const VertexSelection&) const = default;

 private:
  std::vector<std::vector<std::int32_t>> choice_;
};

// Vertex list of `id` after applying `selection` (a single vertex when fixed).
// A null selection leaves every set free.
std::span<const Distribution> candidate_vertices(const CredalNetwork& net,
                                                 const VertexSelection* selection,
                                                 LocalSetId id);

enum class ValidationIssue {
  kNone,
  kEmptyCategories,
  kDuplicateName,
  kDuplicateCategory,
  kTableMismatch,
  kUnknownParent,
  kCycle,
  kNotPolytree,
  kMissingConfiguration,
  kEmptyVertexList,
  kDimensionMismatch,
  kNotNormalized,
};

struct ValidationReport {
  ValidationIssue issue = ValidationIssue::kNone;
  std::string message;

  bool ok() const { return issue == ValidationIssue::kNone; }
  explicit operator bool() const { return ok(); }
};

// First violated structural or numerical invariant, or ok.
ValidationReport validate(const CredalNetwork& net);

// Product of all vertex-list sizes, exact.
BigCount count_potential_vertices(const CredalNetwork& net);

// Componentwise [min, max] over the vertices. Throws InvalidInput on an empty
// list or mismatched lengths.
IntervalPotential interval_projection(std::span<const Distribution> vertices);

// Copy of `net` in which every fixed set is replaced by its chosen vertex.
CredalNetwork restrict(const CredalNetwork& net, const VertexSelection& selection);

// Lower and upper expectation of f over the credal set with these vertices.
std::pair<double, double> expectation_bounds(std::span<const Distribution> vertices,
                                             std::span<const double> f);

// Throws InvalidInput if the query or evidence refer to unknown variables or
// categories, or the query is itself observed.
void check_query(const CredalNetwork& net, std::size_t query, const Evidence& evidence);

// Variables whose local sets can influence p(query | evidence): the query,
// the evidence variables and all their ancestors. Everything else is barren.
std::vector<bool> requisite_variables(const CredalNetwork& net, std::size_t query,
                                      const Evidence& evidence);

}  // namespace credal
