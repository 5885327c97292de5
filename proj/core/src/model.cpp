#include "credal/model.hpp"

#include "credal/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

namespace credal {

CredalNetwork::CredalNetwork(std::vector<Variable> variables,
                             std::vector<ConditionalCredalTable> tables)
    : variables_(std::move(variables)),
      tables_(std::move(tables)),
      children_(variables_.size()) {
  for (std::size_t v = 0; v < tables_.size(); ++v) {
    for (std::size_t p : tables_[v].parents) {
      if (p < children_.size() && v < variables_.size()) children_[p].push_back(v);
    }
  }
}

std::optional<std::size_t> CredalNetwork::find(std::string_view name) const {
  for (std::size_t v = 0; v < variables_.size(); ++v) {
    if (variables_[v].name == name) return v;
  }
  return std::nullopt;
}

std::size_t CredalNetwork::index_of(std::string_view name) const {
  if (auto v = find(name)) return *v;
  throw InvalidInput("unknown variable '" + std::string(name) + "'");
}

std::size_t CredalNetwork::category_of(std::size_t v, std::string_view label) const {
  const auto& cats = variables_[v].categories;
  auto it = std::find(cats.begin(), cats.end(), label);
  if (it == cats.end()) {
    throw InvalidInput("variable '" + variables_[v].name + "' has no category '" +
                       std::string(label) + "'");
  }
  return static_cast<std::size_t>(it - cats.begin());
}

std::size_t CredalNetwork::config_count(std::size_t v) const {
  std::size_t n = 1;
  for (std::size_t p : tables_[v].parents) n *= variables_[p].cardinality();
  return n;
}

std::vector<std::size_t> CredalNetwork::decode_config(std::size_t v,
                                                      std::size_t cfg) const {
  const auto& parents = tables_[v].parents;
  std::vector<std::size_t> states(parents.size());
  for (std::size_t i = parents.size(); i-- > 0;) {
    const std::size_t card = variables_[parents[i]].cardinality();
    states[i] = cfg % card;
    cfg /= card;
  }
  return states;
}

std::size_t CredalNetwork::encode_config(
    std::size_t v, std::span<const std::size_t> parent_states) const {
  const auto& parents = tables_[v].parents;
  std::size_t cfg = 0;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    cfg = cfg * variables_[parents[i]].cardinality() + parent_states[i];
  }
  return cfg;
}

std::vector<LocalSetId> CredalNetwork::local_sets() const {
  std::vector<LocalSetId> ids;
  for (std::size_t v = 0; v < tables_.size(); ++v) {
    for (std::size_t c = 0; c < tables_[v].vertices.size(); ++c) ids.push_back({v, c});
  }
  return ids;
}

std::size_t CredalNetwork::local_set_count() const {
  std::size_t n = 0;
  for (const auto& t : tables_) n += t.vertices.size();
  return n;
}

std::vector<std::size_t> CredalNetwork::topological_order() const {
  const std::size_t n = size();
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t v = 0; v < n; ++v) indegree[v] = tables_[v].parents.size();
  std::vector<std::size_t> order;
  order.reserve(n);
  // Smallest ready index first keeps the order deterministic.
  std::set<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.insert(v);
  }
  while (!ready.empty()) {
    const std::size_t v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (std::size_t c : children_[v]) {
      if (--indegree[c] == 0) ready.insert(c);
    }
  }
  return order;
}

VertexSelection::VertexSelection(const CredalNetwork& net) : choice_(net.size()) {
  for (std::size_t v = 0; v < net.size(); ++v) {
    choice_[v].assign(net.table(v).vertices.size(), kUnset);
  }
}

std::size_t VertexSelection::fixed_count() const {
  std::size_t n = 0;
  for (const auto& row : choice_) {
    n += static_cast<std::size_t>(
        std::count_if(row.begin(), row.end(), [](std::int32_t c) { return c != kUnset; }));
  }
  return n;
}

bool VertexSelection::is_total() const {
  for (const auto& row : choice_) {
    for (std::int32_t c : row) {
      if (c == kUnset) return false;
    }
  }
  return true;
}

std::span<const Distribution> candidate_vertices(const CredalNetwork& net,
                                                 const VertexSelection* selection,
                                                 LocalSetId id) {
  const auto& list = net.vertices(id);
  if (selection != nullptr && selection->is_set(id)) {
    return std::span<const Distribution>(list).subspan(selection->get(id), 1);
  }
  return list;
}

namespace {

ValidationReport fail(ValidationIssue issue, std::string message) {
  return ValidationReport{issue, std::move(message)};
}

bool has_directed_cycle(const CredalNetwork& net) {
  return net.topological_order().size() != net.size();
}

// Union-find over the undirected skeleton; any edge joining an already
// connected pair closes an undirected cycle.
bool has_undirected_cycle(const CredalNetwork& net) {
  std::vector<std::size_t> root(net.size());
  std::iota(root.begin(), root.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (std::size_t v = 0; v < net.size(); ++v) {
    for (std::size_t p : net.parents(v)) {
      const std::size_t a = find(v), b = find(p);
      if (a == b) return true;
      root[a] = b;
    }
  }
  return false;
}

}  // namespace

ValidationReport validate(const CredalNetwork& net) {
  const std::size_t n = net.size();
  if (net.tables().size() != n) {
    return fail(ValidationIssue::kTableMismatch,
                "expected one table per variable (" + std::to_string(n) + "), got " +
                    std::to_string(net.tables().size()));
  }
  std::set<std::string> names;
  for (const auto& var : net.variables()) {
    if (var.categories.empty()) {
      return fail(ValidationIssue::kEmptyCategories,
                  "variable '" + var.name + "' has no categories");
    }
    if (!names.insert(var.name).second) {
      return fail(ValidationIssue::kDuplicateName, "duplicate variable name '" + var.name + "'");
    }
    std::set<std::string> labels(var.categories.begin(), var.categories.end());
    if (labels.size() != var.categories.size()) {
      return fail(ValidationIssue::kDuplicateCategory,
                  "variable '" + var.name + "' has duplicate category labels");
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    const auto& table = net.table(v);
    if (table.child != v) {
      return fail(ValidationIssue::kTableMismatch,
                  "table " + std::to_string(v) + " is attached to the wrong variable");
    }
    std::set<std::size_t> seen;
    for (std::size_t p : table.parents) {
      if (p >= n || p == v) {
        return fail(ValidationIssue::kUnknownParent,
                    "variable '" + net.variable(v).name + "' has an invalid parent");
      }
      if (!seen.insert(p).second) {
        return fail(ValidationIssue::kNotPolytree,
                    "variable '" + net.variable(v).name + "' lists parent '" +
                        net.variable(p).name + "' twice");
      }
    }
  }
  if (has_directed_cycle(net)) {
    return fail(ValidationIssue::kCycle, "graph contains a directed cycle");
  }
  if (has_undirected_cycle(net)) {
    return fail(ValidationIssue::kNotPolytree,
                "underlying undirected graph contains a cycle (not a polytree)");
  }
  for (std::size_t v = 0; v < n; ++v) {
    const auto& table = net.table(v);
    const auto& name = net.variable(v).name;
    if (table.vertices.size() != net.config_count(v)) {
      return fail(ValidationIssue::kMissingConfiguration,
                  "variable '" + name + "' has " + std::to_string(table.vertices.size()) +
                      " parent configurations, expected " +
                      std::to_string(net.config_count(v)));
    }
    for (std::size_t c = 0; c < table.vertices.size(); ++c) {
      const auto& list = table.vertices[c];
      const std::string where =
          "variable '" + name + "', configuration " + std::to_string(c);
      if (list.empty()) {
        return fail(ValidationIssue::kEmptyVertexList, where + " has no vertices");
      }
      for (std::size_t r = 0; r < list.size(); ++r) {
        const auto& row = list[r];
        if (row.size() != net.cardinality(v)) {
          return fail(ValidationIssue::kDimensionMismatch,
                      where + ", row " + std::to_string(r) + " has " +
                          std::to_string(row.size()) + " entries, expected " +
                          std::to_string(net.cardinality(v)));
        }
        double sum = 0.0;
        for (double p : row) {
          if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
            return fail(ValidationIssue::kNotNormalized,
                        where + ", row " + std::to_string(r) + " has an entry outside [0, 1]");
          }
          sum += p;
        }
        if (std::abs(sum - 1.0) > kNormalizationTolerance) {
          return fail(ValidationIssue::kNotNormalized,
                      where + ", row " + std::to_string(r) + " sums to " +
                          std::to_string(sum));
        }
      }
    }
  }
  return {};
}

BigCount count_potential_vertices(const CredalNetwork& net) {
  BigCount total = 1;
  for (const auto& table : net.tables()) {
    for (const auto& list : table.vertices) total *= list.size();
  }
  return total;
}

IntervalPotential interval_projection(std::span<const Distribution> vertices) {
  if (vertices.empty()) throw InvalidInput("interval_projection: empty vertex list");
  const std::size_t dim = vertices.front().size();
  IntervalPotential out(dim);
  for (std::size_t j = 0; j < dim; ++j) out[j] = {vertices.front()[j], vertices.front()[j]};
  for (const auto& v : vertices.subspan(1)) {
    if (v.size() != dim) throw InvalidInput("interval_projection: mismatched vertex lengths");
    for (std::size_t j = 0; j < dim; ++j) {
      out[j].lower = std::min(out[j].lower, v[j]);
      out[j].upper = std::max(out[j].upper, v[j]);
    }
  }
  return out;
}

CredalNetwork restrict(const CredalNetwork& net, const VertexSelection& selection) {
  auto tables = net.tables();
  for (std::size_t v = 0; v < tables.size(); ++v) {
    for (std::size_t c = 0; c < tables[v].vertices.size(); ++c) {
      const LocalSetId id{v, c};
      if (!selection.is_set(id)) continue;
      const std::size_t k = selection.get(id);
      auto& list = tables[v].vertices[c];
      if (k >= list.size()) {
        throw InvalidInput("restrict: vertex index " + std::to_string(k) +
                           " out of range for variable '" + net.variable(v).name +
                           "', configuration " + std::to_string(c));
      }
      Distribution chosen = list[k];
      list.assign(1, std::move(chosen));
    }
  }
  return CredalNetwork(net.variables(), std::move(tables));
}

std::pair<double, double> expectation_bounds(std::span<const Distribution> vertices,
                                             std::span<const double> f) {
  if (vertices.empty()) throw InvalidInput("expectation_bounds: empty vertex list");
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& v : vertices) {
    if (v.size() != f.size()) {
      throw InvalidInput("expectation_bounds: function has " + std::to_string(f.size()) +
                         " values, distribution has " + std::to_string(v.size()));
    }
    double e = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) e += f[j] * v[j];
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return {lo, hi};
}

void check_query(const CredalNetwork& net, std::size_t query, const Evidence& evidence) {
  if (query >= net.size()) throw InvalidInput("query variable index out of range");
  for (const auto& [v, c] : evidence) {
    if (v >= net.size()) throw InvalidInput("evidence variable index out of range");
    if (c >= net.cardinality(v)) {
      throw InvalidInput("evidence category out of range for '" + net.variable(v).name + "'");
    }
    if (v == query) {
      throw InvalidInput("query variable '" + net.variable(v).name + "' is also observed");
    }
  }
}

std::vector<bool> requisite_variables(const CredalNetwork& net, std::size_t query,
                                      const Evidence& evidence) {
  std::vector<bool> keep(net.size(), false);
  std::vector<std::size_t> stack{query};
  for (const auto& [v, c] : evidence) stack.push_back(v);
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (keep[v]) continue;
    keep[v] = true;
    for (std::size_t p : net.parents(v)) stack.push_back(p);
  }
  return keep;
}

}  // namespace credal
