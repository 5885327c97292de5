#include "support/networks.hpp"

#include <credal/geometry.hpp>

#include <cctype>

namespace credal::testing {

NetworkBuilder& NetworkBuilder::add(const std::string& name, std::size_t categories,
                                    std::vector<std::string> parents,
                                    std::vector<std::vector<Distribution>> vertices) {
  pending_.push_back({name, categories, std::move(parents), std::move(vertices)});
  return *this;
}

CredalNetwork NetworkBuilder::build() const {
  std::vector<Variable> vars;
  for (const auto& p : pending_) {
    Variable v{p.name, {}};
    std::string stem;
    for (char ch : p.name) stem += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    for (std::size_t k = 0; k < p.categories; ++k) v.categories.push_back(stem + std::to_string(k));
    vars.push_back(std::move(v));
  }
  std::vector<ConditionalCredalTable> tables;
  for (std::size_t i = 0; i < pending_.size(); ++i) {
    ConditionalCredalTable t;
    t.child = i;
    for (const auto& pname : pending_[i].parents) {
      for (std::size_t j = 0; j < pending_.size(); ++j) {
        if (pending_[j].name == pname) t.parents.push_back(j);
      }
    }
    t.vertices = pending_[i].vertices;
    tables.push_back(std::move(t));
  }
  return CredalNetwork(std::move(vars), std::move(tables));
}

CredalNetwork single_node(std::vector<Distribution> vertices) {
  const std::size_t k = vertices.front().size();
  return NetworkBuilder().add("X", k, {}, {std::move(vertices)}).build();
}

CredalNetwork chain(std::vector<Distribution> px, std::vector<Distribution> py_x0,
                    std::vector<Distribution> py_x1) {
  return NetworkBuilder()
      .add("X", 2, {}, {std::move(px)})
      .add("Y", 2, {"X"}, {std::move(py_x0), std::move(py_x1)})
      .build();
}

CredalNetwork precise_collider() {
  auto row = [](double p) { return std::vector<Distribution>{{p, 1.0 - p}}; };
  return NetworkBuilder()
      .add("X", 2, {}, {{{0.6, 0.4}}})
      .add("Z", 2, {}, {{{0.3, 0.7}}})
      .add("Y", 2, {"X", "Z"}, {row(0.9), row(0.5), row(0.4), row(0.1)})
      .build();
}

CredalNetwork collider(std::size_t categories, std::size_t vertices, Rng& rng) {
  auto draw = [&] {
    std::vector<Distribution> list;
    for (std::size_t k = 0; k < vertices; ++k) {
      list.push_back(geometry::sample_simplex(categories, rng));
    }
    return list;
  };
  std::vector<std::vector<Distribution>> y;
  for (std::size_t c = 0; c < categories * categories; ++c) y.push_back(draw());
  return NetworkBuilder()
      .add("X", categories, {}, {draw()})
      .add("Y", categories, {"X", "Z"}, std::move(y))
      .add("Z", categories, {}, {draw()})
      .build();
}

CredalNetwork first_vertices(const CredalNetwork& net) {
  auto tables = net.tables();
  for (auto& t : tables) {
    for (auto& list : t.vertices) list.resize(1);
  }
  return CredalNetwork(net.variables(), std::move(tables));
}

CredalNetwork random_small_polytree(std::size_t n, std::size_t max_card, std::size_t max_verts,
                                    Rng& rng) {
  std::vector<std::size_t> card(n);
  std::vector<std::vector<std::size_t>> parents(n);
  for (auto& c : card) c = 2 + rng.below(max_card - 1);
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t j = rng.below(i);
    if (rng.coin()) parents[i].push_back(j);
    else parents[j].push_back(i);
  }
  NetworkBuilder b;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t configs = 1;
    std::vector<std::string> names;
    for (auto p : parents[i]) {
      configs *= card[p];
      names.push_back("V" + std::to_string(p));
    }
    std::vector<std::vector<Distribution>> table(configs);
    for (auto& set : table) {
      const std::size_t k = 1 + rng.below(max_verts);
      for (std::size_t v = 0; v < k; ++v) set.push_back(geometry::sample_simplex(card[i], rng));
    }
    b.add("V" + std::to_string(i), card[i], names, table);
  }
  return b.build();
}

Evidence random_evidence(const CredalNetwork& net, std::size_t query, Rng& rng) {
  Evidence ev;
  for (std::size_t v = 0; v < net.size(); ++v) {
    if (v != query && rng.below(4) == 0) ev[v] = rng.below(net.cardinality(v));
  }
  return ev;
}

}  // namespace credal::testing
