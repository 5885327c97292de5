#pragma once

#include <credal/model.hpp>
#include <credal/random.hpp>

#include <string>
#include <vector>

namespace credal::testing {

// Small fluent builder for hand-written test networks. Category labels are
// "<lowercase name><index>".
class NetworkBuilder {
 public:
  NetworkBuilder& add(const std::string& name, std::size_t categories,
                      std::vector<std::string> parents,
                      std::vector<std::vector<Distribution>> vertices);
  CredalNetwork build() const;

 private:
  struct Pending {
    std::string name;
    std::size_t categories;
    std::vector<std::string> parents;
    std::vector<std::vector<Distribution>> vertices;
  };
  std::vector<Pending> pending_;
};

// One root with the given vertices.
CredalNetwork single_node(std::vector<Distribution> vertices);

// X -> Y, binary, with the given vertex lists.
CredalNetwork chain(std::vector<Distribution> px, std::vector<Distribution> py_x0,
                    std::vector<Distribution> py_x1);

// Precise collider X -> Y <- Z with p(X)=(0.6,0.4), p(Z)=(0.3,0.7) and
// p(y0|x,z) = {x0z0: 0.9, x0z1: 0.5, x1z0: 0.4, x1z1: 0.1}.
CredalNetwork precise_collider();

// X -> Y <- Z with `categories` states each and `vertices` random vertices per
// local set (every vertex drawn uniformly from the simplex).
CredalNetwork collider(std::size_t categories, std::size_t vertices, Rng& rng);

// Same skeleton as `net` with every vertex list cut to its first vertex.
CredalNetwork first_vertices(const CredalNetwork& net);

// Random polytree over n nodes: node i > 0 hangs off a random earlier node,
// with a coin deciding the edge direction. Cardinalities in [2, max_card],
// 1 to max_verts vertices per local set.
CredalNetwork random_small_polytree(std::size_t n, std::size_t max_card, std::size_t max_verts,
                                    Rng& rng);

// Each non-query variable observed with probability 1/4, uniform category.
Evidence random_evidence(const CredalNetwork& net, std::size_t query, Rng& rng);

}  // namespace credal::testing
