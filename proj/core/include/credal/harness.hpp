#pragma once

#include "credal/bnb.hpp"
#include "credal/model.hpp"
#include "credal/random.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace credal::harness {

// Inclusive integer range.
struct Range {
  std::size_t lo = 1;
  std::size_t hi = 1;
};

struct GeneratorConfig {
  std::size_t nodes = 10;
  Range categories{2, 4};
  Range vertices{2, 3};
  std::uint64_t seed = 0;
};

// Throws InvalidInput on empty ranges, zero nodes, fewer than one category
// or vertex.
void check_config(const GeneratorConfig& config);

// Uniform labeled tree (random Pruefer sequence) with every edge oriented by
// a fair coin; category counts and vertex counts uniform in their ranges and
// every vertex uniform on the simplex. Variables are X0, X1, ... with
// categories s0, s1, ...
CredalNetwork random_polytree(const GeneratorConfig& config, Rng& rng);
// Same, seeded from config.seed.
CredalNetwork random_polytree(const GeneratorConfig& config);

// Fixed 10-node regression skeleton with random tables:
// A, B -> C; C, D -> E; E, F -> H; E -> L; H -> G; L -> K.
// Queries on E touch 1 + 1 + c^2 + 1 + c^2 local sets for c categories.
CredalNetwork ten_node_skeleton(Range categories, Range vertices, Rng& rng);

// Product of the vertex-list sizes of the local sets that can affect
// p(query | evidence).
BigCount requisite_potential(const CredalNetwork& net, std::size_t query,
                             const Evidence& evidence);

struct RelativeError {
  double value = 0.0;
  // False when the exact value is 0 but the approximation is not.
  bool defined = true;
};

// |approx - exact| / exact; 0 when both are 0.
RelativeError relative_error(double approx, double exact);

enum class Algorithm { kAR, kARPlus, kLocalSearch, kBnb, kExhaustive };

// "ar", "ar-plus", "local-search", "bnb", "exhaustive".
std::string_view algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct QuerySpec {
  // Drawn uniformly per instance when absent.
  std::optional<std::string> variable;
  // Every category when absent.
  std::optional<std::size_t> category;
  // Number of randomly observed non-query variables.
  std::size_t evidence_count = 0;
};

enum class Skeleton { kRandom, kTenNode };

struct EnsembleConfig {
  GeneratorConfig generator;
  Skeleton skeleton = Skeleton::kRandom;
  std::size_t instances = 30;
  // References come from the exhaustive oracle up to this many requisite
  // combinations, from bnb with epsilon 0 beyond.
  std::uint64_t exhaustive_cap = std::uint64_t{1} << 20;
  bool compute_reference = true;
  // Bounds used by bnb when it computes references. A/R bounds expand more
  // nodes but cost far less per node once messages have many vertices.
  bnb::BoundAlgorithm reference_bounds = bnb::BoundAlgorithm::kAR;
  // Per bnb reference solve; instances that hit it get no reference and
  // drop out of the error means (0 = no limit).
  std::uint64_t reference_node_limit = 100000;
  bnb::SolveOptions bnb;
  std::size_t restarts = 8;
  unsigned threads = 1;
};

struct AlgorithmRow {
  Algorithm algorithm = Algorithm::kAR;
  // One interval per queried category.
  IntervalPotential intervals;
  // Mean over queried categories of the relative error of the upper bound.
  double relative_error = 0.0;
  std::size_t undefined_errors = 0;
  double interval_length = 0.0;
  // bnb only: nodes over every queried category and both directions.
  std::uint64_t nodes_expanded = 0;
  double wall_time_s = 0.0;
  bool failed = false;
  std::string error;
};

struct InstanceRow {
  std::size_t instance = 0;
  std::string query;
  std::vector<std::size_t> categories;
  // Variable name -> category label.
  std::vector<std::pair<std::string, std::string>> evidence;
  BigCount potential_vertices = 0;
  BigCount requisite_vertices = 0;
  IntervalPotential reference;
  // "exhaustive", "bnb", "unavailable" (node limit hit) or "" when skipped.
  std::string reference_method;
  std::vector<AlgorithmRow> results;
  // Mean over categories of outer upper minus local-search upper, for A/R
  // (b1) and A/R+ (b2); NaN when an ingredient is missing.
  double b1 = 0.0;
  double b2 = 0.0;
  // inner <= reference <= outer failures at 1e-9.
  std::size_t sandwich_violations = 0;
  bool failed = false;
  std::string error;
};

struct AggregateRow {
  Algorithm algorithm = Algorithm::kAR;
  std::size_t instances = 0;
  std::size_t failed = 0;
  double mean_relative_error = 0.0;
  std::size_t undefined_errors = 0;
  double mean_interval_length = 0.0;
  double mean_nodes_expanded = 0.0;
  double median_nodes_expanded = 0.0;
  double mean_wall_time_s = 0.0;
};

struct BenchmarkReport {
  std::vector<InstanceRow> instances;
  std::vector<AggregateRow> aggregates;
  double mean_b1 = 0.0;
  double mean_b2 = 0.0;
  std::size_t sandwich_violations = 0;
  std::size_t references_unavailable = 0;
};

// Generates config.instances networks (instance i from its own stream of
// `seed`), answers every query with every algorithm and aggregates the
// statistics. Per-instance failures become failed rows.
BenchmarkReport run_ensemble(const EnsembleConfig& config, const std::vector<Algorithm>& algorithms,
                             const std::vector<QuerySpec>& queries, std::uint64_t seed);

}  // namespace credal::harness
