#include "credal/harness.hpp"

#include "credal/ar.hpp"
#include "credal/ar_plus.hpp"
#include "credal/error.hpp"
#include "credal/exact.hpp"
#include "credal/geometry.hpp"
#include "credal/local_search.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace credal::harness {
namespace {

constexpr double kSandwichSlack = 1e-9;

std::size_t draw(Range r, Rng& rng) { return static_cast<std::size_t>(rng.between(r.lo, r.hi)); }

std::string lowercase(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

// Builds a network from parent lists, drawing cardinalities and tables.
CredalNetwork assemble(const std::vector<std::string>& names,
                       const std::vector<std::vector<std::size_t>>& parents, Range categories,
                       Range vertices, Rng& rng, bool prefixed_labels) {
  const std::size_t n = names.size();
  std::vector<Variable> vars(n);
  for (std::size_t i = 0; i < n; ++i) {
    vars[i].name = names[i];
    const std::size_t k = draw(categories, rng);
    const std::string stem = prefixed_labels ? lowercase(names[i]) : "s";
    for (std::size_t c = 0; c < k; ++c) vars[i].categories.push_back(stem + std::to_string(c));
  }
  std::vector<ConditionalCredalTable> tables(n);
  for (std::size_t i = 0; i < n; ++i) {
    tables[i].child = i;
    tables[i].parents = parents[i];
    std::size_t configs = 1;
    for (auto p : parents[i]) configs *= vars[p].cardinality();
    tables[i].vertices.resize(configs);
    for (auto& list : tables[i].vertices) {
      const std::size_t k = draw(vertices, rng);
      for (std::size_t v = 0; v < k; ++v) {
        list.push_back(geometry::sample_simplex(vars[i].cardinality(), rng));
      }
    }
  }
  return CredalNetwork(std::move(vars), std::move(tables));
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

class InstanceRunner {
 public:
  InstanceRunner(const EnsembleConfig& config, const std::vector<Algorithm>& algorithms)
      : config_(config), algorithms_(algorithms) {}

  std::vector<InstanceRow> run(std::size_t instance, const std::vector<QuerySpec>& queries,
                               std::uint64_t seed) const {
    Rng rng = Rng::for_stream(seed, instance);
    std::vector<InstanceRow> rows;
    CredalNetwork net;
    try {
      net = config_.skeleton == Skeleton::kTenNode
                ? ten_node_skeleton(config_.generator.categories, config_.generator.vertices, rng)
                : random_polytree(config_.generator, rng);
    } catch (const Error& e) {
      InstanceRow row;
      row.instance = instance;
      row.failed = true;
      row.error = e.what();
      return {row};
    }
    for (const auto& q : queries) rows.push_back(run_query(instance, net, q, rng));
    return rows;
  }

 private:
  InstanceRow run_query(std::size_t instance, const CredalNetwork& net, const QuerySpec& spec,
                        Rng& rng) const {
    InstanceRow row;
    row.instance = instance;
    try {
      const std::size_t query =
          spec.variable ? net.index_of(*spec.variable) : static_cast<std::size_t>(rng.below(net.size()));
      row.query = net.variable(query).name;
      if (spec.category) {
        if (*spec.category >= net.cardinality(query)) throw InvalidInput("query category out of range");
        row.categories = {*spec.category};
      } else {
        row.categories.resize(net.cardinality(query));
        std::iota(row.categories.begin(), row.categories.end(), std::size_t{0});
      }
      Evidence ev;
      std::vector<std::size_t> pool;
      for (std::size_t v = 0; v < net.size(); ++v) {
        if (v != query) pool.push_back(v);
      }
      for (std::size_t k = 0; k < spec.evidence_count && !pool.empty(); ++k) {
        const std::size_t pick = static_cast<std::size_t>(rng.below(pool.size()));
        const std::size_t v = pool[pick];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
        ev[v] = static_cast<std::size_t>(rng.below(net.cardinality(v)));
      }
      for (const auto& [v, c] : ev) {
        row.evidence.emplace_back(net.variable(v).name, net.variable(v).categories[c]);
      }
      row.potential_vertices = count_potential_vertices(net);
      row.requisite_vertices = requisite_potential(net, query, ev);

      const std::uint64_t run_seed = rng.next();
      if (config_.compute_reference) reference(net, query, ev, row, run_seed);
      for (Algorithm a : algorithms_) row.results.push_back(run_algorithm(a, net, query, ev, row, run_seed));
      finish(row);
    } catch (const Error& e) {
      row.failed = true;
      row.error = e.what();
    }
    return row;
  }

  void reference(const CredalNetwork& net, std::size_t query, const Evidence& ev,
                 InstanceRow& row, std::uint64_t seed) const {
    if (row.requisite_vertices <= config_.exhaustive_cap) {
      exact::ExhaustiveOptions opts;
      opts.cap = config_.exhaustive_cap;
      const auto r = exact::exhaustive_bounds_all(net, query, ev, opts);
      for (auto c : row.categories) row.reference.push_back(r.bounds[c]);
      row.reference_method = "exhaustive";
    } else {
      Rng rng(seed);
      bnb::SolveOptions opts = config_.bnb;
      opts.epsilon = 0.0;
      opts.node_limit = 0;
      opts.bounds = config_.reference_bounds;
      opts.node_limit = config_.reference_node_limit;
      for (auto c : row.categories) {
        const auto r = bnb::solve_interval(net, query, c, ev, opts, rng);
        if (r.lower.mode != bnb::Mode::kExact || r.upper.mode != bnb::Mode::kExact) {
          row.reference.clear();
          row.reference_method = "unavailable";
          return;
        }
        row.reference.push_back(r.interval);
      }
      row.reference_method = "bnb";
    }
  }

  AlgorithmRow run_algorithm(Algorithm a, const CredalNetwork& net, std::size_t query,
                             const Evidence& ev, const InstanceRow& row, std::uint64_t seed) const {
    AlgorithmRow out;
    out.algorithm = a;
    const auto start = std::chrono::steady_clock::now();
    try {
      Rng rng(seed);
      switch (a) {
        case Algorithm::kAR: {
          const auto b = ar::propagate(net, query, ev);
          for (auto c : row.categories) out.intervals.push_back(b[c]);
          break;
        }
        case Algorithm::kARPlus: {
          const auto b = ar_plus::propagate_plus(net, query, ev, config_.bnb.budget);
          for (auto c : row.categories) out.intervals.push_back(b[c]);
          break;
        }
        case Algorithm::kLocalSearch: {
          local_search::Options opts;
          opts.threads = 1;
          for (auto c : row.categories) {
            const auto lo = local_search::multistart(net, query, c, ev, Direction::Minimize,
                                                     config_.restarts, rng, opts);
            const auto hi = local_search::multistart(net, query, c, ev, Direction::Maximize,
                                                     config_.restarts, rng, opts);
            out.intervals.push_back({lo.value, hi.value});
          }
          break;
        }
        case Algorithm::kBnb: {
          bnb::SolveOptions opts = config_.bnb;
          opts.restarts = config_.restarts;
          opts.threads = 1;
          for (auto c : row.categories) {
            const auto r = bnb::solve_interval(net, query, c, ev, opts, rng);
            out.intervals.push_back(r.interval);
            out.nodes_expanded += r.lower.stats.nodes_expanded + r.upper.stats.nodes_expanded;
          }
          break;
        }
        case Algorithm::kExhaustive: {
          exact::ExhaustiveOptions opts;
          opts.cap = config_.exhaustive_cap;
          const auto r = exact::exhaustive_bounds_all(net, query, ev, opts);
          for (auto c : row.categories) out.intervals.push_back(r.bounds[c]);
          break;
        }
      }
    } catch (const Error& e) {
      out.failed = true;
      out.error = e.what();
    }
    out.wall_time_s = seconds_since(start);
    if (!out.failed) {
      double len = 0.0, err = 0.0;
      std::size_t defined = 0;
      for (std::size_t k = 0; k < out.intervals.size(); ++k) {
        len += out.intervals[k].width();
        if (row.reference.empty()) continue;
        const auto e = relative_error(out.intervals[k].upper, row.reference[k].upper);
        if (e.defined) {
          err += e.value;
          ++defined;
        } else {
          ++out.undefined_errors;
        }
      }
      out.interval_length = out.intervals.empty() ? 0.0 : len / static_cast<double>(out.intervals.size());
      out.relative_error = defined ? err / static_cast<double>(defined) : 0.0;
    }
    return out;
  }

  static const AlgorithmRow* find(const InstanceRow& row, Algorithm a) {
    for (const auto& r : row.results) {
      if (r.algorithm == a && !r.failed) return &r;
    }
    return nullptr;
  }

  static void finish(InstanceRow& row) {
    const auto* ar_row = find(row, Algorithm::kAR);
    const auto* plus_row = find(row, Algorithm::kARPlus);
    const auto* ls_row = find(row, Algorithm::kLocalSearch);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.b1 = row.b2 = nan;
    auto gap = [&](const AlgorithmRow* outer) {
      double s = 0.0;
      for (std::size_t k = 0; k < row.categories.size(); ++k) {
        s += outer->intervals[k].upper - ls_row->intervals[k].upper;
      }
      return s / static_cast<double>(row.categories.size());
    };
    if (ls_row && ar_row) row.b1 = gap(ar_row);
    if (ls_row && plus_row) row.b2 = gap(plus_row);
    if (row.reference.empty()) return;
    for (std::size_t k = 0; k < row.categories.size(); ++k) {
      const auto& ref = row.reference[k];
      for (const auto* outer : {ar_row, plus_row}) {
        if (outer && (outer->intervals[k].lower > ref.lower + kSandwichSlack ||
                      outer->intervals[k].upper < ref.upper - kSandwichSlack)) {
          ++row.sandwich_violations;
        }
      }
      if (ls_row && (ls_row->intervals[k].lower < ref.lower - kSandwichSlack ||
                     ls_row->intervals[k].upper > ref.upper + kSandwichSlack)) {
        ++row.sandwich_violations;
      }
    }
  }

  const EnsembleConfig& config_;
  const std::vector<Algorithm>& algorithms_;
};

}  // namespace

void check_config(const GeneratorConfig& config) {
  if (config.nodes == 0) throw InvalidInput("node count must be at least 1");
  if (config.categories.lo < 1 || config.categories.lo > config.categories.hi) {
    throw InvalidInput("category range must satisfy 1 <= lo <= hi");
  }
  if (config.vertices.lo < 1 || config.vertices.lo > config.vertices.hi) {
    throw InvalidInput("vertex range must satisfy 1 <= lo <= hi");
  }
}

CredalNetwork random_polytree(const GeneratorConfig& config, Rng& rng) {
  check_config(config);
  const std::size_t n = config.nodes;
  // Pruefer decoding: repeatedly join the smallest current leaf to the next
  // sequence entry.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  if (n == 2) edges.emplace_back(0, 1);
  if (n > 2) {
    std::vector<std::size_t> seq(n - 2);
    for (auto& s : seq) s = static_cast<std::size_t>(rng.below(n));
    std::vector<std::size_t> degree(n, 1);
    for (auto s : seq) ++degree[s];
    for (auto s : seq) {
      std::size_t leaf = 0;
      while (degree[leaf] != 1) ++leaf;
      edges.emplace_back(leaf, s);
      --degree[leaf];
      --degree[s];
    }
    std::size_t u = n, w = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (degree[i] == 1) (u == n ? u : w) = i;
    }
    edges.emplace_back(u, w);
  }
  std::vector<std::vector<std::size_t>> parents(n);
  for (const auto& [a, b] : edges) {
    if (rng.coin()) parents[b].push_back(a);
    else parents[a].push_back(b);
  }
  for (auto& p : parents) std::sort(p.begin(), p.end());
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = "X" + std::to_string(i);
  return assemble(names, parents, config.categories, config.vertices, rng, false);
}

CredalNetwork random_polytree(const GeneratorConfig& config) {
  Rng rng(config.seed);
  return random_polytree(config, rng);
}

CredalNetwork ten_node_skeleton(Range categories, Range vertices, Rng& rng) {
  check_config(GeneratorConfig{10, categories, vertices, 0});
  const std::vector<std::string> names{"A", "B", "C", "D", "E", "F", "H", "L", "G", "K"};
  const std::vector<std::vector<std::size_t>> parents{
      {}, {}, {0, 1}, {}, {2, 3}, {}, {4, 5}, {4}, {6}, {7}};
  return assemble(names, parents, categories, vertices, rng, true);
}

BigCount requisite_potential(const CredalNetwork& net, std::size_t query,
                             const Evidence& evidence) {
  const auto req = requisite_variables(net, query, evidence);
  BigCount out = 1;
  for (const auto& id : net.local_sets()) {
    if (req[id.variable]) out *= net.vertices(id).size();
  }
  return out;
}

RelativeError relative_error(double approx, double exact) {
  if (exact < 0.0) throw InvalidInput("relative_error: exact value must be nonnegative");
  if (exact == 0.0) {
    if (approx == 0.0) return {0.0, true};
    return {std::numeric_limits<double>::infinity(), false};
  }
  return {std::abs(approx - exact) / exact, true};
}

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kAR: return "ar";
    case Algorithm::kARPlus: return "ar-plus";
    case Algorithm::kLocalSearch: return "local-search";
    case Algorithm::kBnb: return "bnb";
    case Algorithm::kExhaustive: return "exhaustive";
  }
  return "";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kAR, Algorithm::kARPlus, Algorithm::kLocalSearch, Algorithm::kBnb,
                      Algorithm::kExhaustive}) {
    if (algorithm_name(a) == name) return a;
  }
  return std::nullopt;
}

BenchmarkReport run_ensemble(const EnsembleConfig& config, const std::vector<Algorithm>& algorithms,
                             const std::vector<QuerySpec>& queries, std::uint64_t seed) {
  check_config(config.generator);
  if (algorithms.empty()) throw InvalidInput("at least one algorithm is required");
  if (queries.empty()) throw InvalidInput("at least one query is required");

  const InstanceRunner runner(config, algorithms);
  std::vector<std::vector<InstanceRow>> per_instance(config.instances);
  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads,
                                                           static_cast<unsigned>(config.instances)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < config.instances; ++i) per_instance[i] = runner.run(i, queries, seed);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < config.instances; i += threads) {
          per_instance[i] = runner.run(i, queries, seed);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  BenchmarkReport report;
  for (auto& rows : per_instance) {
    for (auto& r : rows) report.instances.push_back(std::move(r));
  }

  double b1 = 0.0, b2 = 0.0;
  std::size_t nb1 = 0, nb2 = 0;
  for (const auto& row : report.instances) {
    report.sandwich_violations += row.sandwich_violations;
    if (row.reference_method == "unavailable") ++report.references_unavailable;
    if (!std::isnan(row.b1) && !row.failed) {
      b1 += row.b1;
      ++nb1;
    }
    if (!std::isnan(row.b2) && !row.failed) {
      b2 += row.b2;
      ++nb2;
    }
  }
  report.mean_b1 = nb1 ? b1 / static_cast<double>(nb1) : std::numeric_limits<double>::quiet_NaN();
  report.mean_b2 = nb2 ? b2 / static_cast<double>(nb2) : std::numeric_limits<double>::quiet_NaN();

  for (Algorithm a : algorithms) {
    AggregateRow agg;
    agg.algorithm = a;
    double err = 0.0, len = 0.0, nodes = 0.0, time = 0.0;
    std::size_t with_reference = 0;
    std::vector<double> node_counts;
    for (const auto& row : report.instances) {
      const AlgorithmRow* r = nullptr;
      for (const auto& x : row.results) {
        if (x.algorithm == a) r = &x;
      }
      if (row.failed || r == nullptr || r->failed) {
        ++agg.failed;
        continue;
      }
      ++agg.instances;
      len += r->interval_length;
      time += r->wall_time_s;
      nodes += static_cast<double>(r->nodes_expanded);
      node_counts.push_back(static_cast<double>(r->nodes_expanded));
      agg.undefined_errors += r->undefined_errors;
      if (!row.reference.empty()) {
        err += r->relative_error;
        ++with_reference;
      }
    }
    if (agg.instances > 0) {
      const double n = static_cast<double>(agg.instances);
      agg.mean_interval_length = len / n;
      agg.mean_wall_time_s = time / n;
      agg.mean_nodes_expanded = nodes / n;
      agg.median_nodes_expanded = median(node_counts);
    }
    agg.mean_relative_error = with_reference ? err / static_cast<double>(with_reference) : 0.0;
    report.aggregates.push_back(agg);
  }
  return report;
}

}  // namespace credal::harness
