#include "credal/local_search.hpp"

#include "credal/error.hpp"
#include "credal/exact.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace credal::local_search {
namespace {

constexpr double kImprovement = 1e-12;

bool better(double a, double b, Direction d) {
  return d == Direction::Maximize ? a > b : a < b;
}

class Searcher {
 public:
  Searcher(const CredalNetwork& net, std::size_t query, std::size_t category,
           const Evidence& evidence, Direction direction)
      : net_(net), category_(category), direction_(direction), eval_(net, query, evidence) {
    check_query(net, query, evidence);
    if (category >= net.cardinality(query)) throw InvalidInput("query category out of range");
  }

  // NaN when p(evidence) = 0.
  double value(const VertexSelection& sel) const {
    const auto& joint = eval_.joint(&sel);
    double pe = 0.0;
    for (double p : joint) pe += p;
    if (!(pe > 0.0)) return std::nan("");
    return joint[category_] / pe;
  }

  bool requisite(LocalSetId id) const { return eval_.requisite()[id.variable]; }

  std::pair<std::size_t, double> best_vertex(VertexSelection& sel, LocalSetId id) const {
    const std::size_t original = sel.is_set(id) ? sel.get(id) : 0;
    std::size_t best = 0;
    double best_value = std::nan("");
    const std::size_t count = net_.vertices(id).size();
    for (std::size_t k = 0; k < count; ++k) {
      sel.set(id, k);
      const double v = value(sel);
      if (std::isnan(v)) continue;
      if (std::isnan(best_value) || better(v, best_value, direction_)) {
        best = k;
        best_value = v;
      }
    }
    sel.set(id, original);
    return {best, best_value};
  }

  SearchState run(const NodeOrdering& ordering, VertexSelection sel,
                  const Options& options) const {
    SearchState state;
    state.direction = direction_;
    double current = value(sel);
    state.trajectory.push_back(current);
    while (true) {
      if (state.cycles >= options.cycle_cap) {
        state.hit_cycle_cap = true;
        break;
      }
      bool changed = false;
      for (const auto& id : ordering.sets) {
        if (!requisite(id) || net_.vertices(id).size() < 2) continue;
        const auto [k, v] = best_vertex(sel, id);
        if (std::isnan(v)) continue;
        const bool improves = std::isnan(current) ||
                              (direction_ == Direction::Maximize ? v > current + kImprovement
                                                                 : v < current - kImprovement);
        if (improves && k != sel.get(id)) {
          sel.set(id, k);
          current = v;
          ++state.moves;
          state.trajectory.push_back(current);
          changed = true;
        }
      }
      ++state.cycles;
      if (!changed) break;
    }
    if (std::isnan(current)) {
      throw ZeroProbabilityEvidence("local search found no selection with positive evidence");
    }
    state.value = value(sel);
    state.selection = std::move(sel);
    return state;
  }

 private:
  const CredalNetwork& net_;
  std::size_t category_;
  Direction direction_;
  exact::PointEvaluator eval_;
};

void check_total(const CredalNetwork& net, const VertexSelection& sel) {
  if (sel.choices().size() != net.size() || !sel.is_total()) {
    throw InvalidInput("initial selection must fix every local set");
  }
  for (const auto& id : net.local_sets()) {
    if (sel.get(id) >= net.vertices(id).size()) throw InvalidInput("vertex index out of range");
  }
}

}  // namespace

NodeOrdering NodeOrdering::topological(const CredalNetwork& net) {
  NodeOrdering out;
  for (std::size_t v : net.topological_order()) {
    for (std::size_t c = 0; c < net.config_count(v); ++c) out.sets.push_back({v, c});
  }
  return out;
}

VertexSelection random_selection(const CredalNetwork& net, Rng& rng) {
  VertexSelection sel(net);
  for (const auto& id : net.local_sets()) sel.set(id, rng.below(net.vertices(id).size()));
  return sel;
}

std::pair<std::size_t, double> best_vertex_for_set(const CredalNetwork& net,
                                                   const VertexSelection& selection,
                                                   LocalSetId set_id, std::size_t query,
                                                   std::size_t category, const Evidence& evidence,
                                                   Direction direction) {
  const Searcher s(net, query, category, evidence, direction);
  VertexSelection sel = selection;
  if (!sel.is_set(set_id)) sel.set(set_id, 0);
  const auto out = s.best_vertex(sel, set_id);
  if (std::isnan(out.second)) {
    throw ZeroProbabilityEvidence("every candidate vertex gives the evidence probability zero");
  }
  return out;
}

SearchState optimize(const CredalNetwork& net, std::size_t query, std::size_t category,
                     const Evidence& evidence, Direction direction, const NodeOrdering& ordering,
                     std::optional<VertexSelection> initial, Rng& rng, const Options& options) {
  const Searcher s(net, query, category, evidence, direction);
  VertexSelection start = initial ? std::move(*initial) : random_selection(net, rng);
  check_total(net, start);
  return s.run(ordering, std::move(start), options);
}

SearchState multistart(const CredalNetwork& net, std::size_t query, std::size_t category,
                       const Evidence& evidence, Direction direction, std::size_t restarts,
                       Rng& rng, const Options& options) {
  if (restarts == 0) throw InvalidInput("restarts must be at least 1");
  const Searcher s(net, query, category, evidence, direction);
  const NodeOrdering ordering = NodeOrdering::topological(net);
  std::vector<VertexSelection> starts;
  for (std::size_t k = 0; k < restarts; ++k) starts.push_back(random_selection(net, rng));

  // Evaluators hold scratch buffers, so each thread gets its own.
  std::vector<std::optional<SearchState>> results(restarts);
  auto work = [&](const Searcher& searcher, std::size_t k) {
    try {
      results[k] = searcher.run(ordering, starts[k], options);
    } catch (const ZeroProbabilityEvidence&) {
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads,
                                                           static_cast<unsigned>(restarts)));
  if (threads == 1) {
    for (std::size_t k = 0; k < restarts; ++k) work(s, k);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        const Searcher local(net, query, category, evidence, direction);
        for (std::size_t k = t; k < restarts; k += threads) work(local, k);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::optional<SearchState> best;
  for (auto& r : results) {
    if (r && (!best || better(r->value, best->value, direction))) best = std::move(r);
  }
  if (!best) throw ZeroProbabilityEvidence("no restart reached a selection with positive evidence");
  return std::move(*best);
}

}  // namespace credal::local_search
