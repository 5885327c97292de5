#include "credal/bnb.hpp"

#include "credal/ar.hpp"
#include "credal/error.hpp"
#include "credal/exact.hpp"
#include "credal/local_search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>

namespace credal::bnb {
namespace {

constexpr double kPruneTolerance = 1e-12;
constexpr double kRefreshThreshold = 1e-6;

class Solver {
 public:
  Solver(const CredalNetwork& net, std::size_t query, std::size_t category,
         const Evidence& evidence, Direction direction, const SolveOptions& options, Rng& rng)
      : net_(net),
        query_(query),
        category_(category),
        evidence_(evidence),
        direction_(direction),
        options_(options),
        rng_(rng),
        eval_(net, query, evidence),
        order_(options.set_order.empty() ? default_set_order(net, query, evidence)
                                         : options.set_order) {
    check_order();
  }

  SolveResult run() {
    const auto start = std::chrono::steady_clock::now();
    const double worst = sign() * -std::numeric_limits<double>::infinity();
    incumbent_ = worst;

    SearchNode root{VertexSelection(net_), 0.0, 0};
    if (order_.empty()) {
      evaluate_leaf(root.selection);
      if (std::isnan(leaf_value_)) throw ZeroProbabilityEvidence("evidence has probability zero");
    } else {
      root.bound = bound(root.selection, sign() * std::numeric_limits<double>::infinity());
      ++stats_.nodes_expanded;
      seed_incumbent();
      stack_.push_back(std::move(root));
      record();
      search();
    }
    if (!witness_) throw ZeroProbabilityEvidence("no vertex selection gives the evidence positive probability");

    SolveResult out;
    out.value = incumbent_;
    out.witness = std::move(*witness_);
    out.outer = outer();
    out.mode = stack_.empty() ? Mode::kExact : Mode::kApproximate;
    if (out.mode == Mode::kExact) out.outer = out.value;
    stats_.final_gap = std::abs(out.outer - out.value);
    stats_.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.stats = stats_;
    out.trajectory = std::move(trajectory_);
    return out;
  }

 private:
  // +1 for Maximize, -1 for Minimize: every comparison is done on sign()*x.
  double sign() const { return direction_ == Direction::Maximize ? 1.0 : -1.0; }
  bool improves(double candidate, double reference, double tol) const {
    return sign() * candidate > sign() * reference + tol;
  }

  void check_order() const {
    std::set<LocalSetId> seen;
    for (const auto& id : order_) {
      if (id.variable >= net_.size() || id.config >= net_.config_count(id.variable)) {
        throw InvalidInput("set order refers to a local set that does not exist");
      }
      if (!seen.insert(id).second) throw InvalidInput("set order lists a local set twice");
    }
    for (const auto& id : eval_.requisite_sets()) {
      if (net_.vertices(id).size() > 1 && !seen.count(id)) {
        throw InvalidInput("set order misses a requisite local set");
      }
    }
  }

  // Outer bound for the query category under `sel`, clamped to the parent's.
  // Subproblems whose evidence is impossible get the worst value.
  double bound(const VertexSelection& sel, double parent) {
    IntervalPotential box;
    try {
      if (options_.bounds == BoundAlgorithm::kARPlus) {
        box = ar_plus::propagate_plus(net_, query_, evidence_, options_.budget, &sel);
      } else {
        box = ar::propagate(net_, query_, evidence_, &sel);
      }
    } catch (const ZeroProbabilityEvidence&) {
      return sign() * -std::numeric_limits<double>::infinity();
    }
    const double b = direction_ == Direction::Maximize ? box[category_].upper : box[category_].lower;
    return improves(b, parent, 0.0) ? parent : b;
  }

  VertexSelection completed(VertexSelection sel) const {
    for (const auto& id : net_.local_sets()) {
      if (!sel.is_set(id)) sel.set(id, 0);
    }
    return sel;
  }

  void offer(const VertexSelection& sel, double value) {
    if (std::isnan(value)) return;
    if (!witness_ || improves(value, incumbent_, 0.0)) {
      incumbent_ = value;
      witness_ = completed(sel);
    }
  }

  void seed_incumbent() {
    local_search::Options ls;
    ls.threads = options_.threads;
    try {
      const auto s = local_search::multistart(net_, query_, category_, evidence_, direction_,
                                              std::max<std::size_t>(1, options_.restarts), rng_, ls);
      offer(s.selection, s.value);
    } catch (const ZeroProbabilityEvidence&) {
    }
  }

  void evaluate_leaf(const VertexSelection& sel) {
    ++stats_.leaves_evaluated;
    ++stats_.nodes_expanded;
    const auto& joint = eval_.joint(&sel);
    double pe = 0.0;
    for (double p : joint) pe += p;
    leaf_value_ = pe > 0.0 ? joint[category_] / pe : std::nan("");
    if (std::isnan(leaf_value_)) return;
    const bool had = witness_.has_value();
    const double before = incumbent_;
    offer(sel, leaf_value_);
    if (options_.refresh && had && improves(leaf_value_, before, kRefreshThreshold)) {
      try {
        const auto s = local_search::optimize(net_, query_, category_, evidence_, direction_,
                                              local_search::NodeOrdering::topological(net_),
                                              completed(sel), rng_);
        offer(s.selection, s.value);
      } catch (const ZeroProbabilityEvidence&) {
      }
    }
  }

  double outer() const {
    double best = incumbent_;
    for (const auto& n : stack_) {
      if (improves(n.bound, best, 0.0)) best = n.bound;
    }
    return best;
  }

  void record() {
    const double o = outer();
    if (!trajectory_.empty() && trajectory_.back().incumbent == incumbent_ &&
        trajectory_.back().outer == o) {
      return;
    }
    trajectory_.push_back({stats_.nodes_expanded, incumbent_, o});
  }

  void search() {
    const std::size_t last = order_.size();
    while (!stack_.empty()) {
      if (options_.epsilon > 0.0 && witness_ &&
          sign() * (outer() - incumbent_) <= options_.epsilon) {
        return;
      }
      if (options_.node_limit > 0 && stats_.nodes_expanded >= options_.node_limit) {
        stats_.hit_node_limit = true;
        return;
      }
      SearchNode node = std::move(stack_.back());
      stack_.pop_back();
      if (witness_ && !improves(node.bound, incumbent_, kPruneTolerance)) {
        ++stats_.pruned;
        record();
        continue;
      }
      const LocalSetId id = order_[node.depth];
      const std::size_t count = net_.vertices(id).size();
      std::vector<SearchNode> children;
      for (std::size_t k = 0; k < count; ++k) {
        VertexSelection sel = node.selection;
        sel.set(id, k);
        if (node.depth + 1 == last) {
          evaluate_leaf(sel);
          continue;
        }
        const double b = bound(sel, node.bound);
        ++stats_.nodes_expanded;
        if (std::isinf(b) || (witness_ && !improves(b, incumbent_, kPruneTolerance))) {
          ++stats_.pruned;
          continue;
        }
        children.push_back({std::move(sel), b, node.depth + 1});
      }
      // Best bound on top of the stack; ties keep the lower vertex index.
      std::stable_sort(children.begin(), children.end(), [&](const SearchNode& a, const SearchNode& b) {
        return improves(a.bound, b.bound, 0.0);
      });
      for (auto it = children.rbegin(); it != children.rend(); ++it) stack_.push_back(std::move(*it));
      record();
    }
  }

  const CredalNetwork& net_;
  std::size_t query_;
  std::size_t category_;
  const Evidence& evidence_;
  Direction direction_;
  const SolveOptions& options_;
  Rng& rng_;
  exact::PointEvaluator eval_;
  std::vector<LocalSetId> order_;

  std::vector<SearchNode> stack_;
  double incumbent_ = 0.0;
  std::optional<VertexSelection> witness_;
  double leaf_value_ = 0.0;
  SolveStats stats_;
  std::vector<BoundRecord> trajectory_;
};

}  // namespace

std::vector<LocalSetId> default_set_order(const CredalNetwork& net, std::size_t query,
                                          const Evidence& evidence) {
  check_query(net, query, evidence);
  const auto req = requisite_variables(net, query, evidence);
  std::vector<LocalSetId> out;
  for (const auto& id : net.local_sets()) {
    if (req[id.variable] && net.vertices(id).size() > 1) out.push_back(id);
  }
  std::stable_sort(out.begin(), out.end(), [&](const LocalSetId& a, const LocalSetId& b) {
    const std::size_t na = net.vertices(a).size(), nb = net.vertices(b).size();
    if (na != nb) return na > nb;
    return net.config_count(a.variable) < net.config_count(b.variable);
  });
  return out;
}

SolveResult solve(const CredalNetwork& net, std::size_t query, std::size_t category,
                  const Evidence& evidence, Direction direction, const SolveOptions& options,
                  Rng& rng) {
  check_query(net, query, evidence);
  if (category >= net.cardinality(query)) throw InvalidInput("query category out of range");
  if (!(options.epsilon >= 0.0)) throw InvalidInput("epsilon must be nonnegative");
  if (options.budget.max_vertices == 0) throw InvalidInput("vertex budget must be positive");
  Solver solver(net, query, category, evidence, direction, options, rng);
  return solver.run();
}

IntervalResult solve_interval(const CredalNetwork& net, std::size_t query, std::size_t category,
                              const Evidence& evidence, const SolveOptions& options, Rng& rng) {
  IntervalResult out;
  out.lower = solve(net, query, category, evidence, Direction::Minimize, options, rng);
  out.upper = solve(net, query, category, evidence, Direction::Maximize, options, rng);
  out.interval = {out.lower.value, out.upper.value};
  return out;
}

}  // namespace credal::bnb
