#include "propagation.hpp"

#include "credal/ar.hpp"
#include "credal/ar_plus.hpp"
#include "credal/error.hpp"

#include <algorithm>
#include <optional>

namespace credal::detail {
namespace {

bool constant_point(const IntervalPotential& p) {
  for (const auto& iv : p) {
    if (iv.lower != iv.upper || iv.lower != p.front().lower) return false;
  }
  return !p.empty() && p.front().lower > 0.0;
}

class Engine {
 public:
  Engine(const CredalNetwork& net, std::size_t query, const Evidence& evidence,
         const VertexSelection* selection, Mode mode, std::size_t budget)
      : net_(net),
        evidence_(evidence),
        selection_(selection),
        mode_(mode),
        budget_{budget},
        requisite_(requisite_variables(net, query, evidence)) {}

  IntervalPotential belief(std::size_t q) {
    const IntervalPotential pi = pi_of(q);
    return combine(pi, lambda_factors(q, std::nullopt));
  }

  const EngineStats& stats() const { return stats_; }

 private:
  // Evidence indicator and messages from requisite children other than
  // `skip`.
  std::vector<IntervalPotential> lambda_factors(std::size_t x, std::optional<std::size_t> skip) {
    std::vector<IntervalPotential> factors;
    if (auto it = evidence_.find(x); it != evidence_.end()) {
      IntervalPotential ind(net_.cardinality(x), ProbabilityInterval{0.0, 0.0});
      ind[it->second] = {1.0, 1.0};
      factors.push_back(std::move(ind));
    }
    for (std::size_t c : net_.children(x)) {
      if (!requisite_[c] || (skip && *skip == c)) continue;
      factors.push_back(lambda_message(c, x));
    }
    return factors;
  }

  // pi(x) times the diagnostic factors, normalized. When the factors carry
  // no information (a constant) pi(x) already bounds a distribution and is
  // returned as is, since normalizing would only widen it.
  static IntervalPotential combine(const IntervalPotential& pi,
                                   const std::vector<IntervalPotential>& factors) {
    if (factors.empty()) return pi;
    const IntervalPotential lambda = ar::lambda_combine(factors, pi.size());
    if (constant_point(lambda)) return pi;
    return ar::ar_normalize(ar::interval_product(pi, lambda));
  }

  IntervalPotential pi_message(std::size_t x, std::size_t child) {
    return combine(pi_of(x), lambda_factors(x, child));
  }

  std::vector<IntervalPotential> parent_messages(std::size_t x,
                                                 std::optional<std::size_t> skip) {
    const auto& parents = net_.parents(x);
    std::vector<IntervalPotential> msgs(parents.size());
    for (std::size_t j = 0; j < parents.size(); ++j) {
      if (skip && *skip == j) {
        msgs[j].assign(net_.cardinality(parents[j]), ProbabilityInterval{1.0, 1.0});
      } else {
        msgs[j] = pi_message(parents[j], x);
      }
    }
    return msgs;
  }

  // Credal versions of the parent messages, or nullopt when some message
  // cannot be lifted within the budget.
  std::optional<std::vector<ar_plus::CredalMessage>> lift_all(
      const std::vector<IntervalPotential>& msgs, std::optional<std::size_t> skip) {
    std::vector<ar_plus::CredalMessage> lifted(msgs.size());
    for (std::size_t j = 0; j < msgs.size(); ++j) {
      if (skip && *skip == j) continue;
      try {
        lifted[j] = ar_plus::lift_to_credal(msgs[j]);
      } catch (const CapExceeded&) {
        return std::nullopt;
      }
      if (lifted[j].vertices.size() > budget_.max_vertices) return std::nullopt;
    }
    return lifted;
  }

  static bool degenerate(const ar::TableView& table,
                         const std::vector<ar_plus::CredalMessage>& lifted,
                         std::optional<std::size_t> skip) {
    for (const auto& list : table) {
      if (list.size() != 1) return false;
    }
    for (std::size_t j = 0; j < lifted.size(); ++j) {
      if (!(skip && *skip == j) && lifted[j].vertices.size() != 1) return false;
    }
    return true;
  }

  IntervalPotential pi_of(std::size_t x) {
    const auto msgs = parent_messages(x, std::nullopt);
    const auto table = ar::table_view(net_, x, selection_);
    if (mode_ == Mode::kAR || msgs.empty()) return ar::pi_from_parents(table, msgs);

    const auto lifted = lift_all(msgs, std::nullopt);
    if (lifted && degenerate(table, *lifted, std::nullopt)) {
      return ar::pi_from_parents(table, msgs);
    }
    ++stats_.credal_sites;
    std::optional<ar_plus::CredalMessage> set;
    if (lifted) set = ar_plus::local_eliminate(table, *lifted, budget_);
    if (!set) {
      ++stats_.fallbacks;
      return ar::pi_from_parents(table, msgs);
    }
    stats_.peak_vertices = std::max(stats_.peak_vertices, set->vertices.size());
    IntervalPotential out = interval_projection(set->vertices);
    for (auto& iv : out) {
      iv.lower = std::clamp(iv.lower, 0.0, 1.0);
      iv.upper = std::clamp(iv.upper, 0.0, 1.0);
    }
    return out;
  }

  IntervalPotential lambda_message(std::size_t x, std::size_t parent) {
    const auto& parents = net_.parents(x);
    const std::size_t target =
        static_cast<std::size_t>(std::find(parents.begin(), parents.end(), parent) - parents.begin());
    const IntervalPotential lambda =
        ar::lambda_combine(lambda_factors(x, std::nullopt), net_.cardinality(x));
    const auto msgs = parent_messages(x, target);
    const auto table = ar::table_view(net_, x, selection_);

    if (mode_ == Mode::kAR) {
      return ar::ar_normalize(ar::lambda_to_parent(table, msgs, target, lambda));
    }
    const auto lifted = lift_all(msgs, target);
    if (lifted && degenerate(table, *lifted, target)) {
      return ar::ar_normalize(ar::lambda_to_parent(table, msgs, target, lambda));
    }
    ++stats_.credal_sites;
    std::optional<IntervalPotential> out;
    if (lifted) out = ar_plus::lambda_eliminate(table, *lifted, target, lambda, budget_);
    if (!out) {
      ++stats_.fallbacks;
      out = ar::lambda_to_parent(table, msgs, target, lambda);
    }
    return ar::ar_normalize(*out);
  }

  const CredalNetwork& net_;
  const Evidence& evidence_;
  const VertexSelection* selection_;
  Mode mode_;
  ar_plus::VertexBudget budget_;
  std::vector<bool> requisite_;
  EngineStats stats_;
};

}  // namespace

IntervalPotential propagate(const CredalNetwork& net, std::size_t query, const Evidence& evidence,
                            const VertexSelection* selection, Mode mode, std::size_t budget,
                            EngineStats* stats) {
  check_query(net, query, evidence);
  if (mode == Mode::kARPlus && budget == 0) throw InvalidInput("vertex budget must be positive");
  Engine engine(net, query, evidence, selection, mode, budget);
  IntervalPotential out = engine.belief(query);
  if (stats != nullptr) *stats = engine.stats();
  return out;
}

}  // namespace credal::detail
