#include "credal/ar.hpp"

#include "credal/error.hpp"
#include "credal/geometry.hpp"
#include "propagation.hpp"
#include "radix.hpp"

#include <algorithm>
#include <string>

namespace credal::ar {
namespace {

std::vector<std::size_t> cards_of(std::span<const IntervalPotential> messages) {
  std::vector<std::size_t> cards;
  cards.reserve(messages.size());
  for (const auto& m : messages) cards.push_back(m.size());
  return cards;
}

void check_table(const TableView& table, std::span<const IntervalPotential> messages) {
  const auto cards = cards_of(messages);
  if (table.size() != detail::radix_size(cards)) {
    throw InvalidInput("table has " + std::to_string(table.size()) +
                       " configurations but the parent messages span " +
                       std::to_string(detail::radix_size(cards)));
  }
  for (const auto& list : table) {
    if (list.empty()) throw InvalidInput("empty vertex list in conditional table");
  }
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

TableView table_view(const CredalNetwork& net, std::size_t v, const VertexSelection* selection) {
  TableView view(net.config_count(v));
  for (std::size_t c = 0; c < view.size(); ++c) {
    view[c] = candidate_vertices(net, selection, {v, c});
  }
  return view;
}

TableView table_view(const ConditionalCredalTable& table) {
  TableView view;
  view.reserve(table.vertices.size());
  for (const auto& list : table.vertices) view.emplace_back(list);
  return view;
}

IntervalPotential ar_normalize(const IntervalPotential& potential) {
  double sum_lower = 0.0, sum_upper = 0.0;
  for (const auto& iv : potential) {
    if (!(iv.lower >= 0.0) || !(iv.lower <= iv.upper)) {
      throw InvalidInput("ar_normalize: entries must satisfy 0 <= lower <= upper");
    }
    sum_lower += iv.lower;
    sum_upper += iv.upper;
  }
  if (sum_upper <= 0.0) throw ZeroProbabilityEvidence("potential is zero everywhere");
  IntervalPotential out(potential.size());
  for (std::size_t i = 0; i < potential.size(); ++i) {
    const auto& iv = potential[i];
    const double other_upper = std::max(0.0, sum_upper - iv.upper);
    const double other_lower = std::max(0.0, sum_lower - iv.lower);
    if (iv.upper <= 0.0) continue;  // [0, 0]
    const double lo_den = iv.lower + other_upper;
    out[i].lower = lo_den > 0.0 ? iv.lower / lo_den : 1.0;
    out[i].upper = iv.upper / (iv.upper + other_lower);
    out[i].lower = clamp01(out[i].lower);
    out[i].upper = clamp01(out[i].upper);
  }
  return out;
}

IntervalPotential interval_product(const IntervalPotential& a, const IntervalPotential& b) {
  if (a.size() != b.size()) throw InvalidInput("interval_product: size mismatch");
  IntervalPotential out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = {a[i].lower * b[i].lower, a[i].upper * b[i].upper};
  }
  return out;
}

IntervalPotential lambda_combine(std::span<const IntervalPotential> messages,
                                 std::size_t cardinality) {
  IntervalPotential out(cardinality, ProbabilityInterval{1.0, 1.0});
  for (const auto& m : messages) out = interval_product(out, m);
  return out;
}

IntervalPotential joint_parent_box(std::span<const IntervalPotential> parent_messages) {
  if (parent_messages.empty()) return {ProbabilityInterval{1.0, 1.0}};
  const auto cards = cards_of(parent_messages);
  IntervalPotential beta(detail::radix_size(cards));
  std::vector<std::size_t> digits(cards.size(), 0);
  std::size_t c = 0;
  do {
    double lo = 1.0, hi = 1.0;
    for (std::size_t j = 0; j < digits.size(); ++j) {
      lo *= parent_messages[j][digits[j]].lower;
      hi *= parent_messages[j][digits[j]].upper;
    }
    beta[c++] = {lo, hi};
  } while (detail::radix_next(digits, cards));
  return ar_normalize(beta);
}

IntervalPotential pi_from_parents(const TableView& table,
                                  std::span<const IntervalPotential> parent_messages) {
  check_table(table, parent_messages);
  const std::size_t n = table.front().front().size();
  const IntervalPotential beta = joint_parent_box(parent_messages);
  IntervalPotential out(n);
  std::vector<double> lows(table.size()), highs(table.size());
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t c = 0; c < table.size(); ++c) {
      double lo = table[c].front()[x], hi = lo;
      for (const auto& v : table[c]) {
        lo = std::min(lo, v[x]);
        hi = std::max(hi, v[x]);
      }
      lows[c] = lo;
      highs[c] = hi;
    }
    out[x].lower = clamp01(geometry::constrained_extreme_mass(lows, beta, Direction::Minimize).objective);
    out[x].upper = clamp01(geometry::constrained_extreme_mass(highs, beta, Direction::Maximize).objective);
  }
  return out;
}

IntervalPotential pi_from_parents(const ConditionalCredalTable& table,
                                  std::span<const IntervalPotential> parent_messages) {
  return pi_from_parents(table_view(table), parent_messages);
}

IntervalPotential lambda_to_parent(const TableView& table,
                                   std::span<const IntervalPotential> parent_messages,
                                   std::size_t target, const IntervalPotential& lambda) {
  check_table(table, parent_messages);
  if (target >= parent_messages.size()) throw InvalidInput("lambda_to_parent: bad parent index");
  const std::size_t n = table.front().front().size();
  if (lambda.size() != n) throw InvalidInput("lambda_to_parent: lambda size mismatch");

  std::vector<IntervalPotential> others;
  std::vector<std::size_t> other_cards;
  for (std::size_t j = 0; j < parent_messages.size(); ++j) {
    if (j == target) continue;
    others.push_back(parent_messages[j]);
    other_cards.push_back(parent_messages[j].size());
  }
  const IntervalPotential beta = joint_parent_box(others);
  const auto other_strides = detail::radix_strides(other_cards);

  std::vector<double> lam_lo(n), lam_hi(n);
  for (std::size_t x = 0; x < n; ++x) {
    lam_lo[x] = lambda[x].lower;
    lam_hi[x] = lambda[x].upper;
  }

  const std::size_t card_t = parent_messages[target].size();
  std::vector<std::vector<double>> gl(card_t, std::vector<double>(beta.size()));
  std::vector<std::vector<double>> gu = gl;
  const auto cards = cards_of(parent_messages);
  std::vector<std::size_t> digits(cards.size(), 0);
  std::size_t c = 0;
  do {
    std::size_t o = 0, k = 0;
    for (std::size_t j = 0; j < digits.size(); ++j) {
      if (j != target) o += digits[j] * other_strides[k++];
    }
    const auto box = interval_projection(table[c]);
    gl[digits[target]][o] = geometry::constrained_extreme_mass(lam_lo, box, Direction::Minimize).objective;
    gu[digits[target]][o] = geometry::constrained_extreme_mass(lam_hi, box, Direction::Maximize).objective;
    ++c;
  } while (detail::radix_next(digits, cards));

  IntervalPotential out(card_t);
  for (std::size_t u = 0; u < card_t; ++u) {
    out[u].lower = std::max(0.0, geometry::constrained_extreme_mass(gl[u], beta, Direction::Minimize).objective);
    out[u].upper = std::max(0.0, geometry::constrained_extreme_mass(gu[u], beta, Direction::Maximize).objective);
  }
  return out;
}

IntervalPotential propagate(const CredalNetwork& net, std::size_t query, const Evidence& evidence,
                            const VertexSelection* selection) {
  return detail::propagate(net, query, evidence, selection, detail::Mode::kAR, 0, nullptr);
}

}  // namespace credal::ar
