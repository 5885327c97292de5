#include "credal/exact.hpp"

#include "credal/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>
#include <thread>

namespace credal::exact {

PointEvaluator::PointEvaluator(const CredalNetwork& net, std::optional<std::size_t> query,
                               const Evidence& evidence)
    : net_(&net), query_(query) {
  const std::size_t n = net.size();
  if (query) {
    check_query(net, *query, evidence);
    requisite_ = requisite_variables(net, *query, evidence);
  } else {
    requisite_.assign(n, false);
    std::vector<std::size_t> stack;
    for (const auto& [v, c] : evidence) {
      if (v >= n || c >= net.cardinality(v)) throw InvalidInput("evidence out of range");
      stack.push_back(v);
    }
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      if (requisite_[v]) continue;
      requisite_[v] = true;
      for (std::size_t p : net.parents(v)) stack.push_back(p);
    }
  }
  auto observed = [&](std::size_t v) { return evidence.find(v) != evidence.end(); };

  // Initial factors: one per requisite variable, restricted to the evidence.
  for (std::size_t v = 0; v < n; ++v) {
    if (!requisite_[v]) continue;
    for (std::size_t c = 0; c < net.config_count(v); ++c) requisite_sets_.push_back({v, c});

    std::vector<std::size_t> family = net.parents(v);
    family.push_back(v);
    Factor f;
    for (std::size_t u : family) {
      if (observed(u)) continue;
      f.scope.push_back(u);
      f.card.push_back(net.cardinality(u));
      f.size *= net.cardinality(u);
    }
    std::vector<Entry> layout(f.size);
    std::vector<std::size_t> states(family.size());
    for (std::size_t idx = 0; idx < f.size; ++idx) {
      std::size_t rem = idx;
      std::size_t s = f.scope.size();
      for (std::size_t k = family.size(); k-- > 0;) {
        const std::size_t u = family[k];
        if (auto it = evidence.find(u); it != evidence.end()) {
          states[k] = it->second;
        } else {
          --s;
          states[k] = rem % f.card[s];
          rem /= f.card[s];
        }
      }
      const std::size_t cat = states.back();
      const std::size_t cfg =
          net.encode_config(v, std::span<const std::size_t>(states.data(), states.size() - 1));
      layout[idx] = {static_cast<std::uint32_t>(cfg), static_cast<std::uint32_t>(cat)};
    }
    factors_.push_back(std::move(f));
    source_variable_.push_back(v);
    entries_.push_back(std::move(layout));
  }

  // Leaf-stripping order over the forest of unobserved requisite variables.
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (!requisite_[v] || observed(v)) continue;
    for (std::size_t p : net.parents(v)) {
      if (!observed(p)) {
        adj[v].push_back(p);
        adj[p].push_back(v);
      }
    }
  }
  std::vector<std::size_t> degree(n);
  std::deque<std::size_t> leaves;
  for (std::size_t v = 0; v < n; ++v) {
    degree[v] = adj[v].size();
    if (requisite_[v] && !observed(v) && degree[v] <= 1 && v != query) leaves.push_back(v);
  }
  std::vector<bool> gone(n, false);
  std::vector<bool> used(factors_.size(), false);
  while (!leaves.empty()) {
    const std::size_t v = leaves.front();
    leaves.pop_front();
    gone[v] = true;
    for (std::size_t w : adj[v]) {
      if (gone[w]) continue;
      // Enqueue on the drop to degree one; lower-degree vertices already are.
      if (--degree[w] == 1 && w != query) leaves.push_back(w);
    }

    Step step;
    std::vector<std::size_t> uscope;
    for (std::size_t fi = 0; fi < factors_.size(); ++fi) {
      if (used[fi]) continue;
      const auto& sc = factors_[fi].scope;
      if (std::find(sc.begin(), sc.end(), v) == sc.end()) continue;
      used[fi] = true;
      step.inputs.push_back(fi);
      for (std::size_t u : sc) {
        if (std::find(uscope.begin(), uscope.end(), u) == uscope.end()) uscope.push_back(u);
      }
    }
    // Eliminated variable last so the output index is a plain prefix walk.
    std::erase(uscope, v);
    uscope.push_back(v);
    Factor out;
    for (std::size_t u : uscope) {
      step.card.push_back(net.cardinality(u));
      if (u == v) continue;
      out.scope.push_back(u);
      out.card.push_back(net.cardinality(u));
      out.size *= net.cardinality(u);
    }
    auto strides_for = [&](const Factor& f) {
      std::vector<std::size_t> st(uscope.size(), 0);
      std::size_t s = 1;
      for (std::size_t k = f.scope.size(); k-- > 0;) {
        const auto pos = std::find(uscope.begin(), uscope.end(), f.scope[k]) - uscope.begin();
        st[static_cast<std::size_t>(pos)] = s;
        s *= f.card[k];
      }
      return st;
    };
    for (std::size_t fi : step.inputs) step.strides.push_back(strides_for(factors_[fi]));
    step.out_strides = strides_for(out);
    step.output = factors_.size();
    factors_.push_back(std::move(out));
    used.push_back(false);
    steps_.push_back(std::move(step));
  }
  for (std::size_t fi = 0; fi < factors_.size(); ++fi) {
    if (used[fi]) continue;
    final_factors_.push_back(fi);
    const auto& f = factors_[fi];
    if (!f.scope.empty() && (!query || f.scope.size() != 1 || f.scope[0] != *query)) {
      throw Error("internal: elimination left a factor over unexpected variables");
    }
    final_query_stride_.push_back(f.scope.empty() ? 0 : 1);
  }
  result_size_ = query ? net.cardinality(*query) : 1;
  values_.resize(factors_.size());
  for (std::size_t fi = 0; fi < factors_.size(); ++fi) values_[fi].resize(factors_[fi].size);
  result_.resize(result_size_);
}

const std::vector<double>& PointEvaluator::joint(const VertexSelection* selection) const {
  const CredalNetwork& net = *net_;
  for (std::size_t fi = 0; fi < entries_.size(); ++fi) {
    const std::size_t v = source_variable_[fi];
    const auto& layout = entries_[fi];
    auto& vals = values_[fi];
    // Resolve each configuration at most once per evaluation.
    const std::size_t configs = net.config_count(v);
    thread_local std::vector<const Distribution*> chosen;
    chosen.assign(configs, nullptr);
    for (std::size_t k = 0; k < layout.size(); ++k) {
      const std::size_t cfg = layout[k].config;
      if (chosen[cfg] == nullptr) {
        auto cands = candidate_vertices(net, selection, LocalSetId{v, cfg});
        if (cands.size() != 1) {
          throw InvalidInput("local set of '" + net.variable(v).name + "', configuration " +
                             std::to_string(cfg) + " is not fixed to a single vertex");
        }
        chosen[cfg] = &cands.front();
      }
      vals[k] = (*chosen[cfg])[layout[k].category];
    }
  }

  std::vector<std::size_t> counter;
  std::vector<std::size_t> idx;
  for (const Step& step : steps_) {
    auto& out = values_[step.output];
    std::fill(out.begin(), out.end(), 0.0);
    const std::size_t nin = step.inputs.size();
    const std::size_t dims = step.card.size();
    counter.assign(dims, 0);
    idx.assign(nin, 0);
    std::size_t oidx = 0;
    for (;;) {
      double prod = 1.0;
      for (std::size_t i = 0; i < nin; ++i) prod *= values_[step.inputs[i]][idx[i]];
      out[oidx] += prod;
      // Odometer over the union scope, last variable fastest.
      std::size_t d = dims;
      while (d-- > 0) {
        if (++counter[d] < step.card[d]) {
          for (std::size_t i = 0; i < nin; ++i) idx[i] += step.strides[i][d];
          oidx += step.out_strides[d];
          break;
        }
        for (std::size_t i = 0; i < nin; ++i) idx[i] -= step.strides[i][d] * (step.card[d] - 1);
        oidx -= step.out_strides[d] * (step.card[d] - 1);
        counter[d] = 0;
      }
      if (d == static_cast<std::size_t>(-1)) break;
    }
  }

  std::fill(result_.begin(), result_.end(), 1.0);
  for (std::size_t k = 0; k < final_factors_.size(); ++k) {
    const auto& vals = values_[final_factors_[k]];
    for (std::size_t x = 0; x < result_size_; ++x) {
      result_[x] *= vals[final_query_stride_[k] * x];
    }
  }
  return result_;
}

Distribution marginal(const CredalNetwork& net, std::size_t query, const Evidence& evidence,
                      const VertexSelection* selection) {
  PointEvaluator eval(net, query, evidence);
  Distribution joint = eval.joint(selection);
  double total = 0.0;
  for (double x : joint) total += x;
  if (!(total > 0.0)) {
    throw ZeroProbabilityEvidence("evidence has probability zero");
  }
  for (double& x : joint) x /= total;
  return joint;
}

double evidence_probability(const CredalNetwork& net, const Evidence& evidence,
                            const VertexSelection* selection) {
  if (evidence.empty()) return 1.0;
  PointEvaluator eval(net, std::nullopt, evidence);
  return eval.joint(selection).front();
}

namespace {

struct Partial {
  std::vector<double> lo, hi;
  std::vector<std::uint64_t> lo_at, hi_at;
  std::uint64_t enumerated = 0;
  std::uint64_t skipped = 0;
};

VertexSelection decode_selection(const CredalNetwork& net,
                                 const std::vector<LocalSetId>& sets,
                                 const std::vector<std::size_t>& radix, std::uint64_t index) {
  VertexSelection sel(net);
  for (const auto& id : net.local_sets()) sel.set(id, 0);
  for (std::size_t k = sets.size(); k-- > 0;) {
    sel.set(sets[k], index % radix[k]);
    index /= radix[k];
  }
  return sel;
}

}  // namespace

ExhaustiveResult exhaustive_bounds_all(const CredalNetwork& net, std::size_t query,
                                       const Evidence& evidence,
                                       const ExhaustiveOptions& options) {
  const PointEvaluator proto(net, query, evidence);
  const std::size_t ncat = net.cardinality(query);

  // Mixed-radix counter over the requisite sets that still have a choice,
  // first set most significant.
  std::vector<LocalSetId> sets;
  std::vector<std::size_t> radix;
  std::uint64_t total = 1;
  for (const auto& id : proto.requisite_sets()) {
    const std::size_t k = net.vertices(id).size();
    if (k <= 1) continue;
    sets.push_back(id);
    radix.push_back(k);
    if (total > options.cap / k) {
      throw CapExceeded("exhaustive enumeration exceeds the cap of " +
                        std::to_string(options.cap) + " vertex selections");
    }
    total *= k;
  }
  if (total > options.cap) {
    throw CapExceeded("exhaustive enumeration exceeds the cap of " +
                      std::to_string(options.cap) + " vertex selections");
  }

  auto run_range = [&](std::uint64_t begin, std::uint64_t end, Partial& part) {
    PointEvaluator eval = proto;
    VertexSelection sel = decode_selection(net, sets, radix, begin);
    std::vector<std::size_t> digit(sets.size());
    for (std::size_t k = 0; k < sets.size(); ++k) digit[k] = sel.get(sets[k]);
    part.lo.assign(ncat, INFINITY);
    part.hi.assign(ncat, -INFINITY);
    part.lo_at.assign(ncat, 0);
    part.hi_at.assign(ncat, 0);
    for (std::uint64_t i = begin; i < end; ++i) {
      const auto& joint = eval.joint(&sel);
      double pe = 0.0;
      for (double x : joint) pe += x;
      ++part.enumerated;
      if (pe > 0.0) {
        for (std::size_t x = 0; x < ncat; ++x) {
          const double p = joint[x] / pe;
          if (p < part.lo[x]) {
            part.lo[x] = p;
            part.lo_at[x] = i;
          }
          if (p > part.hi[x]) {
            part.hi[x] = p;
            part.hi_at[x] = i;
          }
        }
      } else {
        ++part.skipped;
      }
      for (std::size_t k = sets.size(); k-- > 0;) {
        if (++digit[k] < radix[k]) {
          sel.set(sets[k], digit[k]);
          break;
        }
        digit[k] = 0;
        sel.set(sets[k], 0);
      }
    }
  };

  const unsigned threads =
      static_cast<unsigned>(std::clamp<std::uint64_t>(options.threads, 1, total));
  std::vector<Partial> parts(threads);
  if (threads == 1) {
    run_range(0, total, parts[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      const std::uint64_t b = total * t / threads, e = total * (t + 1) / threads;
      pool.emplace_back([&, b, e, t] { run_range(b, e, parts[t]); });
    }
    for (auto& th : pool) th.join();
  }

  // Ranges are in index order and comparisons are strict, so the first
  // attaining selection wins regardless of the thread count.
  ExhaustiveResult result;
  result.bounds.assign(ncat, {INFINITY, -INFINITY});
  std::vector<std::uint64_t> lo_at(ncat, 0), hi_at(ncat, 0);
  for (const auto& part : parts) {
    result.enumerated += part.enumerated;
    result.skipped_zero_evidence += part.skipped;
    for (std::size_t x = 0; x < ncat; ++x) {
      if (part.lo[x] < result.bounds[x].lower) {
        result.bounds[x].lower = part.lo[x];
        lo_at[x] = part.lo_at[x];
      }
      if (part.hi[x] > result.bounds[x].upper) {
        result.bounds[x].upper = part.hi[x];
        hi_at[x] = part.hi_at[x];
      }
    }
  }
  if (result.skipped_zero_evidence == result.enumerated) {
    throw ZeroProbabilityEvidence("evidence has probability zero under every vertex selection");
  }
  for (std::size_t x = 0; x < ncat; ++x) {
    result.argmin.push_back(decode_selection(net, sets, radix, lo_at[x]));
    result.argmax.push_back(decode_selection(net, sets, radix, hi_at[x]));
  }
  return result;
}

ProbabilityInterval exhaustive_bounds(const CredalNetwork& net, std::size_t query,
                                      std::size_t category, const Evidence& evidence,
                                      const ExhaustiveOptions& options) {
  if (query < net.size() && category >= net.cardinality(query)) {
    throw InvalidInput("query category out of range");
  }
  return exhaustive_bounds_all(net, query, evidence, options).bounds[category];
}

}  // namespace credal::exact
