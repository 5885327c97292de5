#include "commands.hpp"

#include "network_io.hpp"

#include <credal/ar.hpp>
#include <credal/ar_plus.hpp>
#include <credal/bnb.hpp>
#include <credal/error.hpp>
#include <credal/exact.hpp>
#include <credal/harness.hpp>
#include <credal/local_search.hpp>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace credal::cli {
namespace {

constexpr const char* kTool = "credalnet";
constexpr const char* kVersion = "0.1.0";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "sha256:";
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

harness::Range parse_range(const std::string& text, const char* flag) {
  const auto dots = text.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      const std::size_t v = std::stoul(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {v, v};
    }
    const std::string lo = text.substr(0, dots), hi = text.substr(dots + 2);
    harness::Range r{std::stoul(lo, &used), 0};
    if (used != lo.size()) throw std::invalid_argument(text);
    r.hi = std::stoul(hi, &used);
    if (used != hi.size()) throw std::invalid_argument(text);
    if (r.lo > r.hi) throw std::invalid_argument(text);
    return r;
  } catch (const std::logic_error&) {
    throw UsageError(std::string(flag) + ": expected N or LO..HI with LO <= HI, got \"" + text + "\"");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

Evidence parse_evidence(const CredalNetwork& net, const std::string& text) {
  Evidence ev;
  if (text.empty()) return ev;
  for (const auto& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw UsageError("--evidence: expected VAR=CAT, got \"" + item + "\"");
    }
    const std::size_t v = net.index_of(item.substr(0, eq));
    ev[v] = net.category_of(v, item.substr(eq + 1));
  }
  return ev;
}

void emit(const Json& doc, const std::string& path, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw InvalidInput("cannot write " + path);
}

void emit_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw InvalidInput("cannot write " + path);
}

Json header(const char* command, const std::string& digest) {
  return Json{{"tool", kTool}, {"version", kVersion}, {"command", command}, {"input_digest", digest}};
}

struct InferFlags {
  std::string network, query, evidence, algorithm, output;
  double epsilon = 0.0;
  std::size_t max_vertices = 256;
  std::size_t restarts = 8;
  std::uint64_t seed = 0;
  std::uint64_t node_limit = 0;
  unsigned threads = 1;
};

int cmd_infer(const InferFlags& f, std::ostream& out) {
  const std::string bytes = read_file(f.network);
  const CredalNetwork net = parse_network(bytes);
  const std::size_t q = net.index_of(f.query);
  const Evidence ev = parse_evidence(net, f.evidence);
  check_query(net, q, ev);
  const auto algorithm = *harness::parse_algorithm(f.algorithm);
  const std::size_t cards = net.cardinality(q);

  Rng rng(f.seed);
  IntervalPotential intervals(cards);
  Json stats = Json::object();
  const auto start = std::chrono::steady_clock::now();
  switch (algorithm) {
    case harness::Algorithm::kAR:
      intervals = ar::propagate(net, q, ev);
      break;
    case harness::Algorithm::kARPlus: {
      const auto r = ar_plus::propagate_plus_with_stats(net, q, ev, {f.max_vertices});
      intervals = r.bounds;
      stats["credal_sites"] = r.stats.credal_sites;
      stats["fallbacks"] = r.stats.fallbacks;
      stats["peak_vertices"] = r.stats.peak_vertices;
      break;
    }
    case harness::Algorithm::kLocalSearch: {
      local_search::Options opts;
      opts.threads = f.threads;
      std::uint64_t moves = 0;
      for (std::size_t x = 0; x < cards; ++x) {
        const auto lo = local_search::multistart(net, q, x, ev, Direction::Minimize, f.restarts, rng, opts);
        const auto hi = local_search::multistart(net, q, x, ev, Direction::Maximize, f.restarts, rng, opts);
        intervals[x] = {lo.value, hi.value};
        moves += lo.moves + hi.moves;
      }
      stats["restarts"] = f.restarts;
      stats["moves"] = moves;
      break;
    }
    case harness::Algorithm::kBnb: {
      bnb::SolveOptions opts;
      opts.epsilon = f.epsilon;
      opts.budget.max_vertices = f.max_vertices;
      opts.restarts = f.restarts;
      opts.node_limit = f.node_limit;
      opts.threads = f.threads;
      std::uint64_t nodes = 0, leaves = 0, pruned = 0;
      double gap = 0.0;
      bool exact = true;
      for (std::size_t x = 0; x < cards; ++x) {
        const auto r = bnb::solve_interval(net, q, x, ev, opts, rng);
        intervals[x] = r.interval;
        for (const auto* s : {&r.lower, &r.upper}) {
          nodes += s->stats.nodes_expanded;
          leaves += s->stats.leaves_evaluated;
          pruned += s->stats.pruned;
          gap = std::max(gap, s->stats.final_gap);
          exact = exact && s->mode == bnb::Mode::kExact;
        }
      }
      stats["mode"] = exact ? "exact" : "approximate";
      stats["nodes_expanded"] = nodes;
      stats["leaves_evaluated"] = leaves;
      stats["pruned"] = pruned;
      stats["gap"] = gap;
      break;
    }
    case harness::Algorithm::kExhaustive: {
      exact::ExhaustiveOptions opts;
      opts.threads = f.threads;
      const auto r = exact::exhaustive_bounds_all(net, q, ev, opts);
      intervals = r.bounds;
      stats["enumerated"] = r.enumerated;
      stats["skipped_zero_evidence"] = r.skipped_zero_evidence;
      break;
    }
  }
  stats["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Json doc = header("infer", sha256_hex(bytes));
  doc["algorithm"] = f.algorithm;
  doc["query"] = f.query;
  Json evj = Json::object();
  for (const auto& [v, c] : ev) evj[net.variable(v).name] = net.variable(v).categories[c];
  doc["evidence"] = evj;
  Json params = Json::object();
  if (algorithm == harness::Algorithm::kBnb) params["epsilon"] = f.epsilon;
  if (algorithm == harness::Algorithm::kARPlus || algorithm == harness::Algorithm::kBnb) {
    params["max_vertices"] = f.max_vertices;
  }
  if (algorithm == harness::Algorithm::kLocalSearch || algorithm == harness::Algorithm::kBnb) {
    params["restarts"] = f.restarts;
    params["seed"] = f.seed;
  }
  doc["parameters"] = params;
  Json results = Json::array();
  for (std::size_t x = 0; x < cards; ++x) {
    results.push_back(Json{{"category", net.variable(q).categories[x]},
                           {"interval", {intervals[x].lower, intervals[x].upper}}});
  }
  doc["results"] = results;
  doc["stats"] = stats;
  emit(doc, f.output, out);
  return kOk;
}

struct GenerateFlags {
  std::size_t nodes = 10;
  std::string categories = "2..4", vertices = "2..3", output;
  std::uint64_t seed = 0;
};

int cmd_generate(const GenerateFlags& f, std::ostream& out) {
  harness::GeneratorConfig cfg{f.nodes, parse_range(f.categories, "--categories"),
                               parse_range(f.vertices, "--vertices"), f.seed};
  try {
    harness::check_config(cfg);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  emit_text(serialize_network(harness::random_polytree(cfg)), f.output, out);
  return kOk;
}

struct BenchmarkFlags {
  std::size_t ensemble_size = 30, nodes = 10, evidence_count = 0;
  std::string categories = "2..4", vertices = "2..3", algorithms, output;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  std::size_t max_vertices = 256, restarts = 8;
  std::uint64_t node_limit = 0, reference_node_limit = 100000;
  unsigned threads = 1;
};

Json interval_pairs(const IntervalPotential& ivs) {
  Json a = Json::array();
  for (const auto& iv : ivs) a.push_back({iv.lower, iv.upper});
  return a;
}

int cmd_benchmark(const BenchmarkFlags& f, std::ostream& out) {
  std::vector<harness::Algorithm> algorithms;
  for (const auto& name : split(f.algorithms, ',')) {
    const auto a = harness::parse_algorithm(name);
    if (!a) throw UsageError("--algorithms: unknown algorithm \"" + name + "\"");
    algorithms.push_back(*a);
  }
  if (algorithms.empty()) throw UsageError("--algorithms: empty algorithm list");

  harness::EnsembleConfig cfg;
  cfg.generator = {f.nodes, parse_range(f.categories, "--categories"),
                   parse_range(f.vertices, "--vertices"), f.seed};
  try {
    harness::check_config(cfg.generator);
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  cfg.instances = f.ensemble_size;
  cfg.bnb.epsilon = f.epsilon;
  cfg.bnb.budget.max_vertices = f.max_vertices;
  cfg.bnb.restarts = f.restarts;
  cfg.bnb.node_limit = f.node_limit;
  cfg.reference_node_limit = f.reference_node_limit;
  cfg.restarts = f.restarts;
  cfg.threads = f.threads;

  Json config{{"ensemble_size", f.ensemble_size},
              {"nodes", f.nodes},
              {"categories", {cfg.generator.categories.lo, cfg.generator.categories.hi}},
              {"vertices", {cfg.generator.vertices.lo, cfg.generator.vertices.hi}},
              {"evidence_count", f.evidence_count},
              {"algorithms", Json::array()},
              {"epsilon", f.epsilon},
              {"max_vertices", f.max_vertices},
              {"restarts", f.restarts},
              {"node_limit", f.node_limit},
              {"reference_node_limit", f.reference_node_limit},
              {"seed", f.seed}};
  for (auto a : algorithms) config["algorithms"].push_back(harness::algorithm_name(a));

  const auto report = harness::run_ensemble(cfg, algorithms, {harness::QuerySpec{std::nullopt, std::nullopt, f.evidence_count}}, f.seed);

  Json doc = header("benchmark", sha256_hex(config.dump()));
  doc["config"] = config;
  Json aggregates = Json::array();
  for (const auto& a : report.aggregates) {
    aggregates.push_back(Json{{"algorithm", harness::algorithm_name(a.algorithm)},
                              {"instances", a.instances},
                              {"failed", a.failed},
                              {"mean_relative_error", a.mean_relative_error},
                              {"undefined_errors", a.undefined_errors},
                              {"mean_interval_length", a.mean_interval_length},
                              {"mean_nodes_expanded", a.mean_nodes_expanded},
                              {"median_nodes_expanded", a.median_nodes_expanded},
                              {"wall_time_s", a.mean_wall_time_s}});
  }
  doc["aggregates"] = aggregates;
  doc["mean_b1"] = report.mean_b1;
  doc["mean_b2"] = report.mean_b2;
  doc["sandwich_violations"] = report.sandwich_violations;
  doc["references_unavailable"] = report.references_unavailable;
  Json rows = Json::array();
  for (const auto& row : report.instances) {
    Json ev = Json::object();
    for (const auto& [name, label] : row.evidence) ev[name] = label;
    Json results = Json::array();
    for (const auto& r : row.results) {
      Json jr{{"algorithm", harness::algorithm_name(r.algorithm)}};
      if (r.failed) {
        jr["error"] = r.error;
      } else {
        jr["intervals"] = interval_pairs(r.intervals);
        jr["relative_error"] = r.relative_error;
        jr["interval_length"] = r.interval_length;
        if (r.algorithm == harness::Algorithm::kBnb) jr["nodes_expanded"] = r.nodes_expanded;
      }
      jr["wall_time_s"] = r.wall_time_s;
      results.push_back(std::move(jr));
    }
    Json jrow{{"instance", row.instance},
              {"query", row.query},
              {"evidence", ev},
              {"potential_vertices", row.potential_vertices.str()},
              {"requisite_vertices", row.requisite_vertices.str()},
              {"reference_method", row.reference_method},
              {"reference", interval_pairs(row.reference)},
              {"results", results},
              {"b1", row.b1},
              {"b2", row.b2},
              {"sandwich_violations", row.sandwich_violations}};
    if (row.failed) jrow["error"] = row.error;
    rows.push_back(std::move(jrow));
  }
  doc["instances"] = rows;
  emit(doc, f.output, out);
  return kOk;
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inference in polytree credal networks", kTool};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  const std::vector<std::string> names{"ar", "ar-plus", "local-search", "bnb", "exhaustive"};

  InferFlags infer;
  infer.threads = default_threads();
  auto* ci = app.add_subcommand("infer", "Bounds on p(query | evidence) for every query category");
  ci->add_option("--network", infer.network, "Network file")->required();
  ci->add_option("--query", infer.query, "Query variable")->required();
  ci->add_option("--evidence", infer.evidence, "Observations VAR=CAT,...");
  ci->add_option("--algorithm", infer.algorithm, "Algorithm")
      ->required()
      ->check(CLI::IsMember(names));
  ci->add_option("--epsilon", infer.epsilon, "bnb: stop when outer - inner <= epsilon")
      ->check(CLI::NonNegativeNumber);
  ci->add_option("--max-vertices", infer.max_vertices, "Vertex budget per message (ar-plus, bnb)")
      ->check(CLI::PositiveNumber);
  ci->add_option("--restarts", infer.restarts, "Local search restarts")->check(CLI::PositiveNumber);
  ci->add_option("--seed", infer.seed, "Random seed");
  ci->add_option("--node-limit", infer.node_limit, "bnb: node limit (0 = none)");
  ci->add_option("--threads", infer.threads, "Worker threads")->check(CLI::PositiveNumber);
  ci->add_option("--output", infer.output, "Report path (default: stdout)");

  GenerateFlags gen;
  auto* cg = app.add_subcommand("generate", "Write a random polytree credal network");
  cg->add_option("--nodes", gen.nodes, "Number of variables")->check(CLI::PositiveNumber);
  cg->add_option("--categories", gen.categories, "Categories per variable, N or LO..HI");
  cg->add_option("--vertices", gen.vertices, "Vertices per local set, N or LO..HI");
  cg->add_option("--seed", gen.seed, "Random seed");
  cg->add_option("--output", gen.output, "Network path (default: stdout)");
  unsigned gen_threads = 1;
  cg->add_option("--threads", gen_threads, "Accepted for uniformity; generation is serial");

  BenchmarkFlags bench;
  bench.threads = default_threads();
  auto* cb = app.add_subcommand("benchmark", "Run a seeded random ensemble and aggregate statistics");
  cb->add_option("--ensemble-size", bench.ensemble_size, "Number of networks")
      ->check(CLI::PositiveNumber);
  cb->add_option("--nodes", bench.nodes, "Variables per network")->check(CLI::PositiveNumber);
  cb->add_option("--categories", bench.categories, "Categories per variable, N or LO..HI");
  cb->add_option("--vertices", bench.vertices, "Vertices per local set, N or LO..HI");
  cb->add_option("--algorithms", bench.algorithms, "Comma-separated algorithm list")->required();
  cb->add_option("--evidence-count", bench.evidence_count, "Observed variables per query");
  cb->add_option("--epsilon", bench.epsilon, "bnb epsilon")->check(CLI::NonNegativeNumber);
  cb->add_option("--max-vertices", bench.max_vertices, "Vertex budget")->check(CLI::PositiveNumber);
  cb->add_option("--restarts", bench.restarts, "Local search restarts")->check(CLI::PositiveNumber);
  cb->add_option("--node-limit", bench.node_limit, "bnb rows: node limit (0 = none)");
  cb->add_option("--reference-node-limit", bench.reference_node_limit,
                 "Node limit of each exact reference solve (0 = none)");
  cb->add_option("--seed", bench.seed, "Random seed");
  cb->add_option("--threads", bench.threads, "Worker threads")->check(CLI::PositiveNumber);
  cb->add_option("--output", bench.output, "Report path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help, diag;
    const int code = app.exit(e, help, diag);
    out << help.str();
    err << diag.str();
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*ci) return cmd_infer(infer, out);
    if (*cg) return cmd_generate(gen, out);
    return cmd_benchmark(bench, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ZeroProbabilityEvidence& e) {
    err << "error: infeasible evidence: " << e.what() << "\n";
    return kInfeasibleEvidence;
  } catch (const Infeasible& e) {
    err << "error: infeasible: " << e.what() << "\n";
    return kInfeasibleEvidence;
  } catch (const CapExceeded& e) {
    err << "error: resource cap exceeded: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
}

}  // namespace credal::cli
