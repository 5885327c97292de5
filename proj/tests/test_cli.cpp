#include <doctest.h>

#include "support/networks.hpp"

#include <commands.hpp>
#include <network_io.hpp>

#include <credal/error.hpp>
#include <credal/exact.hpp>
#include <credal/harness.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

using namespace credal;
using credal::cli::Json;

namespace {

const std::string kFixtures = CREDAL_FIXTURE_DIR;

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "credalnet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string strip_timing(const std::string& s) {
  static const std::regex re("\"wall_time_s\": [^,\\n}]*");
  return std::regex_replace(s, re, "\"wall_time_s\": 0.0");
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("credalnet_test_" + name)).string();
}

void write(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

std::vector<std::pair<double, double>> intervals(const std::string& report) {
  std::vector<std::pair<double, double>> out;
  const Json doc = Json::parse(report);
  for (const auto& r : doc["results"]) {
    out.emplace_back(r["interval"][0].get<double>(), r["interval"][1].get<double>());
  }
  return out;
}

}  // namespace

TEST_CASE("network file round trip") {
  const std::string text = cli::read_file(kFixtures + "/two_node.json");
  const auto net = cli::parse_network(text);
  CHECK(net.size() == 2);
  CHECK(net.vertices({1, 1}).size() == 2);
  CHECK(cli::config_key(net, 1, 1) == "a1");
  CHECK(cli::serialize_network(net) == text);

  SUBCASE("generated networks") {
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
      const auto g = harness::random_polytree({1 + rng.below(9), {2, 4}, {1, 3}, 0}, rng);
      const auto back = cli::parse_network(cli::serialize_network(g));
      CHECK(back == g);
      CHECK(validate(back).ok());
    }
  }
  SUBCASE("exactly repeated rows are kept once") {
    auto doc = Json::parse(text);
    doc["credal_sets"]["A"][""].push_back({0.2, 0.8});
    const auto n = cli::parse_network(doc.dump());
    CHECK(n.vertices({0, 0}).size() == 2);
    CHECK(n == net);
  }
  SUBCASE("minimal root") {
    const auto n = cli::parse_network(
        R"({"variables":[{"name":"R","categories":["r"],"parents":[]}],"credal_sets":{"R":{"":[[1]]}}})");
    CHECK(n.size() == 1);
    CHECK(n.cardinality(0) == 1);
  }
}

TEST_CASE("network file diagnostics") {
  auto doc = Json::parse(cli::read_file(kFixtures + "/two_node.json"));
  auto expect_error = [](const Json& d, const std::string& fragment) {
    try {
      cli::parse_network(d.dump());
      FAIL("accepted: " << fragment);
    } catch (const InvalidInput& e) {
      CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
    }
  };
  SUBCASE("row summing to 0.9") {
    doc["credal_sets"]["B"]["a1"][1] = {0.4, 0.5};
    expect_error(doc, "variable B, configuration \"a1\", row 1: entries sum to 0.9");
  }
  SUBCASE("missing configuration") {
    doc["credal_sets"]["B"].erase("a0");
    expect_error(doc, "variable B, configuration \"a0\": missing");
  }
  SUBCASE("unknown configuration") {
    doc["credal_sets"]["B"]["a2"] = Json::array({{0.5, 0.5}});
    expect_error(doc, "unknown configuration \"a2\"");
  }
  SUBCASE("unknown parent") {
    doc["variables"][1]["parents"] = {"Q"};
    expect_error(doc, "unknown parent Q");
  }
  SUBCASE("wrong row length") {
    doc["credal_sets"]["A"][""][0] = {1.0};
    expect_error(doc, "variable A, configuration \"\", row 0: expected 2 numbers");
  }
  SUBCASE("negative entry") {
    doc["credal_sets"]["A"][""][0] = {-0.2, 1.2};
    expect_error(doc, "row 0: negative");
  }
  SUBCASE("cycle") {
    doc["variables"][0]["parents"] = {"B"};
    doc["credal_sets"]["A"] = Json{{"b0", {{0.5, 0.5}}}, {"b1", {{0.5, 0.5}}}};
    expect_error(doc, "invalid network");
  }
  SUBCASE("malformed text") {
    CHECK_THROWS_AS(cli::parse_network("{\"variables\": ["), InvalidInput);
  }
}

TEST_CASE("infer") {
  const std::string net = kFixtures + "/two_node.json";

  SUBCASE("golden exhaustive report") {
    const auto r = run({"infer", "--network", net, "--query", "B", "--algorithm", "exhaustive",
                        "--threads", "1"});
    REQUIRE(r.code == 0);
    CHECK(strip_timing(r.out) == cli::read_file(kFixtures + "/two_node_exhaustive.report.json"));
  }
  SUBCASE("hand-computed bounds for every bounding algorithm") {
    // P(b0) = pA * 0.9 + (1 - pA) * t, pA in [0.2, 0.6], t in {0.3, 0.5}.
    for (const char* alg : {"ar", "ar-plus", "bnb", "exhaustive", "local-search"}) {
      const auto r = run({"infer", "--network", net, "--query", "B", "--algorithm", alg});
      REQUIRE(r.code == 0);
      const auto iv = intervals(r.out);
      CHECK(std::abs(iv[0].first - (0.42)) <= 1e-12);
      CHECK(std::abs(iv[0].second - (0.74)) <= 1e-12);
    }
  }
  SUBCASE("evidence") {
    const auto r = run({"infer", "--network", net, "--query", "A", "--evidence", "B=b0",
                        "--algorithm", "exhaustive"});
    REQUIRE(r.code == 0);
    // P(a0 | b0) = 0.9 p / (0.9 p + t (1 - p)), increasing in p, decreasing in t.
    const auto iv = intervals(r.out);
    CHECK(std::abs(iv[0].first - (0.18 / (0.18 + 0.5 * 0.8))) <= 1e-12);
    CHECK(std::abs(iv[0].second - (0.54 / (0.54 + 0.3 * 0.4))) <= 1e-12);
  }
  SUBCASE("bnb with epsilon 0 matches exhaustive on generated networks") {
    const std::string path = temp_path("bnb_vs_exhaustive.json");
    for (int seed = 0; seed < 15; ++seed) {
      REQUIRE(run({"generate", "--nodes", "6", "--categories", "2..3", "--vertices", "1..3",
                   "--seed", std::to_string(seed), "--output", path})
                  .code == 0);
      const auto g = cli::parse_network_file(path);
      for (const auto& var : g.variables()) {
        const auto a = run({"infer", "--network", path, "--query", var.name, "--algorithm", "bnb",
                            "--epsilon", "0", "--seed", "4"});
        const auto b = run({"infer", "--network", path, "--query", var.name, "--algorithm",
                            "exhaustive"});
        REQUIRE(a.code == 0);
        REQUIRE(b.code == 0);
        CHECK(Json::parse(a.out)["stats"]["mode"] == "exact");
        const auto ia = intervals(a.out), ib = intervals(b.out);
        for (std::size_t k = 0; k < ia.size(); ++k) {
          CHECK(std::abs(ia[k].first - ib[k].first) <= 1e-9);
          CHECK(std::abs(ia[k].second - ib[k].second) <= 1e-9);
        }
      }
    }
  }
  SUBCASE("all-singleton network agrees with the marginal for every algorithm") {
    const std::string path = temp_path("singleton.json");
    REQUIRE(run({"generate", "--nodes", "7", "--categories", "2..4", "--vertices", "1", "--seed",
                 "9", "--output", path})
                .code == 0);
    const auto g = cli::parse_network_file(path);
    const auto m = exact::marginal(g, 3, {});
    for (const char* alg : {"ar", "ar-plus", "local-search", "bnb", "exhaustive"}) {
      const auto r = run({"infer", "--network", path, "--query", "X3", "--algorithm", alg});
      REQUIRE(r.code == 0);
      const auto iv = intervals(r.out);
      for (std::size_t k = 0; k < m.size(); ++k) {
        CHECK(std::abs(iv[k].first - m[k]) <= 1e-9);
        CHECK(std::abs(iv[k].second - m[k]) <= 1e-9);
      }
    }
  }
  SUBCASE("intervals are ordered and inside [0, 1]") {
    const std::string path = temp_path("ordered.json");
    REQUIRE(run({"generate", "--nodes", "8", "--seed", "2", "--output", path}).code == 0);
    for (const char* alg : {"ar", "ar-plus", "local-search", "bnb"}) {
      const auto r = run({"infer", "--network", path, "--query", "X0", "--algorithm", alg,
                          "--evidence", "X1=s0"});
      REQUIRE(r.code == 0);
      for (const auto& [lo, hi] : intervals(r.out)) {
        CHECK(0.0 <= lo);
        CHECK(lo <= hi);
        CHECK(hi <= 1.0);
      }
    }
  }
}

TEST_CASE("exit codes") {
  const std::string net = kFixtures + "/two_node.json";
  CHECK(run({"infer", "--network", net, "--query", "B", "--algorithm", "nosuch"}).code == 1);
  CHECK(run({"infer", "--network", net, "--query", "B"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"infer", "--network", net, "--query", "B", "--algorithm", "ar", "--evidence", "A"})
            .code == 1);
  CHECK(run({"generate", "--categories", "3..2"}).code == 1);
  CHECK(run({"benchmark", "--algorithms", ""}).code == 1);
  CHECK(run({"benchmark", "--algorithms", "ar,nosuch"}).code == 1);

  const auto unknown = run({"infer", "--network", net, "--query", "Q", "--algorithm", "ar"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("Q") != std::string::npos);
  CHECK(run({"infer", "--network", net, "--query", "B", "--algorithm", "ar", "--evidence", "A=a9"})
            .code == 2);
  CHECK(run({"infer", "--network", temp_path("missing.json"), "--query", "B", "--algorithm", "ar"})
            .code == 2);

  // B = b1 is impossible when every B row puts all its mass on b0.
  const std::string zero = temp_path("zero.json");
  auto doc = Json::parse(cli::read_file(net));
  doc["credal_sets"]["B"]["a0"] = Json::array({{1.0, 0.0}});
  doc["credal_sets"]["B"]["a1"] = Json::array({{1.0, 0.0}});
  write(zero, doc.dump());
  for (const char* alg : {"ar", "ar-plus", "local-search", "bnb", "exhaustive"}) {
    CHECK_MESSAGE(run({"infer", "--network", zero, "--query", "A", "--evidence", "B=b1",
                       "--algorithm", alg})
                          .code == 3,
                  alg);
  }

  const std::string big = temp_path("big.json");
  REQUIRE(run({"generate", "--nodes", "30", "--categories", "2", "--vertices", "3", "--seed", "1",
               "--output", big})
              .code == 0);
  // Observing every other variable makes the whole network requisite.
  std::string all;
  for (int v = 1; v < 30; ++v) all += (v > 1 ? ",X" : "X") + std::to_string(v) + "=s0";
  CHECK(run({"infer", "--network", big, "--query", "X0", "--evidence", all, "--algorithm",
             "exhaustive"})
            .code == 4);
}

TEST_CASE("generate") {
  const auto a = run({"generate", "--nodes", "3", "--categories", "2..3", "--vertices", "1..2",
                      "--seed", "1"});
  REQUIRE(a.code == 0);
  CHECK(a.out == cli::read_file(kFixtures + "/generated_n3_s1.json"));
  const auto b = run({"generate", "--nodes", "3", "--categories", "2..3", "--vertices", "1..2",
                      "--seed", "1"});
  CHECK(a.out == b.out);
  CHECK(validate(cli::parse_network(a.out)).ok());

  const auto one = cli::parse_network(run({"generate", "--nodes", "1"}).out);
  CHECK(one.size() == 1);
  CHECK(one.parents(0).empty());
}

TEST_CASE("benchmark") {
  SUBCASE("singleton ensemble has zero error") {
    const auto r = run({"benchmark", "--ensemble-size", "6", "--nodes", "6", "--vertices", "1",
                        "--algorithms", "ar,ar-plus,local-search,bnb", "--seed", "3"});
    REQUIRE(r.code == 0);
    const auto doc = Json::parse(r.out);
    REQUIRE(doc["aggregates"].size() == 4);
    for (const auto& row : doc["aggregates"]) {
      CHECK(row["failed"] == 0);
      CHECK(row["mean_relative_error"].get<double>() <= 1e-9);
      CHECK(row["mean_interval_length"].get<double>() <= 1e-9);
    }
  }
  SUBCASE("same seed, same report") {
    const std::vector<std::string> args{"benchmark", "--ensemble-size", "5", "--nodes", "5",
                                        "--algorithms", "ar,ar-plus,local-search,bnb",
                                        "--evidence-count", "1", "--seed", "8", "--threads", "1"};
    const auto a = run(args), b = run(args);
    REQUIRE(a.code == 0);
    CHECK(strip_timing(a.out) == strip_timing(b.out));
    auto threaded = args;
    threaded.back() = "3";
    const auto c = run(threaded);
    CHECK(strip_timing(a.out) == strip_timing(c.out));
  }
  SUBCASE("default ensemble: A/R+ error column at most A/R") {
    const auto r = run({"benchmark", "--algorithms", "ar,ar-plus", "--seed", "1"});
    REQUIRE(r.code == 0);
    const auto doc = Json::parse(r.out);
    CHECK(doc["sandwich_violations"] == 0);
    CHECK(doc["aggregates"][1]["mean_relative_error"].get<double>() <=
          doc["aggregates"][0]["mean_relative_error"].get<double>() + 1e-12);
  }
}
