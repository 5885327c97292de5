#include "network_io.hpp"

#include <credal/error.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

namespace credal::cli {
namespace {

[[noreturn]] void fail(const std::string& what) { throw InvalidInput(what); }

const Json& member(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where + ": missing \"" + key + "\"");
  return *it;
}

std::vector<std::string> string_list(const Json& arr, const std::string& where) {
  if (!arr.is_array()) fail(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& s : arr) {
    if (!s.is_string()) fail(where + ": expected an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

}  // namespace

std::string config_key(const CredalNetwork& net, std::size_t v, std::size_t cfg) {
  const auto states = net.decode_config(v, cfg);
  const auto& parents = net.parents(v);
  std::string key;
  for (std::size_t k = 0; k < parents.size(); ++k) {
    if (k > 0) key += '-';
    key += net.variable(parents[k]).categories[states[k]];
  }
  return key;
}

CredalNetwork parse_network(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(std::string("malformed network document: ") + e.what());
  }
  if (!doc.is_object()) fail("network document: expected an object");

  const Json& vars = member(doc, "variables", "network document");
  if (!vars.is_array() || vars.empty()) fail("variables: expected a non-empty array");

  std::vector<Variable> variables;
  std::vector<std::vector<std::string>> parent_names;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::string where = "variables[" + std::to_string(i) + "]";
    const Json& v = vars[i];
    if (!v.is_object()) fail(where + ": expected an object");
    const Json& name = member(v, "name", where);
    if (!name.is_string()) fail(where + ".name: expected a string");
    Variable var{name.get<std::string>(), string_list(member(v, "categories", where), where + ".categories")};
    if (var.categories.empty()) fail("variable " + var.name + ": no categories");
    if (!index.emplace(var.name, i).second) fail("variable " + var.name + ": duplicate name");
    parent_names.push_back(v.contains("parents") ? string_list(v["parents"], where + ".parents")
                                                 : std::vector<std::string>{});
    variables.push_back(std::move(var));
  }

  std::vector<ConditionalCredalTable> tables(variables.size());
  for (std::size_t i = 0; i < variables.size(); ++i) {
    tables[i].child = i;
    for (const auto& p : parent_names[i]) {
      const auto it = index.find(p);
      if (it == index.end()) fail("variable " + variables[i].name + ": unknown parent " + p);
      tables[i].parents.push_back(it->second);
    }
    std::size_t configs = 1;
    for (std::size_t p : tables[i].parents) configs *= variables[p].cardinality();
    tables[i].vertices.resize(configs);
  }
  // Vertex lists are filled below; a placeholder network gives config keys.
  const CredalNetwork shape(variables, tables);

  const Json& sets = member(doc, "credal_sets", "network document");
  if (!sets.is_object()) fail("credal_sets: expected an object keyed by variable name");
  for (auto it = sets.begin(); it != sets.end(); ++it) {
    if (!index.count(it.key())) fail("credal_sets: unknown variable " + it.key());
  }
  for (std::size_t i = 0; i < variables.size(); ++i) {
    const std::string& vname = variables[i].name;
    const auto vit = sets.find(vname);
    if (vit == sets.end()) fail("credal_sets: missing variable " + vname);
    if (!vit->is_object()) fail("credal_sets." + vname + ": expected an object keyed by configuration");
    std::map<std::string, std::size_t> keys;
    for (std::size_t c = 0; c < tables[i].vertices.size(); ++c) {
      const std::string key = config_key(shape, i, c);
      if (!keys.emplace(key, c).second) {
        fail("variable " + vname + ": configuration key \"" + key + "\" is ambiguous");
      }
    }
    for (auto cit = vit->begin(); cit != vit->end(); ++cit) {
      if (!keys.count(cit.key())) {
        fail("variable " + vname + ": unknown configuration \"" + cit.key() + "\"");
      }
    }
    for (const auto& [key, c] : keys) {
      const std::string where = "variable " + vname + ", configuration \"" + key + "\"";
      const auto cit = vit->find(key);
      if (cit == vit->end()) fail(where + ": missing");
      if (!cit->is_array() || cit->empty()) fail(where + ": expected a non-empty array of rows");
      for (std::size_t r = 0; r < cit->size(); ++r) {
        const std::string rwhere = where + ", row " + std::to_string(r);
        const Json& row = (*cit)[r];
        if (!row.is_array() || row.size() != variables[i].cardinality()) {
          fail(rwhere + ": expected " + std::to_string(variables[i].cardinality()) + " numbers");
        }
        Distribution d;
        double sum = 0.0;
        for (const auto& x : row) {
          if (!x.is_number()) fail(rwhere + ": expected numbers");
          const double value = x.get<double>();
          if (!std::isfinite(value) || value < 0.0) fail(rwhere + ": negative or non-finite entry");
          d.push_back(value);
          sum += value;
        }
        if (std::abs(sum - 1.0) > kNormalizationTolerance) {
          std::ostringstream os;
          os.precision(17);
          os << rwhere << ": entries sum to " << sum << ", not 1";
          fail(os.str());
        }
        auto& list = tables[i].vertices[c];
        if (std::find(list.begin(), list.end(), d) == list.end()) list.push_back(std::move(d));
      }
    }
  }

  CredalNetwork net(std::move(variables), std::move(tables));
  const auto report = validate(net);
  if (!report) fail("invalid network: " + report.message);
  return net;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

CredalNetwork parse_network_file(const std::string& path) { return parse_network(read_file(path)); }

Json network_to_json(const CredalNetwork& net) {
  Json vars = Json::array();
  Json sets = Json::object();
  for (std::size_t v = 0; v < net.size(); ++v) {
    Json parents = Json::array();
    for (std::size_t p : net.parents(v)) parents.push_back(net.variable(p).name);
    vars.push_back(Json{{"name", net.variable(v).name},
                        {"categories", net.variable(v).categories},
                        {"parents", parents}});
    Json configs = Json::object();
    for (std::size_t c = 0; c < net.config_count(v); ++c) {
      configs[config_key(net, v, c)] = net.vertices({v, c});
    }
    sets[net.variable(v).name] = std::move(configs);
  }
  return Json{{"variables", vars}, {"credal_sets", sets}};
}

std::string serialize_network(const CredalNetwork& net) { return network_to_json(net).dump(2) + "\n"; }

}  // namespace credal::cli
