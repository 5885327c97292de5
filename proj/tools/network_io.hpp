#pragma once

#include <credal/model.hpp>

#include <json.hpp>

#include <string>
#include <string_view>

namespace credal::cli {

using Json = nlohmann::ordered_json;

// Hyphen-joined parent category labels of configuration `cfg` ("" for roots).
std::string config_key(const CredalNetwork& net, std::size_t v, std::size_t cfg);

// Parses and validates a network document. Rows that are exactly equal
// within one configuration are kept once. Throws InvalidInput with a message
// naming the offending field, configuration or row.
CredalNetwork parse_network(std::string_view text);
CredalNetwork parse_network_file(const std::string& path);

Json network_to_json(const CredalNetwork& net);
// Two-space indented document with a trailing newline.
std::string serialize_network(const CredalNetwork& net);

std::string read_file(const std::string& path);

}  // namespace credal::cli
