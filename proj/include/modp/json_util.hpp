#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "modp/chain.hpp"

namespace modp {

using json = nlohmann::json;

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);
void write_text_file(const std::string& path, const std::string& text);

// %.17g, the CSV float format.
std::string format_double(double x);
std::vector<double> parse_double_list(const std::string& text);

json vec_to_json(const Vec& v);
Vec vec_from_json(const json& j);

}  // namespace modp
