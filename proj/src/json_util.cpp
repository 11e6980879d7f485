#include "modp/json_util.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace modp {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("not a number: '" + item + "'");
    }
  }
  return out;
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& j) {
  if (!j.is_array()) throw ValidationError("expected a numeric array");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ValidationError("expected a numeric array");
    v[i] = j[i].get<double>();
  }
  return v;
}

}  // namespace modp
