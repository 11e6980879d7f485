#include "modp/complex_io.hpp"

#include <string>

namespace modp {

SimplicialComplex complex_from_json(const json& j) {
  if (!j.contains("vertices")) throw ValidationError("complex: missing 'vertices'");
  std::vector<Vec> verts;
  for (const json& v : j.at("vertices")) verts.push_back(vec_from_json(v));
  std::vector<std::vector<Simplex>> by_degree(1);
  if (j.contains("simplices")) {
    for (const auto& [key, list] : j.at("simplices").items()) {
      int k = 0;
      try {
        k = std::stoi(key);
      } catch (const std::exception&) {
        throw ValidationError("complex: bad degree key '" + key + "'");
      }
      if (k < 1 || k > 4) throw ValidationError("complex: degree out of range");
      if (static_cast<int>(by_degree.size()) <= k) by_degree.resize(k + 1);
      for (const json& s : list) by_degree[k].push_back(s.get<Simplex>());
    }
  }
  return SimplicialComplex(std::move(verts), std::move(by_degree));
}

json complex_to_json(const SimplicialComplex& K) {
  json j;
  j["vertices"] = json::array();
  for (const Vec& v : K.vertices()) j["vertices"].push_back(vec_to_json(v));
  j["simplices"] = json::object();
  for (int k = 1; k <= K.top_degree(); ++k) {
    json list = json::array();
    for (std::size_t i = 0; i < K.count(k); ++i) list.push_back(K.simplex(k, i));
    j["simplices"][std::to_string(k)] = list;
  }
  return j;
}

IntegerChain chain_from_json(const json& j) {
  try {
    IntegerChain c(j.at("degree").get<int>());
    for (const auto& [key, v] : j.at("coeffs").items()) {
      c.add(std::stoul(key), v.get<int64_t>());
    }
    return c;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("chain: ") + e.what());
  } catch (const std::logic_error& e) {
    throw ValidationError(std::string("chain: bad index ") + e.what());
  }
}

json chain_to_json(const IntegerChain& c) {
  json j;
  j["degree"] = c.degree();
  j["coeffs"] = json::object();
  for (const auto& [i, v] : c.coeffs()) j["coeffs"][std::to_string(i)] = v;
  return j;
}

Region region_from_json(const SimplicialComplex& K, const json& j) {
  const bool closure = j.value("closure", false);
  Region r = Region::empty(K);
  int top = -1;
  for (const auto& [key, list] : j.at("simplices").items()) {
    const int k = std::stoi(key);
    if (k < 0 || k > K.top_degree()) throw ValidationError("region: degree out of range");
    top = std::max(top, k);
    for (const json& idx : list) {
      const auto i = idx.get<std::size_t>();
      if (i >= K.count(k)) throw ValidationError("region: index out of range");
      (*r.member[k])[i] = true;
    }
  }
  if (closure && top >= 0) {
    std::vector<std::size_t> tops;
    for (std::size_t i = 0; i < K.count(top); ++i) {
      if ((*r.member[top])[i]) tops.push_back(i);
    }
    Region c = Region::closure_of(K, top, tops);
    for (int k = 0; k <= K.top_degree(); ++k) {
      for (std::size_t i = 0; i < K.count(k); ++i) {
        if ((*c.member[k])[i]) (*r.member[k])[i] = true;
      }
    }
  }
  return r;
}

}  // namespace modp
