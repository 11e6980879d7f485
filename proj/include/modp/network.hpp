#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "modp/json_util.hpp"
#include "modp/metric.hpp"

namespace modp {

struct Terminal {
  Eigen::Vector2d pos;
  int64_t multiplicity;
};

struct NetworkNode {
  Eigen::Vector2d pos;
  bool terminal = false;
  int64_t boundary = 0;  // prescribed multiplicity (terminals), 0 for junctions
};

struct NetworkArc {
  int from = 0;
  int to = 0;
  int64_t multiplicity = 0;
  Polyline path;
  double length = 0.0;  // weighted, multiplicity excluded
  Eigen::Vector2d start_tangent;
  Eigen::Vector2d end_tangent;
};

struct WeightedNetwork {
  int64_t p = 0;
  WeightedMetric metric;
  std::vector<NetworkNode> nodes;
  std::vector<NetworkArc> arcs;
  double mass = 0.0;
  std::vector<int> junctions;             // free nodes with >= 3 arcs
  std::vector<double> balance_residuals;  // per entry of junctions
  std::string topology;
  int topologies_tried = 0;
  int topologies_skipped = 0;
  std::vector<std::string> warnings;

  // Outgoing unit tangents times multiplicity at node v.
  std::vector<Eigen::Vector2d> weighted_tangents(int v) const;
  // Signed multiplicity sum at v (arcs ending minus arcs starting).
  int64_t kirchhoff(int v) const;
};

struct NetworkOptions {
  uint64_t seed = 0;
  int restarts = 3;
  double min_x = 0.0;  // conformal weights: junctions kept at x >= min_x
};

// Minimal-mass network mod p with the given boundary multiplicities.
WeightedNetwork solve_network(const std::vector<Terminal>& terminals, int64_t p, const WeightedMetric& metric,
                              const NetworkOptions& opt = {});

// Mass of the cheapest chain visiting the terminals in the given order
// (consecutive arcs carry the running boundary sum); an upper bound.
double path_network_mass(const std::vector<Terminal>& terminals, int64_t p, const WeightedMetric& metric);

std::vector<Terminal> terminals_from_json(const json& j);
json terminals_to_json(const std::vector<Terminal>& t);
json network_to_json(const WeightedNetwork& n);
WeightedNetwork network_from_json(const json& j);

}  // namespace modp
