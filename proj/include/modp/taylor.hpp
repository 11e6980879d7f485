#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "modp/books.hpp"
#include "modp/json_util.hpp"
#include "modp/metric.hpp"
#include "modp/network.hpp"
#include "modp/sample.hpp"

namespace modp {

// Junction of the generator network; revolves to a circle of radius pos.x at height pos.y.
struct SingularCircle {
  Eigen::Vector2d pos;
  int node = -1;
  std::vector<Eigen::Vector2d> tangents;  // outgoing unit tangents
  std::vector<int64_t> multiplicities;
  double balance_residual = 0.0;
  double max_angle_error_deg = 0.0;  // largest deviation of a pairwise angle from 120 (degree 3 only)
};

// Surface of revolution of a half-plane network about the y axis. The
// half-plane point (x, y) at angle phi sits at (x cos phi, x sin phi, y).
struct RevolvedCurrent {
  int64_t p = 0;
  double radius = 1.0;
  std::vector<double> angles_deg;
  WeightedNetwork generator;
  double delta = 0.0;
  VarifoldSample sample;
  std::vector<SingularCircle> circles;
};

struct TaylorOptions {
  double delta = 0.005;  // quadrature cell size of the revolved sample
  NetworkOptions network;
};

// Samples the surface of revolution: cells of arclength at most delta along
// each arc, about 2 pi x / delta angular cells, weight kappa 2 pi x ds / n_phi.
VarifoldSample revolve_network(const WeightedNetwork& net, double delta);

std::vector<SingularCircle> singular_circles(const WeightedNetwork& net);

// Smallest residual of a single geodesic through every point: for each pair
// the connecting geodesic is extended both ways and the largest distance of the
// remaining points to it is taken. Infinite when no connecting geodesic exists.
double single_geodesic_residual(const std::vector<Eigen::Vector2d>& pts, const WeightedMetric& metric);

RevolvedCurrent build_taylor_example(int64_t p, const std::vector<double>& angles_deg, double radius,
                                     const WeightedMetric& metric, const TaylorOptions& opt = {});

// Point of circle c at angle phi, and the tangent open book there
// (pages: junction tangents swept along the circle direction).
Vec circle_point(const SingularCircle& c, double phi);
OpenBook tangent_book(const SingularCircle& c, double phi);

// Index of the circle through q; throws when q is not within tol of any.
int circle_through(const RevolvedCurrent& R, const Vec& q, double tol = 1e-6);

struct MeshCrossCheck {
  double network_mass = 0.0;
  double mesh_mass = 0.0;
  double h = 0.0;
  std::size_t edges = 0;
};

// Graph Plateau mod p on a half-disk stencil graph with the metric's edge lengths.
MeshCrossCheck taylor_mesh_crosscheck(const RevolvedCurrent& R, double h);

struct DecayRow {
  double r = 0.0;
  double excess = 0.0;
  double flat_distance = 0.0;
};

struct DecayScan {
  std::vector<DecayRow> rows;
  double fitted_C = 0.0;       // excess bound constant from the two largest radii
  double fitted_C_flat = 0.0;  // same for the flat ladder
  double excess_rate = 0.0;    // least squares slope of log excess against log r
  bool monotone = false;
  bool excess_bound_holds = false;
  bool flat_monotone = false;
  bool flat_bound_holds = false;
};

struct DecayOptions {
  bool flat = true;
  double flat_h = 0.1;        // disk mesh size of the rescaled cross-section
  double strip_width = 0.12;  // half-width of the strip around the tangent cone
};

// Excess against S at q over the radii (any sample); parallel over radii.
std::vector<double> excess_ladder(const VarifoldSample& T, const OpenBook& S, const Vec& q,
                                  const std::vector<double>& radii);

// Flat distance mod p between the generator rescaled about the junction by 1/r
// and its tangent cone, both projected onto a strip subcomplex of a disk mesh.
double cross_section_flat_distance(const WeightedNetwork& net, const SingularCircle& c, double r,
                                   const DecayOptions& opt);

DecayScan decay_scan(const RevolvedCurrent& R, const Vec& q, const std::vector<double>& radii,
                     const DecayOptions& opt = {});

// Bound constants: ratio(r) = value(r) / value(r0) / (r / r0)^alpha over the
// rungs, C = max(1, ratio at the second rung).
double fit_decay_constant(const std::vector<double>& radii, const std::vector<double>& values, double alpha);

json revolved_to_json(const RevolvedCurrent& R);
// Regenerates the sample from the stored generator and delta.
RevolvedCurrent revolved_from_json(const json& j);
json decay_to_json(const DecayScan& d);
std::string decay_to_csv(const DecayScan& d);

}  // namespace modp
