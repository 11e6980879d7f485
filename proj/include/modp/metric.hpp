#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace modp {

// Conformal weights on the half-plane {x > 0}: length = integral of w ds.
enum class WeightKind { kEuclidean, kX, kSqrtX };

struct WeightedMetric {
  WeightKind kind = WeightKind::kEuclidean;

  double w(const Eigen::Vector2d& q) const;
  // w'(x) / w(x); the weights depend on x only.
  double log_slope(double x) const;
  bool conformal() const { return kind != WeightKind::kEuclidean; }
  std::string name() const;
  static WeightedMetric parse(const std::string& name);
};

struct Polyline {
  std::vector<Eigen::Vector2d> pts;
  bool axis_hit = false;
};

struct ShotResult {
  Polyline path;
  Eigen::Vector2d end_tangent = Eigen::Vector2d::Zero();
  double weighted_length = 0.0;  // integrated alongside the geodesic
  double clairaut_drift = 0.0;   // max |w tau_y - w0 tau_y0|
};

// RK4 on (x, y, theta, l) in Euclidean arclength with steps length / steps.
ShotResult geodesic_shoot(const Eigen::Vector2d& start, const Eigen::Vector2d& direction, double length,
                          const WeightedMetric& metric, int steps = 2048);

// Composite Simpson on each polyline segment.
double weighted_length(const Polyline& arc, const WeightedMetric& metric);

struct GeodesicArc {
  Polyline path;
  double length = 0.0;  // weighted
  Eigen::Vector2d start_tangent;
  Eigen::Vector2d end_tangent;
};

// Shooting parameters; a converged pair seeds nearby solves.
struct ShootingGuess {
  double theta = 0.0;
  double length = 0.0;
  bool valid = false;
};

// Geodesic from a to b by shooting on (initial angle, Euclidean length).
// Throws SolverError when the shooting does not converge.
GeodesicArc geodesic_between(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const WeightedMetric& metric,
                             ShootingGuess* guess = nullptr);

}  // namespace modp
