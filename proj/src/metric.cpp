#include "modp/metric.hpp"

#include <cmath>

#include "modp/chain.hpp"

namespace modp {

double WeightedMetric::w(const Eigen::Vector2d& q) const {
  switch (kind) {
    case WeightKind::kEuclidean:
      return 1.0;
    case WeightKind::kX:
      return q[0];
    case WeightKind::kSqrtX:
      return std::sqrt(q[0]);
  }
  return 1.0;
}

double WeightedMetric::log_slope(double x) const {
  switch (kind) {
    case WeightKind::kEuclidean:
      return 0.0;
    case WeightKind::kX:
      return 1.0 / x;
    case WeightKind::kSqrtX:
      return 0.5 / x;
  }
  return 0.0;
}

std::string WeightedMetric::name() const {
  switch (kind) {
    case WeightKind::kEuclidean:
      return "euclidean";
    case WeightKind::kX:
      return "x";
    case WeightKind::kSqrtX:
      return "sqrtx";
  }
  return "euclidean";
}

WeightedMetric WeightedMetric::parse(const std::string& name) {
  if (name == "euclidean") return {WeightKind::kEuclidean};
  if (name == "x") return {WeightKind::kX};
  if (name == "sqrtx") return {WeightKind::kSqrtX};
  throw ValidationError("unknown weight '" + name + "' (expected euclidean, x or sqrtx)");
}

namespace {

using State = Eigen::Vector4d;  // x, y, theta, weighted length

State rhs(const State& s, const WeightedMetric& g) {
  const double c = std::cos(s[2]), sn = std::sin(s[2]);
  return State(c, sn, -g.log_slope(s[0]) * sn, g.w(s.head<2>()));
}

}  // namespace

ShotResult geodesic_shoot(const Eigen::Vector2d& start, const Eigen::Vector2d& direction, double length,
                          const WeightedMetric& metric, int steps) {
  if (metric.conformal() && !(start[0] > 0)) throw ValidationError("geodesic start must have x > 0");
  if (!(direction.norm() > 0)) throw ValidationError("geodesic direction must be nonzero");
  if (!(length >= 0)) throw ValidationError("geodesic length must be nonnegative");
  ShotResult out;
  out.path.pts.push_back(start);
  State s(start[0], start[1], std::atan2(direction[1], direction[0]), 0.0);
  out.end_tangent = direction.normalized();
  if (length == 0.0) return out;
  const double h = length / steps;
  const double clairaut0 = metric.w(start) * std::sin(s[2]);
  for (int i = 0; i < steps; ++i) {
    const State k1 = rhs(s, metric);
    const State s2 = s + 0.5 * h * k1;
    const State s3 = s + 0.5 * h * rhs(s2, metric);
    const State s4 = s + h * rhs(s3, metric);
    if (metric.conformal() && (s2[0] <= 0 || s3[0] <= 0 || s4[0] <= 0)) {
      out.path.axis_hit = true;
      break;
    }
    const State k2 = rhs(s2, metric), k3 = rhs(s3, metric), k4 = rhs(s4, metric);
    const State next = s + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (metric.conformal() && next[0] <= 0) {
      out.path.axis_hit = true;
      break;
    }
    s = next;
    out.path.pts.emplace_back(s[0], s[1]);
    out.clairaut_drift = std::max(out.clairaut_drift, std::abs(metric.w(s.head<2>()) * std::sin(s[2]) - clairaut0));
  }
  out.end_tangent = Eigen::Vector2d(std::cos(s[2]), std::sin(s[2]));
  out.weighted_length = s[3];
  return out;
}

double weighted_length(const Polyline& arc, const WeightedMetric& metric) {
  double total = 0.0;
  for (std::size_t i = 1; i < arc.pts.size(); ++i) {
    const Eigen::Vector2d& a = arc.pts[i - 1];
    const Eigen::Vector2d& b = arc.pts[i];
    const double len = (b - a).norm();
    total += len / 6 * (metric.w(a) + 4 * metric.w(0.5 * (a + b)) + metric.w(b));
  }
  return total;
}

GeodesicArc geodesic_between(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const WeightedMetric& metric,
                             ShootingGuess* guess) {
  GeodesicArc arc;
  const Eigen::Vector2d d = b - a;
  const double dist = d.norm();
  if (!metric.conformal() || dist == 0.0) {
    arc.path.pts = {a, b};
    arc.length = metric.conformal() ? 0.0 : dist;
    arc.start_tangent = arc.end_tangent = dist > 0 ? Eigen::Vector2d(d / dist) : Eigen::Vector2d(1, 0);
    return arc;
  }
  if (!(a[0] > 0 && b[0] > 0)) throw ValidationError("geodesic endpoints must have x > 0");
  // Damped Newton on (theta, L) with the end point as residual; d end / d L is the end tangent.
  const double tol = 1e-12 * std::max(1.0, dist);
  double theta = std::atan2(d[1], d[0]);
  double L = dist;
  const auto shoot = [&](double th, double len) {
    return geodesic_shoot(a, Eigen::Vector2d(std::cos(th), std::sin(th)), len, metric);
  };
  ShotResult s = shoot(theta, L);
  double res = s.path.axis_hit ? INFINITY : (s.path.pts.back() - b).norm();
  if (guess && guess->valid && guess->length > 0) {
    ShotResult g = shoot(guess->theta, guess->length);
    const double rg = g.path.axis_hit ? INFINITY : (g.path.pts.back() - b).norm();
    if (rg < res) {
      theta = guess->theta;
      L = guess->length;
      s = std::move(g);
      res = rg;
    }
  }
  if (!std::isfinite(res)) throw SolverError("geodesic shooting did not converge");
  for (int it = 0; it < 60 && res >= tol; ++it) {
    const double dt = 1e-7;
    const ShotResult sp = shoot(theta + dt, L);
    const ShotResult sm = shoot(theta - dt, L);
    if (sp.path.axis_hit || sm.path.axis_hit) break;
    Eigen::Matrix2d J;
    J.col(0) = (sp.path.pts.back() - sm.path.pts.back()) / (2 * dt);
    J.col(1) = s.end_tangent;
    Eigen::Vector2d step = J.partialPivLu().solve(b - s.path.pts.back());
    if (!step.allFinite()) break;
    step *= std::min(1.0, 0.5 / std::max(std::abs(step[0]), 1e-300));
    bool moved = false;
    for (double t = 1.0; t > 1e-6; t *= 0.5) {
      const double nt = theta + t * step[0], nl = L + t * step[1];
      if (nl <= 0) continue;
      ShotResult sn = shoot(nt, nl);
      if (sn.path.axis_hit) continue;
      const double rn = (sn.path.pts.back() - b).norm();
      if (rn < res) {
        theta = nt;
        L = nl;
        s = std::move(sn);
        res = rn;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (res < 1e-10 * std::max(1.0, dist)) {
    arc.path = s.path;
    arc.path.pts.back() = b;
    arc.length = s.weighted_length;
    arc.start_tangent = Eigen::Vector2d(std::cos(theta), std::sin(theta));
    arc.end_tangent = s.end_tangent;
    if (guess) *guess = {theta, L, true};
    return arc;
  }
  throw SolverError("geodesic shooting did not converge");
}

}  // namespace modp
