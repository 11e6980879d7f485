#pragma once

#include <vector>

#include <Eigen/Dense>

#include "modp/chain.hpp"
#include "modp/json_util.hpp"

namespace modp {

// Weighted point cloud standing in for the mass measure of an m-dimensional
// current. Tangent planes are optional; points share them through plane_index.
struct VarifoldSample {
  int m = 0;
  Eigen::MatrixXd points;  // dim x N
  Eigen::VectorXd weights;
  double delta = 0.0;
  std::vector<Eigen::MatrixXd> planes;  // orthonormal dim x m bases
  std::vector<int> plane_index;

  int dim() const { return static_cast<int>(points.rows()); }
  std::size_t size() const { return static_cast<std::size_t>(points.cols()); }
  bool has_tangents() const { return !plane_index.empty(); }
  const Eigen::MatrixXd& tangent(std::size_t j) const { return planes[plane_index[j]]; }
  double total_weight() const { return weights.sum(); }

  void validate() const;
  // Push-forward under x -> lambda x: weights scale by lambda^m.
  VarifoldSample dilated(double lambda) const;
  VarifoldSample translated(const Vec& shift) const;
  void append(const VarifoldSample& other);
};

// Polar quadrature of the half-disk {t u + s e : t >= 0, |.| < R} (m = 2) or the
// segment {t u : 0 <= t < R} (m = 1, e empty), times the multiplicity factor.
// Points of ring k sit strictly inside [k delta, (k+1) delta), so the sampled
// mass of any ball about the origin with radius a multiple of delta is exact.
VarifoldSample sample_half_plane(const Vec& u, const Eigen::MatrixXd& spine, double R, double delta,
                                 double factor);

// Polar quadrature of the flat m-disk c + span(basis) of radius R, m in {1, 2}.
VarifoldSample sample_disk(const Vec& center, const Eigen::MatrixXd& basis, double R, double delta);

json sample_to_json(const VarifoldSample& s);
VarifoldSample sample_from_json(const json& j);

double unit_ball_volume(int m);

}  // namespace modp
