#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "modp/chain.hpp"
#include "modp/json_util.hpp"

namespace modp {

// Rays t v_i, t >= 0, in the plane with multiplicities kappa_i and
// orientation signs (+1 outward from 0, -1 inward).
struct RayConfiguration {
  std::vector<Eigen::Vector2d> dirs;
  std::vector<int64_t> kappa;
  std::vector<int> signs;
  int64_t p = 0;

  void validate() const;
  int64_t total() const;
};

struct StructureReport {
  bool balanced = false;
  bool sum_is_p = false;
  bool multiplicity_bounds = false;
  bool at_least_three = false;
  bool consistent_signs = false;
  double balance_residual = 0.0;
  int64_t total_multiplicity = 0;

  bool all() const {
    return balanced && sum_is_p && multiplicity_bounds && at_least_three && consistent_signs;
  }
  std::vector<std::string> failures() const;
};

StructureReport check_structure(const RayConfiguration& cfg);

struct Segment {
  Eigen::Vector2d from;
  Eigen::Vector2d to;
  int64_t multiplicity;
};

struct CompetitorCertificate {
  std::string kind;
  std::vector<std::size_t> replaced_rays;
  std::vector<Segment> added_segments;
  double mass_change = 0.0;
  // barycenter kind only
  std::vector<int64_t> m_plus;
  Eigen::Vector2d z = Eigen::Vector2d::Zero();
  Eigen::Vector2d barycenter = Eigen::Vector2d::Zero();
  double barycenter_mass_change = 0.0;
};

// Rays i and j must carry opposite signs and not be antipodal.
CompetitorCertificate segment_swap_certificate(const RayConfiguration& cfg, std::size_t i, std::size_t j);

// Picks m+ greedily in decreasing kappa among rays with v . normal > 0 and
// joins them to the weighted Fermat point z of the chosen endpoints.
CompetitorCertificate barycenter_certificate(const RayConfiguration& cfg, const Eigen::Vector2d& normal);

// A normal whose open half-plane holds multiplicity >= p with no ray on its
// boundary line; throws when none exists.
Eigen::Vector2d find_heavy_hemisphere(const RayConfiguration& cfg);

// Minimizer of sum w_j |x_j - y| (vertex test, then Weiszfeld).
Eigen::Vector2d weighted_fermat_point(const std::vector<Eigen::Vector2d>& pts, const std::vector<double>& w);

RayConfiguration rays_from_json(const json& j);
json rays_to_json(const RayConfiguration& cfg);
json structure_to_json(const StructureReport& r);
json certificate_to_json(const CompetitorCertificate& c);

}  // namespace modp
