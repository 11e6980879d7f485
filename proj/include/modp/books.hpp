#pragma once

#include <vector>

#include <Eigen/Dense>

#include "modp/chain.hpp"
#include "modp/json_util.hpp"
#include "modp/sample.hpp"

namespace modp {

// S = S' x V with the half-lines of S' in the 2-plane spanned by plane.col(0),
// plane.col(1). Page i is the direction at angles[i] in that basis.
struct OpenBook {
  int m = 0;
  int n = 0;
  Eigen::MatrixXd spine;  // dim x (m-1), orthonormal
  Eigen::MatrixXd plane;  // dim x 2, orthonormal, orthogonal to the spine
  std::vector<double> angles;

  int dim() const { return m + n; }
  std::size_t pages() const { return angles.size(); }
  Eigen::Vector2d page(std::size_t i) const;
  Vec page_vector(std::size_t i) const;

  // Standard orthonormal completion: the first two coordinate vectors that
  // survive Gram-Schmidt against the spine.
  static Eigen::MatrixXd default_plane(const Eigen::MatrixXd& spine, int dim);
  // Normalizes the directions and validates everything.
  static OpenBook make(int m, int n, const Eigen::MatrixXd& spine, const Eigen::MatrixXd& plane,
                       const std::vector<Eigen::Vector2d>& dirs);
  void validate() const;
  bool nonflat() const;
};

struct ConeModP {
  OpenBook book;
  std::vector<int64_t> kappa;
  int64_t p = 0;

  void validate() const;
  int64_t total_multiplicity() const;
};

double min_opening_angle(const OpenBook& S);

double dist2_to_book(const Vec& q, const OpenBook& S);
double dist_to_book(const Vec& q, const OpenBook& S);

// R^-(m+2) times the weighted sum of dist^2(x - q, S) over sample points in B_R(q).
double excess(const VarifoldSample& T, const OpenBook& S, const Vec& q, double R);
double excess_serial(const VarifoldSample& T, const OpenBook& S, const Vec& q, double R);

// Sample mass of B_r(q) over omega_m r^m.
double density_ratio(const VarifoldSample& T, const Vec& q, double r);

struct CoherenceResult {
  double value = 0.0;
  double rotation = 0.0;  // rotation angle of O in the plane of C0
  double max_page_angle = 0.0;
  std::vector<int> grouping;  // page j of C sits on page grouping[j] of C0
};

// Minimizes |O - Id| + max page angle over rotations O of the page plane that
// fix the spine and over admissible groupings. With allow_rotation false only
// O = Id is tried. Ties go to the smallest |rotation|.
CoherenceResult coherence_angle(const ConeModP& C, const ConeModP& C0, bool allow_rotation = true);

// F(q) = (F'(x), y) for q = (x, y) in V^perp x V, with the cubic smoothstep cutoff.
Vec retract_to_book(const Vec& q, const OpenBook& S, double rho);

// Samples of the book pages in B_R(0), page i weighted by factors[i].
VarifoldSample sample_book(const OpenBook& S, const std::vector<double>& factors, double R, double delta);
VarifoldSample sample_cone(const ConeModP& C, double R, double delta);

OpenBook rotated_about_spine(const OpenBook& S, double angle);

json book_to_json(const ConeModP& C);
ConeModP cone_from_json(const json& j);
// Pages without "kappa" default to 1; no validation of the mod p constraints.
OpenBook book_from_json(const json& j);

}  // namespace modp
