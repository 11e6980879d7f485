#pragma once

#include <functional>
#include <vector>

#include "modp/books.hpp"
#include "modp/json_util.hpp"
#include "modp/sample.hpp"

namespace modp {

// Theta(q, r) for each radius; radii must be positive and increasing.
std::vector<double> density_profile(const VarifoldSample& T, const Vec& q, const std::vector<double>& radii);
bool profile_nondecreasing(const std::vector<double>& profile, double tol);

// g(q) = |q|^k ghat(q / |q|) about the report center.
struct HomogeneousFunction {
  int k = 1;
  std::function<double(const Vec& unit)> ghat;
  double ghat_sup = 1.0;

  double value(const Vec& q) const;
  Vec gradient(const Vec& q) const;  // central differences
};

using MeanCurvature = std::function<Vec(const Vec& q)>;

struct MonotonicityReport {
  Vec center;
  std::vector<double> radii;
  std::vector<double> density;
  int k = 1;
  double alpha = 0.0;
  double R1 = 0.0;
  double lhs = 0.0;
  double rhs_main = 0.0;       // (m+2k) R1^-(m+2k-alpha) int g^2
  double rhs_perp = 0.0;       // 2/alpha int |grad g|^2 |q_perp|^2 / |q|^(m+2k-alpha)
  double rhs_curvature = 0.0;  // A ghat_sup^2 ||T||(B) / R1^(m-alpha), with unit constant
  double rhs = 0.0;
  double residual = 0.0;  // lhs - rhs
  double tol = 0.0;       // 3 delta ||T||(B_R1)
  double A_hat = 0.0;
  bool holds = false;
};

MonotonicityReport weighted_monotonicity_check(const VarifoldSample& T, const Vec& center,
                                               const HomogeneousFunction& g, double alpha, double R1,
                                               double A_hat = 0.0, const std::vector<double>& radii = {});

// Nonnegative C^1 profile f with derivative.
struct RadialProfile {
  std::function<double(double)> f;
  std::function<double(double)> fprime;

  static RadialProfile constant(double c);
  // 1 on [0, a], 0 on [b, inf), C^1 cubic in between.
  static RadialProfile smooth_cutoff(double a, double b);
};

struct ConeComparisonReport {
  double R1 = 0.0;
  double cone_term = 0.0;  // int f(|q|) d||C||
  double mass_term = 0.0;  // int f(|q|) d||T||
  double perp_term = 0.0;  // m int F |q_perp|^2 / |q|^(m+2) d||T||
  double lhs = 0.0;
  double rhs = 0.0;  // -int F q_perp . H / |q|^m d||T||
  double F0 = 0.0;   // F(0)
  double theta_T = 0.0;
  double theta_C = 0.0;
  double tol = 0.0;
  bool holds = false;
};

// F(t) = -int_t^R1 f'(s) s^m ds, tabulated by composite Simpson and read back
// with cubic Hermite interpolation.
class PrimitiveF {
 public:
  PrimitiveF(const RadialProfile& f, int m, double R1, int intervals = 4096);
  double operator()(double t) const;
  bool identically_zero() const { return zero_; }

 private:
  double R1_;
  std::vector<double> table_;
  std::vector<double> slope_;  // F'(t) = f'(t) t^m at the nodes
  bool zero_ = true;
};

ConeComparisonReport cone_comparison_check(const VarifoldSample& T, const VarifoldSample& C, const Vec& center,
                                           const RadialProfile& f, double R1, const MeanCurvature& H = nullptr);

// Raw integrals with no pass/fail threshold.
struct RawDiagnostics {
  double hardt_simon = 0.0;       // int_B1 dist^2(q - q0, S) / |q - q0|^(m + 7/4)
  double reverse_poincare = 0.0;  // int_B(11/6) |p_V p_Tperp|^2 + |q_perp|^2 / |q|^(m+2)
};

RawDiagnostics raw_diagnostics(const VarifoldSample& T, const OpenBook& S, const Vec& q0);

json monotonicity_to_json(const MonotonicityReport& r);
json cone_comparison_to_json(const ConeComparisonReport& r);
std::string monotonicity_to_csv(const MonotonicityReport& r);

}  // namespace modp
