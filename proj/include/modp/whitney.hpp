#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "modp/books.hpp"
#include "modp/chain.hpp"
#include "modp/json_util.hpp"

namespace modp {

// Cube of layer k in [0,2] x [-2,2]^(m-1), side 2^-(k+M). All coordinates are
// integers over the common denominator 2^(k+M):
//   t in [2^M + row, 2^M + row + 1], y_i in [j_i - 2^(k+M+1), j_i - 2^(k+M+1) + 1].
struct WhitneyCube {
  int k = 0;
  int64_t row = 0;
  std::vector<int64_t> j;

  bool operator<(const WhitneyCube& o) const;
  bool operator==(const WhitneyCube& o) const;
};

class WhitneyDecomposition {
 public:
  WhitneyDecomposition(int m, int M, int depth);

  int m() const { return m_; }
  int M() const { return M_; }
  int depth() const { return depth_; }

  int exponent(int k) const { return k + M_; }
  int64_t rows() const { return int64_t{1} << M_; }
  int64_t positions(int k) const { return int64_t{1} << (k + M_ + 2); }  // per y coordinate
  // 2^(mM) 2^((m-1)(k+2)), as a double to survive large m.
  double layer_count(int k) const;
  std::vector<WhitneyCube> layer(int k) const;  // enumerates; small layers only

  double side(const WhitneyCube& Q) const;
  double diameter(const WhitneyCube& Q) const;
  double t_center(const WhitneyCube& Q) const;
  Vec y_center(const WhitneyCube& Q) const;
  Vec y_center(int k, const std::vector<int64_t>& j) const;
  double min_dist_to_spine(const WhitneyCube& Q) const;
  double max_dist_to_spine(const WhitneyCube& Q) const;
  // Both inequalities of the distance/diameter comparison, decided in integers.
  bool dist_diam_holds(const WhitneyCube& Q) const;

  bool valid(const WhitneyCube& Q) const;
  // p_V(Q) is contained in p_V(Q2).
  bool is_below(const WhitneyCube& Q, const WhitneyCube& Q2) const;
  bool in_top_sublayer(const WhitneyCube& Q) const { return Q.k == 0 && Q.row == rows() - 1; }
  // Next cube up the column; Q must not be in the top sub-layer.
  WhitneyCube immediately_above(const WhitneyCube& Q) const;

 private:
  int m_, M_, depth_;
};

using ExcessOracle = std::function<double(const Vec& y, double radius)>;

// Membership depends on (layer, projection) only; it is stored per shadow.
struct WhitneyDomain {
  const WhitneyDecomposition* D = nullptr;
  double tau = 0.0;
  double Mbar = 0.0;
  std::vector<std::map<std::vector<int64_t>, double>> excess;  // per layer, per shadow
  std::vector<std::map<std::vector<int64_t>, bool>> member;

  bool contains(const WhitneyCube& Q) const;
  std::size_t size() const;  // number of member cubes
  std::vector<WhitneyCube> cubes() const;
};

// Excess of T against S at origin + scale * spine * y with radius scale * r.
// The spine of S spans V; T and S must outlive the oracle.
ExcessOracle sample_excess_oracle(const VarifoldSample& T, const OpenBook& S, const Vec& origin, double scale);

WhitneyDomain whitney_domain(const ExcessOracle& oracle, double tau, const WhitneyDecomposition& D);

// rho_W(y) = inf{t : (t, y) in the union of member cubes}; 2 when none.
double rho_W(const WhitneyDomain& W, const Vec& y);
// x_norm is the distance |x| to the spine.
bool in_graphicality_region(const WhitneyDomain& W, double x_norm, const Vec& y);

struct SelectionReport {
  int kappa0 = 0;
  WhitneyCube top;
  std::map<WhitneyCube, std::vector<WhitneyCube>> phi;    // phi[Q0][s], s = 0..kappa0
  std::map<WhitneyCube, std::vector<WhitneyCube>> chain;  // W(Q0) from Q0 to the top cube
  bool p1 = true;
  bool p2 = true;
  bool p3 = true;  // at every s where hbar(phi(s)) != hbar(phi(s+1))
  // sum over Q0 with phi(Q0, s) = Q for some s of (d_Q0 / d_Q)^(m+2)
  std::map<WhitneyCube, double> tail_sum;
  double worst_ratio = 0.0;  // max of tail_sum / bound
  bool bound_holds = true;
  double bound_below_top = 0.0;  // 2^M (same column) + 2^M / 7
  double bound_top = 0.0;        // 8/7 2^(mM + 2(m-1)), every cube of every layer
};

// Recursive selection phi over the member cubes; hbar maps each member to 1..kappa0.
SelectionReport global_selection(const WhitneyDomain& W, const std::map<WhitneyCube, int>& hbar,
                                 const WhitneyCube& top, int kappa0);

json cube_to_json(const WhitneyDecomposition& D, const WhitneyCube& Q);
std::string domain_to_csv(const WhitneyDomain& W);

}  // namespace modp
