#pragma once

#include <limits>
#include <utility>
#include <vector>

namespace modp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// min c'x  s.t.  A x = b,  lower <= x <= upper (lower finite).
struct LpProblem {
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> rhs;

  int add_var(double c, double lo, double hi);
  void add_row(std::vector<std::pair<int, double>> row, double b);
  int num_vars() const { return static_cast<int>(cost.size()); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
  int iterations = 0;
};

struct LpOptions {
  int max_iterations = 200000;
  double tol = 1e-9;
};

// Two-phase bounded-variable primal simplex on a dense tableau. Dantzig
// pricing, Bland's rule after a run of degenerate pivots.
LpResult solve_lp(const LpProblem& lp, const LpOptions& opt = {});

}  // namespace modp
