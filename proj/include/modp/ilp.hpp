#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "modp/lp.hpp"

namespace modp {

struct IlpProblem {
  LpProblem lp;
  std::vector<bool> integer;
};

struct IlpOptions {
  double int_tol = 1e-6;
  long node_limit = 2000000;
  // Maps an LP point to a feasible integer point, or nothing.
  std::function<std::optional<std::vector<double>>(const std::vector<double>&)> heuristic;
};

struct IlpResult {
  std::vector<double> x;
  double objective = 0.0;
  double bound = 0.0;
  long nodes = 0;
};

// Best-first branch and bound over LP relaxations. Open nodes are ordered by
// (bound, creation id); the branching variable is the lowest-index fractional
// integer variable. Throws SolverError past the node limit, reporting the best
// bound and incumbent, and when the problem is infeasible.
IlpResult solve_ilp(const IlpProblem& prob, const IlpOptions& opt = {});

}  // namespace modp
