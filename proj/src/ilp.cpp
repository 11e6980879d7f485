#include "modp/ilp.hpp"

#include <cmath>
#include <queue>
#include <sstream>

#include "modp/chain.hpp"

namespace modp {

namespace {

struct Node {
  double bound;
  long id;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

double objective_of(const LpProblem& lp, const std::vector<double>& x) {
  double v = 0.0;
  for (int j = 0; j < lp.num_vars(); ++j) v += lp.cost[j] * x[j];
  return v;
}

}  // namespace

IlpResult solve_ilp(const IlpProblem& prob, const IlpOptions& opt) {
  const double prune_tol = 1e-9;
  IlpResult best;
  bool have_incumbent = false;
  best.objective = kInf;

  auto offer = [&](const std::vector<double>& x) {
    const double v = objective_of(prob.lp, x);
    if (v < best.objective - prune_tol) {
      best.objective = v;
      best.x = x;
      have_incumbent = true;
    }
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  open.push({-kInf, next_id++, prob.lp.lower, prob.lp.upper});
  LpProblem work = prob.lp;
  long nodes = 0;
  while (!open.empty()) {
    Node node = open.top();
    if (have_incumbent && node.bound >= best.objective - prune_tol) break;
    open.pop();
    if (++nodes > opt.node_limit) {
      std::ostringstream msg;
      msg << "branch and bound node limit " << opt.node_limit << " exceeded; best bound "
          << node.bound << ", incumbent ";
      if (have_incumbent) {
        msg << best.objective;
      } else {
        msg << "none";
      }
      throw SolverError(msg.str());
    }
    work.lower = node.lower;
    work.upper = node.upper;
    const LpResult r = solve_lp(work);
    if (r.status == LpStatus::kInfeasible) continue;
    if (r.status != LpStatus::kOptimal) {
      throw SolverError("LP relaxation did not reach optimality");
    }
    if (have_incumbent && r.objective >= best.objective - prune_tol) continue;
    int branch = -1;
    for (int j = 0; j < work.num_vars(); ++j) {
      if (!prob.integer[j]) continue;
      if (std::abs(r.x[j] - std::round(r.x[j])) > opt.int_tol) {
        branch = j;
        break;
      }
    }
    if (branch < 0) {
      std::vector<double> x = r.x;
      for (int j = 0; j < work.num_vars(); ++j) {
        if (prob.integer[j]) x[j] = std::round(x[j]);
      }
      offer(x);
      continue;
    }
    if (opt.heuristic) {
      if (auto h = opt.heuristic(r.x)) offer(*h);
    }
    Node down{r.objective, next_id++, node.lower, node.upper};
    down.upper[branch] = std::floor(r.x[branch]);
    Node up{r.objective, next_id++, node.lower, node.upper};
    up.lower[branch] = std::ceil(r.x[branch]);
    open.push(std::move(down));
    open.push(std::move(up));
  }
  if (!have_incumbent) throw SolverError("integer program is infeasible");
  best.nodes = nodes;
  best.bound = open.empty() ? best.objective : std::min(best.objective, open.top().bound);
  return best;
}

}  // namespace modp
