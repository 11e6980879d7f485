#pragma once

#include <vector>

#include "modp/chain.hpp"

namespace modp {

struct GraphPlateau {
  IntegerChain chain;
  double mass = 0.0;
};

// Exact mod-p Plateau for 1-chains on the 1-skeleton of K. An optimal chain is
// a forest whose trees each carry terminal residue 0 mod p; a tree edge
// separating terminal set S costs length * |rep(r(S))|. Solved by a
// Dreyfus-Wagner recursion over terminal subsets.
GraphPlateau plateau_graph_dp(const SimplicialComplex& K, const ModPClass& b,
                              const std::vector<double>* edge_weights = nullptr);

}  // namespace modp
