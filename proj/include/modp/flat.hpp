#pragma once

#include <string>
#include <vector>

#include "modp/chain.hpp"

namespace modp {

struct FlatDecomposition {
  IntegerChain R;
  IntegerChain Z;
  IntegerChain P;
  double value = 0.0;
  double gap = 0.0;
  long nodes = 0;
};

struct FlatOptions {
  long node_limit = 2000000;
};

// min ||R||(W) + ||Z||(W) over integer R, Z, P with T = R + dZ + pP.
FlatDecomposition flat_norm_modp(const SimplicialComplex& K, const IntegerChain& T, int64_t p,
                                 const Region& W = Region::whole(),
                                 const FlatOptions& opt = {});

double flat_distance_modp(const SimplicialComplex& K, const IntegerChain& T,
                          const IntegerChain& S, int64_t p, const Region& W = Region::whole(),
                          const FlatOptions& opt = {});

// Exhaustive search over Z with every coefficient in [-bound, bound]; for
// each Z the best P is taken face by face.
double brute_force_flat_oracle(const SimplicialComplex& K, const IntegerChain& T, int64_t p,
                               int64_t bound, const Region& W = Region::whole());

struct PlateauSolution {
  IntegerChain chain;
  double mass = 0.0;
  ModPClass boundary_class;
  double optimality_gap = 0.0;
  long nodes = 0;
  std::string method;
};

enum class PlateauMethod { kAuto, kIlp, kGraph };

// Minimal-mass k-chain c with dc = b (mod p). kAuto uses the exact graph
// solver for 1-chains and the ILP otherwise. edge_weights, when given,
// replaces the 1-simplex volumes (graph solver only).
PlateauSolution plateau_modp(const SimplicialComplex& K, const ModPClass& b,
                             PlateauMethod method = PlateauMethod::kAuto,
                             const std::vector<double>* edge_weights = nullptr,
                             long node_limit = 2000000);

}  // namespace modp
