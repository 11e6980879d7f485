#pragma once

#include "modp/chain.hpp"
#include "modp/json_util.hpp"

namespace modp {

// {"vertices": [[x,y,...],...], "simplices": {"1": [[i,j],...], "2": [[i,j,k],...]}}
SimplicialComplex complex_from_json(const json& j);
json complex_to_json(const SimplicialComplex& K);

// {"degree": k, "coeffs": {"idx": int, ...}}
IntegerChain chain_from_json(const json& j);
json chain_to_json(const IntegerChain& c);

// {"simplices": {"k": [idx,...]}, "closure": bool}. With closure the listed
// simplices of the highest listed degree are taken with all their faces.
Region region_from_json(const SimplicialComplex& K, const json& j);

}  // namespace modp
