#include "modp/steiner_dp.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <queue>

namespace modp {

namespace {

constexpr double kInfCost = std::numeric_limits<double>::infinity();

struct Arc {
  int to;
  std::size_t edge;
  double len;
};

// How D[mask][v] was reached.
struct Back {
  int kind = 0;  // 0 base, 1 merge, 2 path
  uint32_t split = 0;
  int from = -1;
  std::size_t edge = 0;
};

}  // namespace

GraphPlateau plateau_graph_dp(const SimplicialComplex& K, const ModPClass& b,
                              const std::vector<double>* edge_weights) {
  const int64_t p = b.p;
  if (b.representative.degree() != 0) throw ValidationError("graph Plateau needs a 0-chain boundary");
  if (K.top_degree() < 1) throw ValidationError("complex has no edges");
  const int n = static_cast<int>(K.num_vertices());
  const std::size_t ne = K.count(1);
  if (edge_weights && edge_weights->size() != ne) throw ValidationError("edge weight count mismatch");

  std::vector<int> term;
  std::vector<int64_t> res;
  for (const auto& [v, c] : b.representative.coeffs()) {
    const int64_t r = reduce_coeff(c, p);
    if (r == 0) continue;
    term.push_back(static_cast<int>(v));
    res.push_back(r);
  }
  GraphPlateau out;
  out.chain = IntegerChain(1);
  const int k = static_cast<int>(term.size());
  if (k == 0) return out;
  if (k > 14) throw ValidationError("graph Plateau limited to 14 terminals");

  std::vector<std::vector<Arc>> adj(n);
  for (std::size_t e = 0; e < ne; ++e) {
    const Simplex& s = K.simplex(1, e);
    const double len = edge_weights ? (*edge_weights)[e] : K.volume(1, e);
    if (!(len > 0)) throw ValidationError("edge weights must be positive");
    adj[s[0]].push_back({s[1], e, len});
    adj[s[1]].push_back({s[0], e, len});
  }

  const uint32_t full = (1u << k) - 1;
  std::vector<int64_t> rmask(full + 1, 0);
  for (uint32_t m = 1; m <= full; ++m) {
    const int t = __builtin_ctz(m);
    rmask[m] = reduce_coeff(rmask[m & (m - 1)] + res[t], p);
  }
  std::vector<std::vector<double>> D(full + 1);
  std::vector<std::vector<Back>> back(full + 1);

  for (uint32_t m = 1; m <= full; ++m) {
    std::vector<double>& d = D[m];
    std::vector<Back>& bk = back[m];
    d.assign(n, kInfCost);
    bk.assign(n, Back{});
    if ((m & (m - 1)) == 0) {
      d[term[__builtin_ctz(m)]] = 0.0;
    } else {
      const uint32_t low = m & (~m + 1);
      for (uint32_t s = (m - 1) & m; s > 0; s = (s - 1) & m) {
        if (!(s & low)) continue;
        const std::vector<double>& a = D[s];
        const std::vector<double>& c = D[m ^ s];
        for (int v = 0; v < n; ++v) {
          const double val = a[v] + c[v];
          if (val < d[v]) {
            d[v] = val;
            bk[v] = Back{1, s, -1, 0};
          }
        }
      }
    }
    const double factor = static_cast<double>(std::abs(rmask[m]));
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    for (int v = 0; v < n; ++v) {
      if (d[v] < kInfCost) pq.push({d[v], v});
    }
    while (!pq.empty()) {
      const auto [dv, v] = pq.top();
      pq.pop();
      if (dv > d[v]) continue;
      for (const Arc& a : adj[v]) {
        const double nd = dv + factor * a.len;
        if (nd < d[a.to]) {
          d[a.to] = nd;
          bk[a.to] = Back{2, 0, v, a.edge};
          pq.push({nd, a.to});
        }
      }
    }
  }

  // Forest over residue-0 groups.
  std::vector<double> F(full + 1, kInfCost);
  std::vector<uint32_t> fsplit(full + 1, 0);
  std::vector<int> froot(full + 1, -1);
  for (uint32_t m = 1; m <= full; ++m) {
    if (rmask[m] != 0) continue;
    for (int v = 0; v < n; ++v) {
      if (D[m][v] < F[m]) {
        F[m] = D[m][v];
        froot[m] = v;
      }
    }
    const uint32_t low = m & (~m + 1);
    for (uint32_t s = (m - 1) & m; s > 0; s = (s - 1) & m) {
      if (!(s & low) || rmask[s] != 0) continue;
      const double val = F[s] + F[m ^ s];
      if (val < F[m]) {
        F[m] = val;
        fsplit[m] = s;
        froot[m] = -1;
      }
    }
  }
  if (!(F[full] < kInfCost)) throw ValidationError("boundary does not bound mod p");

  std::function<void(uint32_t, int)> emit_tree = [&](uint32_t m, int v) {
    while (true) {
      const Back& bk = back[m][v];
      if (bk.kind == 0) return;
      if (bk.kind == 1) {
        emit_tree(bk.split, v);
        emit_tree(m ^ bk.split, v);
        return;
      }
      // edge carries the subtree residue from bk.from toward v
      const int64_t flow = reduce_coeff(-rmask[m], p);
      if (flow != 0) {
        const Simplex& s = K.simplex(1, bk.edge);
        const int64_t sign = (s[0] == bk.from && s[1] == v) ? 1 : -1;
        out.chain.add(bk.edge, sign * flow);
      }
      v = bk.from;
    }
  };
  std::function<void(uint32_t)> emit_forest = [&](uint32_t m) {
    if (froot[m] >= 0) {
      emit_tree(m, froot[m]);
    } else {
      emit_forest(fsplit[m]);
      emit_forest(m ^ fsplit[m]);
    }
  };
  emit_forest(full);
  out.chain = reduce_modp(out.chain, p).representative;
  if (!congruent_modp(boundary(K, out.chain), b.representative, p)) {
    throw SolverError("graph Plateau witness fails the boundary congruence");
  }
  out.mass = 0.0;
  for (const auto& [e, c] : out.chain.coeffs()) {
    out.mass += std::abs(static_cast<double>(c)) * (edge_weights ? (*edge_weights)[e] : K.volume(1, e));
  }
  return out;
}

}  // namespace modp
