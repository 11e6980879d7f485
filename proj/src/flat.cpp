#include "modp/flat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modp/ilp.hpp"
#include "modp/steiner_dp.hpp"

namespace modp {

namespace {

void check_chain(const SimplicialComplex& K, const IntegerChain& c) {
  if (c.degree() < 0 || c.degree() > K.top_degree()) {
    throw ValidationError("chain degree " + std::to_string(c.degree()) + " not in complex");
  }
  for (const auto& [i, v] : c.coeffs()) {
    if (i >= K.count(c.degree())) throw ValidationError("chain index out of range");
  }
}

bool region_is_empty(const SimplicialComplex& K, const Region& W, int k) {
  for (int d : {k, k + 1}) {
    for (std::size_t i = 0; i < K.count(d); ++i) {
      if (W.contains(d, i)) return false;
    }
  }
  return true;
}

int64_t floor_div(int64_t a, int64_t b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
int64_t ceil_div(int64_t a, int64_t b) { return -floor_div(-a, b); }

// pi with |s - p*pi| <= p/2, ties toward the representative in (-p/2, p/2].
int64_t nearest_pi(int64_t s, int64_t p) { return (s - reduce_coeff(s, p)) / p; }

// A 0-chain bounds mod p iff its coefficients sum to 0 mod p on every
// connected component of the 1-skeleton.
void check_bounds_in_graph(const SimplicialComplex& K, const ModPClass& b) {
  const std::size_t n = K.num_vertices();
  std::vector<std::size_t> comp(n, n);
  std::vector<int64_t> sum;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != n) continue;
    const std::size_t id = sum.size();
    sum.push_back(0);
    std::vector<std::size_t> stack{s};
    comp[s] = id;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      sum[id] = reduce_coeff(sum[id] + b.representative.get(v), b.p);
      for (const Incidence& e : K.coboundary_row(1, v)) {
        const Simplex& edge = K.simplex(1, e.row);
        const std::size_t u = edge[0] == int(v) ? edge[1] : edge[0];
        if (comp[u] == n) {
          comp[u] = id;
          stack.push_back(u);
        }
      }
    }
  }
  for (int64_t r : sum) {
    if (r != 0) throw ValidationError("boundary does not bound mod p");
  }
}

}  // namespace

FlatDecomposition flat_norm_modp(const SimplicialComplex& K, const IntegerChain& T, int64_t p,
                                 const Region& W, const FlatOptions& opt) {
  if (p < 2) throw ValidationError("modulus p must be at least 2");
  check_chain(K, T);
  const int k = T.degree();
  FlatDecomposition out;
  out.R = T;
  out.Z = IntegerChain(k + 1);
  out.P = IntegerChain(k);
  if (T.is_zero() || region_is_empty(K, W, k)) {
    out.value = mass_in(K, T, W);
    return out;
  }
  const std::size_t nz = K.count(k + 1);
  const std::size_t nr = K.count(k);
  // Any optimum can be moved to z, R in (-p/2, p/2] without raising the cost
  // (reduce z mod p, then pick pi nearest), which bounds pi per face.
  const int64_t half = p / 2;
  const int64_t neg = (p - 1) / 2;
  std::vector<int64_t> pi_lo(nr), pi_hi(nr);
  for (std::size_t s = 0; s < nr; ++s) {
    const int64_t c = k + 1 <= K.top_degree() ? int64_t(K.coboundary_row(k + 1, s).size()) : 0;
    const int64_t slack = (c + 1) * half;
    pi_lo[s] = ceil_div(T.get(s) - slack, p);
    pi_hi[s] = floor_div(T.get(s) + slack, p);
  }

  IlpProblem prob;
  LpProblem& lp = prob.lp;
  std::vector<int> zp(nz), zm(nz), pi(nr), rp(nr), rm(nr);
  for (std::size_t t = 0; t < nz; ++t) {
    const double c = W.contains(k + 1, t) ? K.volume(k + 1, t) : 0.0;
    zp[t] = lp.add_var(c, 0.0, double(half));
    zm[t] = lp.add_var(c, 0.0, double(neg));
  }
  for (std::size_t s = 0; s < nr; ++s) pi[s] = lp.add_var(0.0, double(pi_lo[s]), double(pi_hi[s]));
  for (std::size_t s = 0; s < nr; ++s) {
    const double c = W.contains(k, s) ? K.volume(k, s) : 0.0;
    rp[s] = lp.add_var(c, 0.0, double(half));
    rm[s] = lp.add_var(c, 0.0, double(neg));
  }
  for (std::size_t s = 0; s < nr; ++s) {
    std::vector<std::pair<int, double>> row{{rp[s], 1.0}, {rm[s], -1.0}, {pi[s], double(p)}};
    if (k + 1 <= K.top_degree()) {
      for (const Incidence& e : K.coboundary_row(k + 1, s)) {
        row.push_back({zp[e.row], double(e.sign)});
        row.push_back({zm[e.row], -double(e.sign)});
      }
    }
    lp.add_row(std::move(row), double(T.get(s)));
  }
  prob.integer.assign(lp.num_vars(), false);
  for (std::size_t t = 0; t < nz; ++t) prob.integer[zp[t]] = prob.integer[zm[t]] = true;
  for (std::size_t s = 0; s < nr; ++s) prob.integer[pi[s]] = true;

  // Round z, then pick each pi in closed form.
  auto complete = [&](std::vector<int64_t> z) {
    std::vector<double> x(lp.num_vars(), 0.0);
    for (std::size_t t = 0; t < nz; ++t) {
      x[zp[t]] = double(std::max<int64_t>(z[t], 0));
      x[zm[t]] = double(std::max<int64_t>(-z[t], 0));
    }
    for (std::size_t s = 0; s < nr; ++s) {
      int64_t r = T.get(s);
      if (k + 1 <= K.top_degree()) {
        for (const Incidence& e : K.coboundary_row(k + 1, s)) r -= e.sign * z[e.row];
      }
      const int64_t q = nearest_pi(r, p);
      r -= p * q;
      x[pi[s]] = double(q);
      x[rp[s]] = double(std::max<int64_t>(r, 0));
      x[rm[s]] = double(std::max<int64_t>(-r, 0));
    }
    return x;
  };
  IlpOptions iopt;
  iopt.node_limit = opt.node_limit;
  iopt.heuristic = [&](const std::vector<double>& x) -> std::optional<std::vector<double>> {
    std::vector<int64_t> z(nz);
    for (std::size_t t = 0; t < nz; ++t) {
      z[t] = std::clamp<int64_t>(std::llround(x[zp[t]] - x[zm[t]]), -neg, half);
    }
    return complete(z);
  };
  const IlpResult res = solve_ilp(prob, iopt);

  out.R = IntegerChain(k);
  for (std::size_t t = 0; t < nz; ++t) {
    out.Z.set(t, std::llround(res.x[zp[t]]) - std::llround(res.x[zm[t]]));
  }
  for (std::size_t s = 0; s < nr; ++s) out.P.set(s, std::llround(res.x[pi[s]]));
  IntegerChain dZ = out.Z.is_zero() ? IntegerChain(k) : boundary(K, out.Z);
  out.R = T - dZ - out.P.scaled(p);
  out.value = mass_in(K, out.R, W) + mass_in(K, out.Z, W);
  out.nodes = res.nodes;
  out.gap = std::max(0.0, res.objective - res.bound);
  return out;
}

double flat_distance_modp(const SimplicialComplex& K, const IntegerChain& T,
                          const IntegerChain& S, int64_t p, const Region& W,
                          const FlatOptions& opt) {
  if (!T.is_zero() && !S.is_zero() && T.degree() != S.degree()) {
    throw ValidationError("flat distance between chains of different degree");
  }
  IntegerChain D = T - S;
  if (D.is_zero()) D = IntegerChain(T.is_zero() ? S.degree() : T.degree());
  return flat_norm_modp(K, D, p, W, opt).value;
}

double brute_force_flat_oracle(const SimplicialComplex& K, const IntegerChain& T, int64_t p,
                               int64_t bound, const Region& W) {
  if (p < 2) throw ValidationError("modulus p must be at least 2");
  if (bound < 0) throw ValidationError("oracle bound must be nonnegative");
  check_chain(K, T);
  const int k = T.degree();
  const std::size_t nz = K.count(k + 1);
  const std::size_t nr = K.count(k);
  if (nz > 12) throw ValidationError("oracle limited to complexes with at most 12 top simplices");

  std::vector<int64_t> resid(nr);
  std::vector<double> cost(nr);
  auto face_cost = [&](std::size_t s) {
    if (!W.contains(k, s)) return 0.0;
    return K.volume(k, s) * std::abs(static_cast<double>(reduce_coeff(resid[s], p)));
  };
  std::vector<int64_t> z(nz, -bound);
  std::vector<int> dir(nz, 1);
  for (std::size_t s = 0; s < nr; ++s) resid[s] = T.get(s);
  for (std::size_t t = 0; t < nz; ++t) {
    for (const Incidence& e : K.boundary_column(k + 1, t)) resid[e.row] -= e.sign * z[t];
  }
  for (std::size_t s = 0; s < nr; ++s) cost[s] = face_cost(s);
  double best = std::numeric_limits<double>::infinity();
  // Reflected mixed-radix Gray code: each step moves one z by +-1.
  while (true) {
    double total = 0.0;
    for (std::size_t t = 0; t < nz; ++t) {
      if (W.contains(k + 1, t)) total += K.volume(k + 1, t) * std::abs(double(z[t]));
    }
    for (std::size_t s = 0; s < nr; ++s) total += cost[s];
    best = std::min(best, total);
    std::size_t i = 0;
    while (i < nz && (z[i] + dir[i] > bound || z[i] + dir[i] < -bound)) {
      dir[i] = -dir[i];
      ++i;
    }
    if (i == nz) break;
    z[i] += dir[i];
    for (const Incidence& e : K.boundary_column(k + 1, i)) {
      resid[e.row] -= e.sign * dir[i];
      cost[e.row] = face_cost(e.row);
    }
  }
  return best;
}

PlateauSolution plateau_modp(const SimplicialComplex& K, const ModPClass& b, PlateauMethod method,
                             const std::vector<double>* edge_weights, long node_limit) {
  const int64_t p = b.p;
  if (p < 2) throw ValidationError("modulus p must be at least 2");
  const IntegerChain& rep = b.representative;
  check_chain(K, rep);
  const int k = rep.degree() + 1;
  if (k > K.top_degree()) throw ValidationError("complex has no simplices of degree " + std::to_string(k));
  PlateauSolution out;
  out.boundary_class = reduce_modp(rep, p);
  out.chain = IntegerChain(k);
  if (out.boundary_class.representative.is_zero()) {
    out.method = "trivial";
    return out;
  }
  if (k == 1) check_bounds_in_graph(K, out.boundary_class);
  if (method == PlateauMethod::kAuto) method = k == 1 ? PlateauMethod::kGraph : PlateauMethod::kIlp;
  if (method == PlateauMethod::kGraph) {
    if (k != 1) throw ValidationError("graph Plateau solver needs a 0-chain boundary");
    GraphPlateau g = plateau_graph_dp(K, out.boundary_class, edge_weights);
    out.chain = g.chain;
    out.mass = g.mass;
    out.method = "graph-dp";
    return out;
  }
  if (edge_weights) throw ValidationError("edge weights are only supported by the graph solver");

  const std::size_t nc = K.count(k);
  const std::size_t nb = K.count(k - 1);
  const int64_t half = p / 2;
  int64_t max_cofaces = 0;
  for (std::size_t s = 0; s < nb; ++s) {
    max_cofaces = std::max<int64_t>(max_cofaces, K.coboundary_row(k, s).size());
  }
  const int64_t bpi = (max_cofaces * half + out.boundary_class.representative.max_abs() + p - 1) / p;
  IlpProblem prob;
  LpProblem& lp = prob.lp;
  std::vector<int> cp(nc), cm(nc), pi(nb);
  for (std::size_t t = 0; t < nc; ++t) {
    cp[t] = lp.add_var(K.volume(k, t), 0.0, double(half));
    cm[t] = lp.add_var(K.volume(k, t), 0.0, double(half));
  }
  for (std::size_t s = 0; s < nb; ++s) pi[s] = lp.add_var(0.0, -double(bpi), double(bpi));
  for (std::size_t s = 0; s < nb; ++s) {
    std::vector<std::pair<int, double>> row{{pi[s], -double(p)}};
    for (const Incidence& e : K.coboundary_row(k, s)) {
      row.push_back({cp[e.row], double(e.sign)});
      row.push_back({cm[e.row], -double(e.sign)});
    }
    lp.add_row(std::move(row), double(out.boundary_class.representative.get(s)));
  }
  prob.integer.assign(lp.num_vars(), true);
  IlpOptions iopt;
  iopt.node_limit = node_limit;
  IlpResult res;
  try {
    res = solve_ilp(prob, iopt);
  } catch (const SolverError& e) {
    if (std::string(e.what()) == "integer program is infeasible") {
      throw ValidationError("boundary does not bound mod p");
    }
    throw;
  }
  IntegerChain c(k);
  for (std::size_t t = 0; t < nc; ++t) c.set(t, std::llround(res.x[cp[t]]) - std::llround(res.x[cm[t]]));
  out.chain = reduce_modp(c, p).representative;
  if (!congruent_modp(boundary(K, out.chain), out.boundary_class.representative, p)) {
    throw SolverError("Plateau witness fails the boundary congruence");
  }
  out.mass = mass(K, out.chain);
  out.optimality_gap = std::max(0.0, res.objective - res.bound);
  out.nodes = res.nodes;
  out.method = "ilp";
  return out;
}

}  // namespace modp
