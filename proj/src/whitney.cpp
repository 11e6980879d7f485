#include "modp/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace modp {

bool WhitneyCube::operator<(const WhitneyCube& o) const {
  if (k != o.k) return k < o.k;
  if (row != o.row) return row < o.row;
  return j < o.j;
}

bool WhitneyCube::operator==(const WhitneyCube& o) const {
  return k == o.k && row == o.row && j == o.j;
}

WhitneyDecomposition::WhitneyDecomposition(int m, int M, int depth) : m_(m), M_(M), depth_(depth) {
  if (m < 2 || m > 4) throw ValidationError("whitney: m must be in 2..4");
  if (M < 1 || M > 8) throw ValidationError("whitney: M must be in 1..8");
  if (depth < 1 || depth + M + 2 > 40) throw ValidationError("whitney: depth out of range");
}

double WhitneyDecomposition::layer_count(int k) const {
  return std::ldexp(1.0, m_ * M_ + (m_ - 1) * (k + 2));
}

std::vector<WhitneyCube> WhitneyDecomposition::layer(int k) const {
  if (k < 0 || k >= depth_) throw ValidationError("whitney: layer out of range");
  if (layer_count(k) > 1e7) throw ValidationError("whitney: layer too large to enumerate");
  std::vector<WhitneyCube> out;
  const int64_t n = positions(k);
  std::vector<int64_t> j(m_ - 1, 0);
  while (true) {
    for (int64_t r = 0; r < rows(); ++r) out.push_back({k, r, j});
    int d = m_ - 2;
    while (d >= 0 && ++j[d] == n) j[d--] = 0;
    if (d < 0) break;
  }
  return out;
}

double WhitneyDecomposition::side(const WhitneyCube& Q) const { return std::ldexp(1.0, -exponent(Q.k)); }

double WhitneyDecomposition::diameter(const WhitneyCube& Q) const { return std::sqrt(double(m_)) * side(Q); }

double WhitneyDecomposition::t_center(const WhitneyCube& Q) const {
  return std::ldexp(double(2 * (rows() + Q.row) + 1), -exponent(Q.k) - 1);
}

Vec WhitneyDecomposition::y_center(int k, const std::vector<int64_t>& j) const {
  Vec y(m_ - 1);
  const int64_t half = positions(k) / 2;
  for (int i = 0; i < m_ - 1; ++i) y[i] = std::ldexp(double(2 * (j[i] - half) + 1), -exponent(k) - 1);
  return y;
}

Vec WhitneyDecomposition::y_center(const WhitneyCube& Q) const { return y_center(Q.k, Q.j); }

double WhitneyDecomposition::min_dist_to_spine(const WhitneyCube& Q) const {
  return std::ldexp(double(rows() + Q.row), -exponent(Q.k));
}

double WhitneyDecomposition::max_dist_to_spine(const WhitneyCube& Q) const {
  return std::ldexp(double(rows() + Q.row + 1), -exponent(Q.k));
}

bool WhitneyDecomposition::dist_diam_holds(const WhitneyCube& Q) const {
  // In units of the side: d_Q = sqrt(m), so (2^M / sqrt(m)) d_Q = 2^M.
  const int64_t lo = rows() + Q.row;
  const int64_t hi = lo + 1;
  return valid(Q) && lo >= rows() && hi <= 2 * rows();
}

bool WhitneyDecomposition::valid(const WhitneyCube& Q) const {
  if (Q.k < 0 || Q.k >= depth_ || Q.row < 0 || Q.row >= rows()) return false;
  if (static_cast<int>(Q.j.size()) != m_ - 1) return false;
  for (int64_t x : Q.j) {
    if (x < 0 || x >= positions(Q.k)) return false;
  }
  return true;
}

bool WhitneyDecomposition::is_below(const WhitneyCube& Q, const WhitneyCube& Q2) const {
  if (!valid(Q) || !valid(Q2)) throw ValidationError("whitney: cube outside the decomposition");
  if (Q2.k > Q.k) return false;
  const int shift = Q.k - Q2.k;
  for (int i = 0; i < m_ - 1; ++i) {
    if ((Q.j[i] >> shift) != Q2.j[i]) return false;
  }
  return true;
}

WhitneyCube WhitneyDecomposition::immediately_above(const WhitneyCube& Q) const {
  if (in_top_sublayer(Q)) throw ValidationError("whitney: top sub-layer cube has nothing above");
  if (Q.row + 1 < rows()) return {Q.k, Q.row + 1, Q.j};
  WhitneyCube up{Q.k - 1, 0, Q.j};
  for (int64_t& x : up.j) x >>= 1;
  return up;
}

bool WhitneyDomain::contains(const WhitneyCube& Q) const {
  if (!D || !D->valid(Q)) return false;
  auto it = member[Q.k].find(Q.j);
  return it != member[Q.k].end() && it->second;
}

std::size_t WhitneyDomain::size() const {
  std::size_t n = 0;
  for (const auto& layer : member) {
    for (const auto& [j, in] : layer) n += in ? std::size_t(D->rows()) : 0;
  }
  return n;
}

std::vector<WhitneyCube> WhitneyDomain::cubes() const {
  std::vector<WhitneyCube> out;
  for (int k = 0; k < static_cast<int>(member.size()); ++k) {
    for (const auto& [j, in] : member[k]) {
      if (!in) continue;
      for (int64_t r = 0; r < D->rows(); ++r) out.push_back({k, r, j});
    }
  }
  return out;
}

ExcessOracle sample_excess_oracle(const VarifoldSample& T, const OpenBook& S, const Vec& origin, double scale) {
  if (!(scale > 0)) throw ValidationError("whitney: oracle scale must be positive");
  if (origin.size() != S.dim()) throw ValidationError("whitney: oracle origin has wrong dimension");
  return [&T, &S, origin, scale](const Vec& y, double r) {
    if (y.size() != S.spine.cols()) throw ValidationError("whitney: spine dimension does not match m - 1");
    const Vec q = origin + scale * (S.spine * y);
    return excess(T, S, q, scale * r);
  };
}

WhitneyDomain whitney_domain(const ExcessOracle& oracle, double tau, const WhitneyDecomposition& D) {
  if (!(tau > 0) || !std::isfinite(tau)) throw ValidationError("whitney: tau must be positive");
  WhitneyDomain W;
  W.D = &D;
  W.tau = tau;
  W.Mbar = std::ldexp(1.0, D.M() + 2) / std::sqrt(double(D.m()));
  W.excess.resize(D.depth());
  W.member.resize(D.depth());
  const double tau2 = tau * tau;
  // Children are only visited below member shadows; others fail the criterion through their parent.
  std::vector<std::vector<int64_t>> frontier;
  {
    const int64_t n = D.positions(0);
    std::vector<int64_t> j(D.m() - 1, 0);
    while (true) {
      frontier.push_back(j);
      int d = D.m() - 2;
      while (d >= 0 && ++j[d] == n) j[d--] = 0;
      if (d < 0) break;
    }
  }
  for (int k = 0; k < D.depth(); ++k) {
    // Mbar d_Q = 2^(2-k) exactly
    const double radius = std::ldexp(1.0, 2 - k);
    std::vector<std::vector<int64_t>> next;
    for (const auto& j : frontier) {
      const double e = oracle(D.y_center(k, j), radius);
      if (std::isnan(e)) throw SolverError("whitney: excess oracle returned NaN");
      W.excess[k][j] = e;
      const bool in = e < tau2;
      W.member[k][j] = in;
      if (!in || k + 1 == D.depth()) continue;
      const int dims = D.m() - 1;
      for (int c = 0; c < (1 << dims); ++c) {
        std::vector<int64_t> child(j);
        for (int i = 0; i < dims; ++i) child[i] = 2 * j[i] + ((c >> (dims - 1 - i)) & 1);
        next.push_back(std::move(child));
      }
    }
    frontier = std::move(next);
  }
  return W;
}

double rho_W(const WhitneyDomain& W, const Vec& y) {
  const WhitneyDecomposition& D = *W.D;
  if (y.size() != D.m() - 1) throw ValidationError("whitney: query point has wrong dimension");
  for (int k = D.depth() - 1; k >= 0; --k) {
    const double side = std::ldexp(1.0, -D.exponent(k));
    // closed shadows: on a grid line both neighbors qualify
    std::vector<std::vector<int64_t>> options(D.m() - 1);
    bool outside = false;
    for (int i = 0; i < D.m() - 1; ++i) {
      const double u = (y[i] + 2.0) / side;
      if (u < 0 || u > double(D.positions(k))) {
        outside = true;
        break;
      }
      const int64_t f = static_cast<int64_t>(std::floor(u));
      if (f < D.positions(k)) options[i].push_back(f);
      if (u == double(f) && f > 0) options[i].push_back(f - 1);
    }
    if (outside) return 2.0;
    std::vector<std::size_t> pick(D.m() - 1, 0);
    while (true) {
      std::vector<int64_t> j(D.m() - 1);
      for (int i = 0; i < D.m() - 1; ++i) j[i] = options[i][pick[i]];
      auto it = W.member[k].find(j);
      if (it != W.member[k].end() && it->second) return std::ldexp(1.0, -k);
      int d = D.m() - 2;
      while (d >= 0 && ++pick[d] == options[d].size()) pick[d--] = 0;
      if (d < 0) break;
    }
  }
  return 2.0;
}

bool in_graphicality_region(const WhitneyDomain& W, double x_norm, const Vec& y) {
  return rho_W(W, y) <= x_norm && x_norm <= 2.0;
}

namespace {

// Facet neighbors within the top sub-layer, in lexicographic order.
std::vector<WhitneyCube> top_neighbors(const WhitneyDecomposition& D, const WhitneyCube& Q) {
  std::vector<WhitneyCube> out;
  for (int i = 0; i < D.m() - 1; ++i) {
    for (int delta : {-1, 1}) {
      WhitneyCube n = Q;
      n.j[i] += delta;
      if (n.j[i] >= 0 && n.j[i] < D.positions(0)) out.push_back(n);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SelectionReport global_selection(const WhitneyDomain& W, const std::map<WhitneyCube, int>& hbar,
                                 const WhitneyCube& top, int kappa0) {
  const WhitneyDecomposition& D = *W.D;
  if (kappa0 < 1) throw ValidationError("whitney: kappa0 must be at least 1");
  if (!D.valid(top) || !D.in_top_sublayer(top)) throw ValidationError("whitney: Q_hat is not a top sub-layer cube");
  if (!W.contains(top)) throw ValidationError("whitney: Q_hat is not a member cube");

  // BFS distances to Q_hat through member cubes of the top sub-layer.
  std::map<WhitneyCube, int> dist;
  std::deque<WhitneyCube> queue{top};
  dist[top] = 0;
  while (!queue.empty()) {
    WhitneyCube q = queue.front();
    queue.pop_front();
    for (const WhitneyCube& n : top_neighbors(D, q)) {
      if (!W.contains(n) || dist.count(n)) continue;
      dist[n] = dist[q] + 1;
      queue.push_back(n);
    }
  }

  auto choice = [&](const WhitneyCube& Q) {
    auto it = hbar.find(Q);
    if (it == hbar.end()) throw ValidationError("whitney: missing per-cube choice");
    if (it->second < 1 || it->second > kappa0) throw ValidationError("whitney: per-cube choice out of range");
    return it->second;
  };

  SelectionReport rep;
  rep.kappa0 = kappa0;
  rep.top = top;
  const int m = D.m();
  const double two_M = std::ldexp(1.0, D.M());
  rep.bound_below_top = two_M + two_M / 7.0;
  rep.bound_top = 8.0 / 7.0 * std::ldexp(1.0, m * D.M() + 2 * (m - 1));

  for (const WhitneyCube& Q0 : W.cubes()) {
    std::vector<WhitneyCube> chain{Q0};
    while (!D.in_top_sublayer(chain.back())) chain.push_back(D.immediately_above(chain.back()));
    auto d = dist.find(chain.back());
    if (d == dist.end()) throw ValidationError("whitney: top sub-layer path to Q_hat leaves the domain");
    for (int step = d->second; step > 0; --step) {
      for (const WhitneyCube& n : top_neighbors(D, chain.back())) {
        auto dn = dist.find(n);
        if (dn != dist.end() && dn->second == step - 1) {
          chain.push_back(n);
          break;
        }
      }
    }
    std::vector<int> h(chain.size());
    for (std::size_t i = 0; i < chain.size(); ++i) h[i] = choice(chain[i]);

    std::vector<std::size_t> idx(kappa0 + 1);
    idx[kappa0] = chain.size() - 1;
    for (int s = kappa0 - 1; s >= 0; --s) {
      const int target = h[idx[s + 1]];
      if (target == h[0]) {
        idx[s] = 0;
        continue;
      }
      std::size_t first = 1;
      while (h[first] != target) ++first;
      idx[s] = first - 1;
    }

    std::vector<WhitneyCube> phi(kappa0 + 1);
    for (int s = 0; s <= kappa0; ++s) phi[s] = chain[idx[s]];
    if (!(phi[kappa0] == top) || !(phi[0] == Q0)) rep.p1 = false;
    for (int s = 0; s < kappa0; ++s) {
      if (h[idx[s]] != h[idx[s + 1]] && h[idx[s] + 1] != h[idx[s + 1]]) rep.p3 = false;
    }
    // p2 is checked against the chain as a set, independent of the indices above
    for (const WhitneyCube& q : phi) {
      if (std::find(chain.begin(), chain.end(), q) == chain.end()) rep.p2 = false;
    }

    std::vector<WhitneyCube> distinct(phi);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (const WhitneyCube& q : distinct) {
      rep.tail_sum[q] += std::ldexp(1.0, (q.k - Q0.k) * (m + 2));
    }
    rep.chain[Q0] = std::move(chain);
    rep.phi[Q0] = std::move(phi);
  }

  for (const auto& [q, sum] : rep.tail_sum) {
    const double bound = D.in_top_sublayer(q) ? rep.bound_top : rep.bound_below_top;
    rep.worst_ratio = std::max(rep.worst_ratio, sum / bound);
  }
  rep.bound_holds = rep.worst_ratio <= 1.0;
  return rep;
}

json cube_to_json(const WhitneyDecomposition& D, const WhitneyCube& Q) {
  return json{{"layer", Q.k},
              {"row", Q.row},
              {"position", Q.j},
              {"side", D.side(Q)},
              {"t_center", D.t_center(Q)},
              {"y_center", vec_to_json(D.y_center(Q))}};
}

std::string domain_to_csv(const WhitneyDomain& W) {
  std::ostringstream os;
  os << "layer,row,position,excess,member\n";
  for (int k = 0; k < static_cast<int>(W.excess.size()); ++k) {
    for (const auto& [j, e] : W.excess[k]) {
      std::string pos;
      for (std::size_t i = 0; i < j.size(); ++i) pos += (i ? ":" : "") + std::to_string(j[i]);
      const bool in = W.member[k].at(j);
      for (int64_t r = 0; r < W.D->rows(); ++r) {
        os << k << ',' << r << ',' << pos << ',' << format_double(e) << ',' << (in ? 1 : 0) << '\n';
      }
    }
  }
  return os.str();
}

}  // namespace modp
