#include "modp/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include "modp/chain.hpp"
#include "modp/parallel.hpp"

namespace modp {

namespace {

constexpr double kInfCost = std::numeric_limits<double>::infinity();

// Tree on t local terminals (0..t-1) and Steiner points (t..).
struct Topology {
  int t = 0;
  int steiner = 0;
  std::vector<std::pair<int, int>> edges;
};

void insert_terminals(Topology top, int k, std::vector<Topology>& out) {
  if (k == top.t) {
    out.push_back(top);
    return;
  }
  const std::size_t ne = top.edges.size();
  for (std::size_t e = 0; e < ne; ++e) {
    Topology next = top;
    const int s = next.t + next.steiner++;
    const auto [u, v] = next.edges[e];
    next.edges[e] = {u, s};
    next.edges.push_back({s, v});
    next.edges.push_back({k, s});
    insert_terminals(next, k + 1, out);
  }
}

std::vector<Topology> full_topologies(int t) {
  std::vector<Topology> out;
  if (t == 2) {
    out.push_back({2, 0, {{0, 1}}});
    return out;
  }
  Topology base{t, 1, {{0, t}, {1, t}, {2, t}}};
  insert_terminals(base, 3, out);
  return out;
}

// Edge flow u -> v: reduced sum of the boundary multiplicities on v's side.
std::vector<int64_t> edge_flows(const Topology& top, const std::vector<int64_t>& mu, int64_t p) {
  const int n = top.t + top.steiner;
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (std::size_t e = 0; e < top.edges.size(); ++e) {
    adj[top.edges[e].first].push_back({top.edges[e].second, static_cast<int>(e)});
    adj[top.edges[e].second].push_back({top.edges[e].first, static_cast<int>(e)});
  }
  std::vector<int64_t> flow(top.edges.size());
  for (std::size_t e = 0; e < top.edges.size(); ++e) {
    const auto [u, v] = top.edges[e];
    int64_t sum = 0;
    std::vector<int> stack = {v};
    std::vector<bool> seen(n, false);
    seen[u] = seen[v] = true;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      if (x < top.t) sum += mu[x];
      for (auto [y, f] : adj[x]) {
        if (!seen[y]) {
          seen[y] = true;
          stack.push_back(y);
        }
      }
    }
    flow[e] = reduce_coeff(sum, p);
  }
  return flow;
}

struct Problem {
  const WeightedMetric* metric;
  std::vector<Eigen::Vector2d> fixed;  // terminal positions
  int nfree = 0;
  std::vector<std::pair<int, int>> edges;  // node ids: < fixed.size() fixed, else free
  std::vector<double> coef;
  double min_x = 0.0;
  mutable std::vector<ShootingGuess> guesses;  // per edge, conformal only

  Eigen::Vector2d pos(const Eigen::VectorXd& x, int v) const {
    const int nf = static_cast<int>(fixed.size());
    return v < nf ? fixed[v] : Eigen::Vector2d(x.segment<2>(2 * (v - nf)));
  }

  bool admissible(const Eigen::VectorXd& x) const {
    if (!metric->conformal()) return x.allFinite();
    for (int i = 0; i < nfree; ++i) {
      if (!(x[2 * i] >= min_x)) return false;
    }
    return x.allFinite();
  }

  // Smoothed energy sum c sqrt(len^2 + eps^2) and its gradient.
  double eval(const Eigen::VectorXd& x, double eps, Eigen::VectorXd* grad) const {
    const int nf = static_cast<int>(fixed.size());
    double f = 0.0;
    if (grad) grad->setZero(2 * nfree);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto [u, v] = edges[e];
      const Eigen::Vector2d a = pos(x, u), b = pos(x, v);
      double len;
      Eigen::Vector2d ga, gb;  // d len / d a, d len / d b
      const double dist = (b - a).norm();
      if (!metric->conformal() || dist < 1e-12) {
        const double w = metric->w(0.5 * (a + b));
        len = w * dist;
        const Eigen::Vector2d u_ab = dist > 0 ? Eigen::Vector2d((b - a) / dist) : Eigen::Vector2d::Zero();
        ga = -w * u_ab;
        gb = w * u_ab;
      } else {
        if (guesses.size() != edges.size()) guesses.assign(edges.size(), ShootingGuess{});
        const GeodesicArc arc = geodesic_between(a, b, *metric, &guesses[e]);
        len = arc.length;
        ga = -metric->w(a) * arc.start_tangent;
        gb = metric->w(b) * arc.end_tangent;
      }
      const double s = std::sqrt(len * len + eps * eps);
      f += coef[e] * s;
      if (grad) {
        const double k = s > 0 ? coef[e] * len / s : 0.0;
        if (u >= nf) grad->segment<2>(2 * (u - nf)) += k * ga;
        if (v >= nf) grad->segment<2>(2 * (v - nf)) += k * gb;
      }
    }
    return f;
  }

  Eigen::MatrixXd hessian(const Eigen::VectorXd& x, double eps) const {
    const int nf = static_cast<int>(fixed.size());
    const int n = 2 * nfree;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    if (!metric->conformal()) {
      for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [u, v] = edges[e];
        const Eigen::Vector2d d = pos(x, v) - pos(x, u);
        const double s = std::sqrt(d.squaredNorm() + eps * eps);
        if (s == 0) continue;
        const Eigen::Matrix2d B = coef[e] * (Eigen::Matrix2d::Identity() / s - d * d.transpose() / (s * s * s));
        const int iu = u >= nf ? 2 * (u - nf) : -1, iv = v >= nf ? 2 * (v - nf) : -1;
        if (iu >= 0) H.block<2, 2>(iu, iu) += B;
        if (iv >= 0) H.block<2, 2>(iv, iv) += B;
        if (iu >= 0 && iv >= 0) {
          H.block<2, 2>(iu, iv) -= B;
          H.block<2, 2>(iv, iu) -= B;
        }
      }
      return H;
    }
    // central differences of the analytic gradient
    double shortest = kInfCost;
    for (const auto& [u, v] : edges) shortest = std::min(shortest, (pos(x, v) - pos(x, u)).norm());
    const double h = std::min(1e-6, 0.1 * std::max(shortest, 1e-9));
    Eigen::VectorXd gp, gm;
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      eval(xp, eps, &gp);
      eval(xm, eps, &gm);
      H.col(i) = (gp - gm) / (2 * h);
    }
    return 0.5 * (H + H.transpose());
  }
};

struct NewtonOutcome {
  bool converged = false;
  double grad_norm = 0.0;
};

NewtonOutcome damped_newton(const Problem& P, Eigen::VectorXd& x, double eps, double tol, int max_iter) {
  NewtonOutcome out;
  if (P.nfree == 0) {
    out.converged = true;
    return out;
  }
  Eigen::VectorXd g;
  double f = P.eval(x, eps, &g);
  for (int it = 0; it < max_iter; ++it) {
    out.grad_norm = g.norm();
    if (out.grad_norm < tol) {
      out.converged = true;
      return out;
    }
    Eigen::MatrixXd H = P.hessian(x, eps);
    const double reg = 1e-12 * std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
    H.diagonal().array() += reg;
    Eigen::VectorXd dx = H.ldlt().solve(-g);
    if (!dx.allFinite() || g.dot(dx) >= 0) dx = -g;
    double t = 1.0;
    bool moved = false;
    for (int k = 0; k < 60; ++k, t *= 0.5) {
      const Eigen::VectorXd xn = x + t * dx;
      if (!P.admissible(xn)) continue;
      Eigen::VectorXd gn;
      double fn;
      try {
        fn = P.eval(xn, eps, &gn);
      } catch (const SolverError&) {
        continue;
      }
      if (fn < f) {
        x = xn;
        f = fn;
        g = gn;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  out.grad_norm = g.norm();
  out.converged = out.grad_norm < tol;
  return out;
}

struct TreeResult {
  double cost = kInfCost;
  bool ok = false;
  std::vector<Eigen::Vector2d> junction_pos;
  std::vector<std::pair<int, int>> edges;  // global ids: terminals by index, junction j as -1 - j
  std::vector<int64_t> flow;
  std::string encoding;
  std::string warning;
};

// Merge free node a into node b (b may be fixed) and drop the edges that vanish.
void contract(Problem& P, Eigen::VectorXd& x, std::vector<int64_t>& flow, int a, int b) {
  const int nf = static_cast<int>(P.fixed.size());
  std::vector<std::pair<int, int>> edges;
  std::vector<double> coef;
  std::vector<int64_t> fl;
  const auto remap = [&](int v) {
    if (v == a) v = b;
    if (v > a) --v;
    return v;
  };
  for (std::size_t e = 0; e < P.edges.size(); ++e) {
    const int u = remap(P.edges[e].first), v = remap(P.edges[e].second);
    if (u == v) continue;
    edges.push_back({u, v});
    coef.push_back(P.coef[e]);
    fl.push_back(flow[e]);
  }
  Eigen::VectorXd nx(2 * (P.nfree - 1));
  int k = 0;
  for (int i = 0; i < P.nfree; ++i) {
    if (nf + i == a) continue;
    nx.segment<2>(2 * k++) = x.segment<2>(2 * i);
  }
  P.edges = edges;
  P.coef = coef;
  P.guesses.clear();
  P.nfree -= 1;
  x = nx;
  flow = fl;
}

TreeResult optimize_tree(const std::vector<Eigen::Vector2d>& term, const std::vector<int>& ids, const Topology& top,
                         const std::vector<int64_t>& flow0, const WeightedMetric& metric, const NetworkOptions& opt,
                         uint64_t stream) {
  TreeResult best;
  const int t = top.t;
  double scale = 0.0;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  for (const auto& q : term) center += q;
  center /= static_cast<double>(term.size());
  for (const auto& q : term) scale = std::max(scale, (q - center).norm());
  scale = std::max(scale, 1e-12);

  // Laplacian initial guess: each junction at the mean of its neighbours
  const int s = top.steiner;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(s, s);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(s, 2);
  for (const auto& [u, v] : top.edges) {
    for (auto [x, y] : {std::pair{u, v}, std::pair{v, u}}) {
      if (x < t) continue;
      A(x - t, x - t) += 1;
      if (y < t) {
        rhs.row(x - t) += term[y].transpose();
      } else {
        A(x - t, y - t) -= 1;
      }
    }
  }
  Eigen::MatrixXd init = s > 0 ? Eigen::MatrixXd(A.ldlt().solve(rhs)) : Eigen::MatrixXd(0, 2);

  for (int r = 0; r < std::max(1, opt.restarts); ++r) {
    std::mt19937_64 rng(opt.seed ^ (stream * 0x9E3779B97F4A7C15ULL + static_cast<uint64_t>(r)));
    std::normal_distribution<double> gauss(0.0, 0.1 * scale);
    Problem P;
    P.metric = &metric;
    P.fixed = term;
    P.nfree = s;
    P.edges = top.edges;
    P.min_x = opt.min_x;
    std::vector<int64_t> flow = flow0;
    for (int64_t f : flow) P.coef.push_back(static_cast<double>(std::abs(f)));
    Eigen::VectorXd x(2 * s);
    for (int i = 0; i < s; ++i) {
      Eigen::Vector2d q = init.row(i).transpose();
      if (r > 0) q += Eigen::Vector2d(gauss(rng), gauss(rng));
      if (metric.conformal()) q[0] = std::max(q[0], opt.min_x + 1e-3 * scale);
      x.segment<2>(2 * i) = q;
    }
    TreeResult res;
    try {
      for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) damped_newton(P, x, eps * scale, 1e-10, 200);
      // collapse junctions that ran into another node
      bool merged = true;
      while (merged) {
        merged = false;
        const int nf = static_cast<int>(P.fixed.size());
        for (int i = 0; i < P.nfree && !merged; ++i) {
          const Eigen::Vector2d qi = x.segment<2>(2 * i);
          for (int v = 0; v < nf + P.nfree && !merged; ++v) {
            if (v == nf + i) continue;
            if ((P.pos(x, v) - qi).norm() < 1e-5 * scale) {
              contract(P, x, flow, nf + i, v < nf + i ? v : v);
              merged = true;
            }
          }
        }
      }
      NewtonOutcome fin = damped_newton(P, x, 0.0, 1e-10, 200);
      if (!fin.converged) {
        res.warning = "junction optimization did not converge (gradient " + format_double(fin.grad_norm) + ")";
      } else {
        res.ok = true;
        res.cost = P.eval(x, 0.0, nullptr);
        const int nf = static_cast<int>(P.fixed.size());
        for (int i = 0; i < P.nfree; ++i) res.junction_pos.push_back(x.segment<2>(2 * i));
        for (std::size_t e = 0; e < P.edges.size(); ++e) {
          const auto g = [&](int v) { return v < nf ? ids[v] : -1 - (v - nf); };
          res.edges.push_back({g(P.edges[e].first), g(P.edges[e].second)});
          res.flow.push_back(flow[e]);
        }
      }
    } catch (const SolverError& e) {
      res.warning = e.what();
    }
    if (res.ok && (!best.ok || res.cost < best.cost - 1e-12)) {
      best = res;
    } else if (!best.ok && !res.ok) {
      best.warning = res.warning;
    }
  }
  return best;
}

std::string encode(const std::vector<int>& ids, const Topology& top) {
  std::string s;
  for (const auto& [u, v] : top.edges) {
    const auto name = [&](int x) { return x < top.t ? "T" + std::to_string(ids[x]) : "S" + std::to_string(x - top.t); };
    if (!s.empty()) s += ",";
    s += name(u) + "-" + name(v);
  }
  return s;
}

}  // namespace

std::vector<Eigen::Vector2d> WeightedNetwork::weighted_tangents(int v) const {
  std::vector<Eigen::Vector2d> out;
  for (const NetworkArc& a : arcs) {
    if (a.from == v) out.push_back(static_cast<double>(a.multiplicity) * a.start_tangent);
    if (a.to == v) out.push_back(-static_cast<double>(a.multiplicity) * a.end_tangent);
  }
  return out;
}

int64_t WeightedNetwork::kirchhoff(int v) const {
  int64_t s = 0;
  for (const NetworkArc& a : arcs) {
    if (a.to == v) s += a.multiplicity;
    if (a.from == v) s -= a.multiplicity;
  }
  return s;
}

WeightedNetwork solve_network(const std::vector<Terminal>& terminals, int64_t p, const WeightedMetric& metric,
                              const NetworkOptions& opt) {
  if (p < 2) throw ValidationError("modulus p must be at least 2");
  if (terminals.size() > 6) throw ValidationError("solve_network is limited to 6 terminals");
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    if (!terminals[i].pos.allFinite()) throw ValidationError("terminal position is not finite");
    if (metric.conformal() && !(terminals[i].pos[0] >= opt.min_x && terminals[i].pos[0] > 0)) {
      throw ValidationError("terminals must lie in the half-plane x > 0 (and x >= min_x)");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if ((terminals[i].pos - terminals[j].pos).norm() < 1e-12) throw ValidationError("terminals must be distinct");
    }
  }
  std::vector<int> active;
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    if (reduce_coeff(terminals[i].multiplicity, p) != 0) active.push_back(static_cast<int>(i));
  }
  const int k = static_cast<int>(active.size());
  int64_t total = 0;
  for (int i : active) total += terminals[i].multiplicity;
  if (reduce_coeff(total, p) != 0) throw ValidationError("boundary does not bound mod p");

  // jobs: every residue-0 subset of size >= 2 with each of its full topologies
  struct Job {
    uint32_t mask;
    std::vector<int> ids;
    Topology top;
    std::vector<int64_t> flow;
    std::string encoding;
  };
  std::vector<Job> jobs;
  const uint32_t full = k > 0 ? (1u << k) - 1 : 0;
  std::vector<std::vector<Topology>> by_size(k + 1);
  for (int t = 2; t <= k; ++t) by_size[t] = full_topologies(t);
  for (uint32_t mask = 1; mask <= full; ++mask) {
    std::vector<int> ids;
    std::vector<int64_t> mu;
    int64_t sum = 0;
    for (int b = 0; b < k; ++b) {
      if (mask & (1u << b)) {
        ids.push_back(active[b]);
        mu.push_back(terminals[active[b]].multiplicity);
        sum += terminals[active[b]].multiplicity;
      }
    }
    if (ids.size() < 2 || reduce_coeff(sum, p) != 0) continue;
    for (const Topology& top : by_size[ids.size()]) {
      std::vector<int64_t> flow = edge_flows(top, mu, p);
      // a zero edge splits the tree; the forest split covers that case
      if (std::any_of(flow.begin(), flow.end(), [](int64_t f) { return f == 0; })) continue;
      jobs.push_back({mask, ids, top, flow, encode(ids, top)});
    }
  }

  std::vector<TreeResult> results(jobs.size());
#pragma omp parallel for schedule(dynamic) num_threads(thread_budget())
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(jobs.size()); ++j) {
    const Job& job = jobs[j];
    std::vector<Eigen::Vector2d> pos;
    for (int i : job.ids) pos.push_back(terminals[i].pos);
    results[j] = optimize_tree(pos, job.ids, job.top, job.flow, metric, opt, static_cast<uint64_t>(j));
    results[j].encoding = job.encoding;
  }

  WeightedNetwork net;
  net.p = p;
  net.metric = metric;
  net.topologies_tried = static_cast<int>(jobs.size());
  std::vector<double> tree(full + 1, kInfCost);
  std::vector<int> tree_job(full + 1, -1);
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (!results[j].ok) {
      ++net.topologies_skipped;
      net.warnings.push_back("topology " + jobs[j].encoding + " skipped: " + results[j].warning);
      continue;
    }
    const uint32_t m = jobs[j].mask;
    if (results[j].cost < tree[m] - 1e-12) {
      tree[m] = results[j].cost;
      tree_job[m] = static_cast<int>(j);
    }
  }
  // forest over residue-0 groups
  std::vector<double> F(full + 1, kInfCost);
  std::vector<uint32_t> split(full + 1, 0);
  if (k == 0) F[0] = 0.0;
  for (uint32_t m = 1; m <= full; ++m) {
    F[m] = tree[m];
    const uint32_t low = m & (~m + 1);
    for (uint32_t s = (m - 1) & m; s > 0; s = (s - 1) & m) {
      if (!(s & low)) continue;
      const double v = F[s] + F[m ^ s];
      if (v < F[m] - 1e-12) {
        F[m] = v;
        split[m] = s;
      }
    }
  }
  if (k > 0 && !(F[full] < kInfCost)) throw SolverError("every topology was skipped");

  for (const Terminal& t : terminals) net.nodes.push_back({t.pos, true, t.multiplicity});
  std::vector<std::string> parts;
  std::function<void(uint32_t)> emit = [&](uint32_t m) {
    if (m == 0) return;
    if (split[m] != 0) {
      emit(split[m]);
      emit(m ^ split[m]);
      return;
    }
    const TreeResult& r = results[tree_job[m]];
    parts.push_back(r.encoding);
    const int base = static_cast<int>(net.nodes.size());
    for (const auto& q : r.junction_pos) net.nodes.push_back({q, false, 0});
    for (std::size_t e = 0; e < r.edges.size(); ++e) {
      const auto node = [&](int g) { return g >= 0 ? g : base + (-1 - g); };
      int from = node(r.edges[e].first), to = node(r.edges[e].second);
      int64_t f = r.flow[e];
      if (f < 0) {
        std::swap(from, to);
        f = -f;
      }
      NetworkArc arc;
      arc.from = from;
      arc.to = to;
      arc.multiplicity = f;
      const GeodesicArc g = geodesic_between(net.nodes[from].pos, net.nodes[to].pos, metric);
      arc.path = g.path;
      arc.length = g.length;
      arc.start_tangent = g.start_tangent;
      arc.end_tangent = g.end_tangent;
      net.arcs.push_back(arc);
    }
  };
  emit(full);
  for (std::size_t i = 0; i < parts.size(); ++i) net.topology += (i ? " | " : "") + parts[i];

  net.mass = 0.0;
  for (const NetworkArc& a : net.arcs) net.mass += static_cast<double>(a.multiplicity) * a.length;
  for (int v = 0; v < static_cast<int>(net.nodes.size()); ++v) {
    if (reduce_coeff(net.kirchhoff(v) - net.nodes[v].boundary, p) != 0) {
      throw SolverError("network violates the mod p node condition");
    }
    if (net.nodes[v].terminal) continue;
    const auto tans = net.weighted_tangents(v);
    if (tans.size() < 3) continue;
    Eigen::Vector2d s = Eigen::Vector2d::Zero();
    for (const auto& t : tans) s += t;
    net.junctions.push_back(v);
    net.balance_residuals.push_back(s.norm());
  }
  return net;
}

double path_network_mass(const std::vector<Terminal>& terminals, int64_t p, const WeightedMetric& metric) {
  if (terminals.size() > 8) throw ValidationError("path network limited to 8 terminals");
  std::vector<int> order(terminals.size());
  std::iota(order.begin(), order.end(), 0);
  double best = kInfCost;
  do {
    double mass = 0.0;
    int64_t running = 0;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      running += terminals[order[i]].multiplicity;
      const int64_t f = std::abs(reduce_coeff(running, p));
      if (f == 0) continue;
      const Eigen::Vector2d& a = terminals[order[i]].pos;
      const Eigen::Vector2d& b = terminals[order[i + 1]].pos;
      double len = weighted_length(Polyline{{a, 0.5 * (a + b), b}, false}, metric);
      try {
        len = std::min(len, geodesic_between(a, b, metric).length);
      } catch (const SolverError&) {
        // no connecting geodesic; the straight segment still bounds the path
      }
      mass += static_cast<double>(f) * len;
    }
    best = std::min(best, mass);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

std::vector<Terminal> terminals_from_json(const json& j) {
  std::vector<Terminal> out;
  try {
    const json& arr = j.is_array() ? j : j.at("terminals");
    for (const json& t : arr) {
      Vec v = vec_from_json(t.at("pos"));
      if (v.size() != 2) throw ValidationError("terminal position needs two coordinates");
      out.push_back({Eigen::Vector2d(v[0], v[1]), t.value("multiplicity", int64_t{1})});
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed terminals JSON: ") + e.what());
  }
  return out;
}

json terminals_to_json(const std::vector<Terminal>& t) {
  json arr = json::array();
  for (const Terminal& x : t) arr.push_back({{"pos", {x.pos[0], x.pos[1]}}, {"multiplicity", x.multiplicity}});
  return {{"terminals", arr}};
}

json network_to_json(const WeightedNetwork& n) {
  json nodes = json::array();
  for (const NetworkNode& v : n.nodes) {
    nodes.push_back({{"pos", {v.pos[0], v.pos[1]}}, {"terminal", v.terminal}, {"boundary", v.boundary}});
  }
  json arcs = json::array();
  for (const NetworkArc& a : n.arcs) {
    json path = json::array();
    for (const auto& q : a.path.pts) path.push_back({q[0], q[1]});
    arcs.push_back({{"from", a.from},
                    {"to", a.to},
                    {"multiplicity", a.multiplicity},
                    {"length", a.length},
                    {"start_tangent", {a.start_tangent[0], a.start_tangent[1]}},
                    {"end_tangent", {a.end_tangent[0], a.end_tangent[1]}},
                    {"geometry", n.metric.conformal() ? "weighted-geodesic" : "straight"},
                    {"path", path}});
  }
  return {{"p", n.p},
          {"weight", n.metric.name()},
          {"nodes", nodes},
          {"arcs", arcs},
          {"mass", n.mass},
          {"junctions", n.junctions},
          {"balance_residuals", n.balance_residuals},
          {"topology", n.topology},
          {"topologies_tried", n.topologies_tried},
          {"topologies_skipped", n.topologies_skipped},
          {"warnings", n.warnings}};
}

WeightedNetwork network_from_json(const json& j) {
  WeightedNetwork n;
  try {
    n.p = j.at("p").get<int64_t>();
    n.metric = WeightedMetric::parse(j.at("weight").get<std::string>());
    for (const json& v : j.at("nodes")) {
      Vec q = vec_from_json(v.at("pos"));
      n.nodes.push_back({Eigen::Vector2d(q[0], q[1]), v.at("terminal").get<bool>(), v.at("boundary").get<int64_t>()});
    }
    for (const json& a : j.at("arcs")) {
      NetworkArc arc;
      arc.from = a.at("from").get<int>();
      arc.to = a.at("to").get<int>();
      arc.multiplicity = a.at("multiplicity").get<int64_t>();
      arc.length = a.at("length").get<double>();
      Vec st = vec_from_json(a.at("start_tangent")), en = vec_from_json(a.at("end_tangent"));
      arc.start_tangent = Eigen::Vector2d(st[0], st[1]);
      arc.end_tangent = Eigen::Vector2d(en[0], en[1]);
      for (const json& q : a.at("path")) {
        Vec v = vec_from_json(q);
        arc.path.pts.emplace_back(v[0], v[1]);
      }
      const int nn = static_cast<int>(n.nodes.size());
      if (arc.from < 0 || arc.from >= nn || arc.to < 0 || arc.to >= nn) throw ValidationError("arc node out of range");
      n.arcs.push_back(arc);
    }
    n.mass = j.at("mass").get<double>();
    n.junctions = j.at("junctions").get<std::vector<int>>();
    n.balance_residuals = j.at("balance_residuals").get<std::vector<double>>();
    n.topology = j.value("topology", std::string());
    n.topologies_tried = j.value("topologies_tried", 0);
    n.topologies_skipped = j.value("topologies_skipped", 0);
    n.warnings = j.value("warnings", std::vector<std::string>{});
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed network JSON: ") + e.what());
  }
  return n;
}

}  // namespace modp
