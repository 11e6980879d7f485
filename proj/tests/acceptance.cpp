// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "modp/books.hpp"
#include "modp/cone1d.hpp"
#include "modp/flat.hpp"
#include "modp/json_util.hpp"
#include "modp/mesh.hpp"
#include "modp/monotonicity.hpp"
#include "modp/network.hpp"
#include "modp/sample.hpp"
#include "modp/taylor.hpp"
#include "modp/whitney.hpp"

using namespace modp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += "failed: " + what;
    }
  }
  void note(const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Eigen::Vector2d at(double deg) { return {std::cos(deg * M_PI / 180), std::sin(deg * M_PI / 180)}; }

RayConfiguration rays(const std::vector<double>& deg, const std::vector<int64_t>& kappa, int64_t p,
                      std::vector<int> signs = {}) {
  RayConfiguration c;
  for (double d : deg) c.dirs.push_back(at(d));
  c.kappa = kappa;
  c.p = p;
  c.signs = signs.empty() ? std::vector<int>(deg.size(), 1) : signs;
  return c;
}

// 1. ------------------------------------------------------------------------

Outcome cone_structure() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const StructureReport y = check_structure(rays({90, 210, 330}, {1, 1, 1}, 3));
  const StructureReport five = check_structure(rays({0, 180, 120, 240}, {2, 1, 1, 1}, 5));
  const StructureReport half = check_structure(rays({0, 180}, {2, 2}, 4));
  const StructureReport half6 = check_structure(rays({0, 120, 240}, {3, 2, 1}, 6));
  const double secs = seconds_since(t0);
  o.require(y.all(), "y120 flags");
  o.require(y.balance_residual <= 1e-9, "y120 balance");
  o.require(five.all() && five.balance_residual <= 1e-9, "p = 5 four-ray fixture");
  o.require(!half.all() && !half.multiplicity_bounds, "kappa = p/2 rejected (p = 4)");
  o.require(!half6.all() && !half6.multiplicity_bounds, "kappa = p/2 rejected (p = 6)");
  o.require(secs < 1.0, "runtime < 1 s");
  o.note("y120 balance " + fmt(y.balance_residual) + ", p5 balance " + fmt(five.balance_residual) + ", " +
         fmt(secs) + " s");
  return o;
}

// 2. ------------------------------------------------------------------------

Outcome segment_swap() {
  Outcome o;
  const CompetitorCertificate s = segment_swap_certificate(rays({0, 120, 240}, {1, 1, 1}, 3, {-1, 1, 1}), 0, 1);
  const double err = std::abs(s.mass_change - (std::sqrt(3.0) - 2));
  o.require(err <= 1e-12, "120 degrees gives sqrt(3) - 2");
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 360);
  int exact = 0, tried = 0;
  while (tried < 100) {
    const double a = u(rng), b = u(rng);
    const double gap = std::abs(std::remainder(a - b, 360.0));
    if (gap < 1e-3 || std::abs(gap - 180) < 1e-3) continue;
    RayConfiguration r = rays({a, b}, {1, 1}, 3, {1, -1});
    ++tried;
    exact += segment_swap_certificate(r, 0, 1).mass_change == (r.dirs[0] - r.dirs[1]).norm() - 2;
  }
  o.require(exact == tried, "mass_change == |v1 - v2| - 2 on random pairs");
  o.note("error at 120 deg " + fmt(err) + ", exact on " + std::to_string(exact) + "/" + std::to_string(tried));
  return o;
}

// 3. ------------------------------------------------------------------------

double fermat_cost(const std::vector<Eigen::Vector2d>& pts, const std::vector<double>& w, const Eigen::Vector2d& y) {
  double s = 0.0;
  for (std::size_t j = 0; j < pts.size(); ++j) s += w[j] * (pts[j] - y).norm();
  return s;
}

// Step 1e-2 over [-1, 1]^2, then step 1e-4 within +-5 coarse cells of the
// coarse winner (the cost is convex).
Eigen::Vector2d grid_fermat(const std::vector<Eigen::Vector2d>& pts, const std::vector<double>& w) {
  Eigen::Vector2d best(0, 0);
  double bc = INFINITY;
  for (int i = -100; i <= 100; ++i) {
    for (int k = -100; k <= 100; ++k) {
      const Eigen::Vector2d y(i * 1e-2, k * 1e-2);
      const double c = fermat_cost(pts, w, y);
      if (c < bc) {
        bc = c;
        best = y;
      }
    }
  }
  const Eigen::Vector2d coarse = best;
  for (int i = -500; i <= 500; ++i) {
    for (int k = -500; k <= 500; ++k) {
      const Eigen::Vector2d y = coarse + Eigen::Vector2d(i * 1e-4, k * 1e-4);
      const double c = fermat_cost(pts, w, y);
      if (c < bc) {
        bc = c;
        best = y;
      }
    }
  }
  return best;
}

Outcome barycenter() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ang(0, 360);
  int done = 0, negative = 0, matched = 0;
  double worst_change = -INFINITY, worst_dist = 0.0;
  while (done < 100) {
    const int64_t p = 2 + static_cast<int64_t>(rng() % 5);
    const int n = 2 + static_cast<int>(rng() % 6);
    std::vector<double> deg;
    std::vector<int64_t> kap;
    for (int i = 0; i < n; ++i) {
      deg.push_back(ang(rng));
      kap.push_back(1 + static_cast<int64_t>(rng() % p));
    }
    RayConfiguration c = rays(deg, kap, p);
    if (c.total() < 2 * p) continue;
    bool distinct = true;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < i; ++k) distinct &= (c.dirs[i] - c.dirs[k]).norm() > 1e-6;
    if (!distinct) continue;
    const CompetitorCertificate b = barycenter_certificate(c, find_heavy_hemisphere(c));
    negative += b.mass_change < 0;
    worst_change = std::max(worst_change, b.mass_change);
    std::vector<Eigen::Vector2d> pts;
    std::vector<double> w;
    for (std::size_t k = 0; k < b.replaced_rays.size(); ++k) {
      pts.push_back(c.dirs[b.replaced_rays[k]]);
      w.push_back(static_cast<double>(b.m_plus[k]));
    }
    const Eigen::Vector2d g = grid_fermat(pts, w);
    double dist;
    if (pts.size() == 2 && w[0] == w[1]) {
      // the whole chord minimizes; measure both points against it
      const Eigen::Vector2d a = pts[0], d = pts[1] - pts[0];
      const auto off_chord = [&](const Eigen::Vector2d& y) {
        const double t = std::clamp((y - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
        return (y - a - t * d).norm();
      };
      dist = std::max(off_chord(b.z), off_chord(g));
    } else {
      dist = (b.z - g).norm();
    }
    worst_dist = std::max(worst_dist, dist);
    matched += dist <= 2e-4;
    ++done;
  }
  o.require(negative == done, "mass_change < 0");
  o.require(matched == done, "z within 2 grid cells of the grid minimizer");
  o.note(std::to_string(done) + " configurations, max mass_change " + fmt(worst_change) + ", max |z - grid| " +
         fmt(worst_dist));
  return o;
}

// 4. ------------------------------------------------------------------------

IntegerChain random_chain(const SimplicialComplex& K, int k, std::mt19937_64& rng, int spread) {
  std::uniform_int_distribution<int> coef(-spread, spread);
  IntegerChain c(k);
  for (std::size_t i = 0; i < K.count(k); ++i) c.set(i, coef(rng));
  return c;
}

Outcome flat_norm() {
  Outcome o;
  double slowest = 0.0;
  const auto timed = [&](const std::function<double()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    const double v = f();
    slowest = std::max(slowest, seconds_since(t0));
    return v;
  };

  const SimplicialComplex tri = unit_right_triangle_complex();
  IntegerChain t(2);
  t.set(0, 1);
  const IntegerChain T0 = boundary(tri, t);
  const double tri_value = timed([&] { return flat_norm_modp(tri, T0, 3).value; });
  o.require(std::abs(tri_value - 0.5) <= 1e-12, "triangle value 0.5");

  struct Case {
    std::string name;
    SimplicialComplex K;
    int64_t p;
  };
  std::vector<Case> cases;
  for (int64_t p : {2, 3}) {
    cases.push_back({"grid 2x3", grid_complex(2, 3), p});
    cases.push_back({"disk h=1", disk_mesh(1.0), p});
    cases.push_back({"triangle", unit_right_triangle_complex(), p});
  }
  for (int64_t p : {4, 5}) cases.push_back({"grid 2x2", grid_complex(2, 2), p});
  std::mt19937_64 rng(17);
  int oracle_cases = 0, oracle_equal = 0;
  double oracle_err = 0.0;
  for (const Case& c : cases) {
    if (c.K.count(c.K.top_degree()) > 12) throw std::logic_error("oracle fixture too large");
    for (int trial = 0; trial < 4; ++trial) {
      const IntegerChain T = random_chain(c.K, 1, rng, 2);
      const double ilp = timed([&] { return flat_norm_modp(c.K, T, c.p).value; });
      const double oracle = brute_force_flat_oracle(c.K, T, c.p, c.p / 2);
      const double err = std::abs(ilp - oracle);
      oracle_err = std::max(oracle_err, err);
      ++oracle_cases;
      oracle_equal += err <= 1e-12 * std::max(1.0, oracle);
    }
  }
  o.require(oracle_equal == oracle_cases, "ILP equals the exhaustive oracle");

  const SimplicialComplex K = grid_complex(2, 3);
  std::mt19937_64 rng2(5);
  int invariant = 0;
  double inv_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const IntegerChain T = random_chain(K, 1, rng2, 2);
    const IntegerChain Q = random_chain(K, 1, rng2, 4);
    const double a = timed([&] { return flat_norm_modp(K, T, 3).value; });
    const double b = timed([&] { return flat_norm_modp(K, T + Q.scaled(3), 3).value; });
    inv_err = std::max(inv_err, std::abs(a - b));
    invariant += std::abs(a - b) <= 1e-12 * std::max(1.0, a);
  }
  o.require(invariant == 100, "invariance under T + pQ");

  const SimplicialComplex G = grid_complex(2, 2);
  std::mt19937_64 rng3(23);
  int triangle_ok = 0;
  double worst_slack = INFINITY;
  for (int trial = 0; trial < 100; ++trial) {
    const IntegerChain A = random_chain(G, 1, rng3, 2);
    const IntegerChain B = random_chain(G, 1, rng3, 2);
    const IntegerChain C = random_chain(G, 1, rng3, 2);
    const double ab = timed([&] { return flat_distance_modp(G, A, B, 3); });
    const double ac = timed([&] { return flat_distance_modp(G, A, C, 3); });
    const double cb = timed([&] { return flat_distance_modp(G, C, B, 3); });
    worst_slack = std::min(worst_slack, ac + cb - ab);
    triangle_ok += ab <= ac + cb + 1e-9;
  }
  o.require(triangle_ok == 100, "triangle inequality");
  o.require(slowest < 5.0, "runtime per instance < 5 s");
  o.note("oracle " + std::to_string(oracle_equal) + "/" + std::to_string(oracle_cases) + " (max diff " +
         fmt(oracle_err) + "), invariance 100 (max diff " + fmt(inv_err) + "), triangle 100 (min slack " +
         fmt(worst_slack) + "), slowest " + fmt(slowest) + " s");
  return o;
}

// 5. ------------------------------------------------------------------------

double angle_deg(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return std::acos(std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0)) * 180 / M_PI;
}

Outcome plateau_steiner() {
  Outcome o;
  for (double h : {0.2, 0.1, 0.05}) {
    const SimplicialComplex K = disk_mesh(h);
    IntegerChain b(0);
    for (double a : {90.0, 210.0, 330.0}) {
      Vec x(2);
      x << std::cos(a * M_PI / 180), std::sin(a * M_PI / 180);
      b.add(nearest_vertex(K, x), 1);
    }
    const PlateauSolution s = plateau_modp(K, reduce_modp(b, 3));
    const double err = std::abs(s.mass - 3.0);
    o.require(err <= 2 * h, "mesh error <= 2h at h = " + fmt(h));
    o.note("h " + fmt(h) + ": mass " + fmt(s.mass));
  }
  const std::vector<Terminal> t = {{at(90), 1}, {at(210), 1}, {at(330), 1}};
  const WeightedNetwork n = solve_network(t, 3, WeightedMetric{});
  o.require(std::abs(n.mass - 3.0) <= 1e-6, "network mass 3 +- 1e-6");
  double worst = 0.0;
  if (n.junctions.size() != 1) {
    o.require(false, "one junction");
  } else {
    const auto tan = n.weighted_tangents(n.junctions[0]);
    o.require(tan.size() == 3, "three arcs at the junction");
    for (std::size_t a = 0; a < tan.size(); ++a)
      for (std::size_t c = a + 1; c < tan.size(); ++c) worst = std::max(worst, std::abs(angle_deg(tan[a], tan[c]) - 120));
  }
  o.require(worst <= 1e-5, "junction angles 120 +- 1e-5 degrees");
  o.note("network mass " + fmt(n.mass) + ", angle error " + fmt(worst) + " deg");
  return o;
}

// 6, 7. ---------------------------------------------------------------------

const RevolvedCurrent& taylor_p3() {
  static const RevolvedCurrent R = build_taylor_example(3, {-40, 0, 40}, 1.0, WeightedMetric::parse("x"));
  return R;
}

Outcome taylor() {
  Outcome o;
  const RevolvedCurrent& R = taylor_p3();
  o.require(R.circles.size() == 1, "exactly one singular circle");
  if (R.circles.size() != 1) return o;
  const SingularCircle& c = R.circles[0];
  const double dens = density_ratio(R.sample, circle_point(c, 0.0), 0.1);
  o.require(std::abs(dens - 1.5) <= 3 * R.delta, "density 1.5 +- 3 delta");
  o.require(c.balance_residual < 1e-5, "balance residual < 1e-5");
  const double h = 0.05;
  const MeshCrossCheck m = taylor_mesh_crosscheck(R, h);
  o.require(std::abs(m.mesh_mass - m.network_mass) <= 2 * h, "mesh agreement within 2h");
  o.note("density " + fmt(dens) + " (delta " + fmt(R.delta) + "), balance " + fmt(c.balance_residual) +
         ", network " + fmt(m.network_mass) + " vs mesh " + fmt(m.mesh_mass) + " at h " + fmt(h));
  return o;
}

// value(r) <= C (r / r0)^alpha value(r0) with C fit at the second rung
bool decay_bound(const std::vector<double>& r, const std::vector<double>& v, double alpha, double* C) {
  *C = fit_decay_constant(r, v, alpha);
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (v[i] > *C * std::pow(r[i] / r[0], alpha) * v[0] * (1 + 1e-12) + 1e-15) return false;
  }
  return true;
}

Outcome decay() {
  Outcome o;
  const RevolvedCurrent& R = taylor_p3();
  if (R.circles.empty()) {
    o.require(false, "singular circle present");
    return o;
  }
  const std::vector<double> radii{0.2, 0.1, 0.05, 0.025};
  const DecayScan d = decay_scan(R, circle_point(R.circles[0], 0.0), radii);
  std::vector<double> ex, fl;
  for (const DecayRow& row : d.rows) {
    ex.push_back(row.excess);
    fl.push_back(row.flat_distance);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < ex.size(); ++i) monotone &= ex[i] <= ex[i - 1];
  double Ce = 0.0, Cf = 0.0;
  o.require(ex.size() == radii.size(), "four rungs");
  o.require(monotone && d.monotone, "excess ladder nonincreasing");
  o.require(decay_bound(radii, ex, 0.5, &Ce) && d.excess_bound_holds, "excess r^(1/2) bound");
  o.require(decay_bound(radii, fl, 0.25, &Cf) && d.flat_bound_holds, "flat r^(1/4) bound");
  std::string e = "excess", f = "flat";
  for (std::size_t i = 0; i < ex.size(); ++i) {
    e += " " + fmt(ex[i]);
    f += " " + fmt(fl[i]);
  }
  o.note(e + " (C " + fmt(Ce) + "), " + f + " (C " + fmt(Cf) + ")");
  return o;
}

// 8. ------------------------------------------------------------------------

// Each (center, radius) gets one uniform draw; layer-0 shadows always pass.
struct RandomOracle {
  std::mt19937_64 rng;
  double scale;
  std::map<std::pair<std::vector<double>, double>, double> memo;

  RandomOracle(uint64_t seed, double s) : rng(seed), scale(s) {}
  double operator()(const Vec& y, double r) {
    std::pair<std::vector<double>, double> key{std::vector<double>(y.data(), y.data() + y.size()), r};
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const double v = r >= 4.0 ? 0.0 : std::uniform_real_distribution<double>(0, scale)(rng);
    memo[key] = v;
    return v;
  }
};

Outcome whitney() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  long counted = 0, enumerated = 0, count_bad = 0, dd_bad = 0;
  for (int m : {2, 3, 4}) {
    for (int M : {1, 2, 3}) {
      const WhitneyDecomposition D(m, M, 7);
      for (int k = 0; k < D.depth(); ++k) {
        const double expected = std::pow(2.0, m * M) * std::pow(2.0, (m - 1) * (k + 2));
        ++counted;
        count_bad += D.layer_count(k) != expected;
        if (expected > 2e5) continue;
        const auto cubes = D.layer(k);
        count_bad += double(cubes.size()) != expected;
        for (const WhitneyCube& Q : cubes) {
          ++enumerated;
          dd_bad += !D.dist_diam_holds(Q);
        }
      }
    }
  }
  o.require(count_bad == 0, "layer counts 2^(mM) 2^((m-1)(k+2))");
  o.require(dd_bad == 0, "distance-diameter comparison on every cube");

  std::mt19937_64 rng(2024);
  int ok = 0, closure_bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const int m = 2 + int(rng() % 2);
    const int M = m == 2 ? 1 + int(rng() % 2) : 1;
    const int depth = 1 + int(rng() % (m == 2 ? 3 : 2));
    const WhitneyDecomposition D(m, M, depth);
    RandomOracle oracle(rng(), 0.02);
    const double tau = 0.08 + 0.08 * double(rng() % 100) / 100.0;
    const WhitneyDomain W = whitney_domain([&](const Vec& y, double r) { return oracle(y, r); }, tau, D);
    const auto cubes = W.cubes();
    std::vector<WhitneyCube> tops;
    for (const auto& Q : cubes) {
      if (D.in_top_sublayer(Q)) {
        tops.push_back(Q);
      } else if (!W.contains(D.immediately_above(Q))) {
        ++closure_bad;
      }
    }
    const WhitneyCube top = tops[rng() % tops.size()];
    const int kappa0 = 1 + int(rng() % 5);
    std::map<WhitneyCube, int> hbar;
    for (const auto& Q : cubes) hbar[Q] = 1 + int(rng() % kappa0);
    const SelectionReport r = global_selection(W, hbar, top, kappa0);
    ok += r.p1 && r.p2 && r.p3 && r.bound_holds;
  }
  o.require(closure_bad == 0, "upward closure");
  o.require(ok == 1000, "(p1)-(p3) on 1000 randomized trials");

  const auto t8 = std::chrono::steady_clock::now();
  const WhitneyDecomposition D(2, 2, 8);
  const WhitneyDomain W = whitney_domain([](const Vec&, double) { return 0.0; }, 0.05, D);
  std::mt19937_64 rng8(0);
  const int kappa0 = 4;
  std::map<WhitneyCube, int> hbar;
  for (const auto& Q : W.cubes()) hbar[Q] = 1 + int(rng8() % kappa0);
  const SelectionReport r = global_selection(W, hbar, WhitneyCube{0, 3, {8}}, kappa0);
  double worst_ratio = 0.0;
  const double bound = std::ldexp(1.0, 2) + std::ldexp(1.0, 2) / 7;
  for (const auto& [q, s] : r.tail_sum) {
    if (!D.in_top_sublayer(q)) worst_ratio = std::max(worst_ratio, s / bound);
  }
  const double secs8 = seconds_since(t8);
  o.require(r.p1 && r.p2 && r.p3, "depth 8 selection properties");
  o.require(r.bound_holds && worst_ratio <= 1.0, "depth 8 tail sum <= 2^M + 2^M/7");
  o.require(secs8 < 10.0, "depth 8 runtime < 10 s");
  o.note(std::to_string(counted) + " layers counted, " + std::to_string(enumerated) + " cubes enumerated, " +
         std::to_string(ok) + " trials, depth-8 tail ratio " + fmt(worst_ratio) + " in " + fmt(secs8) +
         " s, total " + fmt(seconds_since(t0)) + " s");
  return o;
}

// 9. ------------------------------------------------------------------------

Outcome monotonicity() {
  Outcome o;
  Eigen::MatrixXd spine = Eigen::MatrixXd::Zero(3, 1);
  spine(2, 0) = 1;
  std::vector<Eigen::Vector2d> dirs{at(90), at(210), at(330)};
  const OpenBook S = OpenBook::make(2, 1, spine, OpenBook::default_plane(spine, 3), dirs);
  double worst = 0.0;
  for (const std::vector<double>& f : {std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 1}}) {
    const VarifoldSample C = sample_book(S, f, 1.0, 0.01);
    const auto prof = density_profile(C, Vec::Zero(3), {0.1, 0.2, 0.5, 0.9});
    for (double t : prof) worst = std::max(worst, std::abs(t - prof.front()));
  }
  o.require(worst <= 1e-12, "cone density profile constant to 1e-12");

  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3, 2);
  B(0, 0) = 1;
  B(1, 1) = 1;
  const VarifoldSample P = sample_disk(Vec::Zero(3), B, 1.0, 1e-3);
  HomogeneousFunction g;
  g.k = 1;
  g.ghat = [](const Vec&) { return 1.0; };
  g.ghat_sup = 1.0;
  // g = |q|, alpha = 1: lhs = 1/2 int |q|^-1 = pi, rhs = 4 int |q|^2 = 2 pi
  const MonotonicityReport r = weighted_monotonicity_check(P, Vec::Zero(3), g, 1.0, 1.0);
  const double el = std::abs(r.lhs / M_PI - 1), er = std::abs(r.rhs_main / (2 * M_PI) - 1);
  o.require(el < 0.005 && er < 0.005, "plane closed form within 0.5%");
  o.require(std::abs(r.rhs_perp) <= 1e-12, "plane perpendicular term vanishes");
  o.note("cone profile spread " + fmt(worst) + ", plane lhs rel err " + fmt(el) + ", rhs rel err " + fmt(er));
  return o;
}

// 10. -----------------------------------------------------------------------

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "modp_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto p = [&](const std::string& n) { return (dir / n).string(); };
  const auto run = [&](const std::string& args) {
    const std::string cmd = std::string(MODP_CLI_PATH) + " " + args + " >" + p("stdout.txt") + " 2>" + p("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  if (run("make-fixture y120 --out " + p("y120.json")) != 0 ||
      run("make-fixture triangle-complex --out " + p("tri.json")) != 0 ||
      run("make-fixture tilted-plane --delta 0.01 --out " + p("tilt.json")) != 0 ||
      run("taylor --p 3 --angles -40,0,40 --out " + p("surface.json")) != 0) {
    o.require(false, "fixture generation");
    return o;
  }
  json t{{"terminals",
          {{{"pos", {0.0, 1.0}}, {"multiplicity", 1}},
           {{"pos", {-0.8660254037844386, -0.5}}, {"multiplicity", 1}},
           {{"pos", {0.8660254037844386, -0.5}}, {"multiplicity", 1}}}}};
  write_json_file(p("t.json"), t);
  // {command, extra output flag or empty}
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"classify-cone --p 3 --config " + p("y120.json"), ""},
      {"flat-norm --complex " + p("tri.json") + " --chain " + p("tri.json") + " --p 3", ""},
      {"solve-network --terminals " + p("t.json") + " --p 3 --seed 7", ""},
      {"taylor --p 3 --angles -40,0,40", ""},
      {"decay-scan --surface " + p("surface.json") + " --radii 0.2,0.1,0.05,0.025 --no-flat", "--csv"},
      {"whitney --m 2 --M 2 --depth 6 --tau 0.05 --kappa0 3 --seed 1 --excess-from " + p("surface.json"), "--csv"},
      {"monotonicity --sample " + p("tilt.json") + " --center 0,0,0 --radii 0.25,0.5,1", "--csv"},
  };
  int same = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const auto& [cmd, extra] = commands[i];
    std::string outs[2], csvs[2];
    bool ran = true;
    for (int rep = 0; rep < 2; ++rep) {
      const std::string tag = std::to_string(i) + "_" + std::to_string(rep);
      std::string args = cmd + " --out " + p("out" + tag + ".json");
      if (!extra.empty()) args += " " + extra + " " + p("out" + tag + ".csv");
      ran &= run(args) == 0;
      outs[rep] = slurp(p("out" + tag + ".json"));
      if (!extra.empty()) csvs[rep] = slurp(p("out" + tag + ".csv"));
    }
    const bool identical = ran && !outs[0].empty() && outs[0] == outs[1] && csvs[0] == csvs[1];
    same += identical;
    o.require(identical, cmd.substr(0, cmd.find(' ')));
  }
  o.note(std::to_string(same) + "/" + std::to_string(commands.size()) + " commands byte-identical on rerun");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"cone structure", cone_structure},
      {"segment swap certificate", segment_swap},
      {"barycenter certificate", barycenter},
      {"flat norm mod p", flat_norm},
      {"Plateau mod 3 Steiner check", plateau_steiner},
      {"Taylor example", taylor},
      {"decay scan", decay},
      {"Whitney decomposition and selection", whitney},
      {"monotonicity", monotonicity},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::printf("%s %2zu %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
