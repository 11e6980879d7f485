#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>
#include <set>

#include "modp/books.hpp"
#include "modp/sample.hpp"
#include "modp/taylor.hpp"
#include "modp/whitney.hpp"

using namespace modp;

namespace {

// Pure random oracle: each (center, radius) gets one draw, remembered.
struct RandomOracle {
  std::mt19937_64 rng;
  double scale;
  std::map<std::pair<std::vector<double>, double>, double> memo;

  RandomOracle(uint64_t seed, double s) : rng(seed), scale(s) {}
  double operator()(const Vec& y, double r) {
    std::pair<std::vector<double>, double> key{std::vector<double>(y.data(), y.data() + y.size()), r};
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    // shadows of layer 0 always pass so the top sub-layer stays connected
    const double v = r >= 4.0 ? 0.0 : std::uniform_real_distribution<double>(0, scale)(rng);
    memo[key] = v;
    return v;
  }
};

std::vector<WhitneyCube> all_cubes(const WhitneyDecomposition& D) {
  std::vector<WhitneyCube> out;
  for (int k = 0; k < D.depth(); ++k) {
    auto l = D.layer(k);
    out.insert(out.end(), l.begin(), l.end());
  }
  return out;
}

// Shadow containment decided in floating point from the cube intervals.
bool shadow_inside(const WhitneyDecomposition& D, const WhitneyCube& a, const WhitneyCube& b) {
  const Vec ya = D.y_center(a), yb = D.y_center(b);
  const double ha = D.side(a) / 2, hb = D.side(b) / 2;
  for (int i = 0; i < ya.size(); ++i) {
    if (ya[i] - ha < yb[i] - hb - 1e-15 || ya[i] + ha > yb[i] + hb + 1e-15) return false;
  }
  return true;
}

// Mbar d_Q = 2^(M+2)/sqrt(m) * sqrt(m) 2^-(k+M)
double radius_of(const WhitneyDomain&, const WhitneyCube& Q) { return std::ldexp(1.0, 2 - Q.k); }

OpenBook y_book() {
  Eigen::MatrixXd spine = Eigen::MatrixXd::Zero(3, 1);
  spine(2, 0) = 1;
  std::vector<Eigen::Vector2d> dirs;
  for (double d : {0.0, 120.0, 240.0}) dirs.push_back({std::cos(d * M_PI / 180), std::sin(d * M_PI / 180)});
  return OpenBook::make(2, 1, spine, OpenBook::default_plane(spine, 3), dirs);
}

}  // namespace

TEST_CASE("layer counts and the distance-diameter comparison") {
  CHECK(WhitneyDecomposition(2, 2, 2).layer(0).size() == 64u);
  CHECK(WhitneyDecomposition(2, 2, 2).layer(1).size() == 128u);
  CHECK(WhitneyDecomposition(2, 2, 2).side({1, 0, {0}}) == 0.125);
  for (int m : {2, 3}) {
    for (int M : {1, 2, 3}) {
      WhitneyDecomposition D(m, M, 7);
      for (int k = 0; k <= 6; ++k) {
        const double expected = std::pow(2.0, m * M) * std::pow(2.0, (m - 1) * (k + 2));
        CHECK(D.layer_count(k) == expected);
        if (expected <= 2e5) {
          auto cubes = D.layer(k);
          CHECK(double(cubes.size()) == expected);
          for (const WhitneyCube& Q : cubes) {
            CHECK(D.dist_diam_holds(Q));
            const double d = D.diameter(Q);
            CHECK(D.min_dist_to_spine(Q) >= std::ldexp(1.0, M) / std::sqrt(double(m)) * d * (1 - 1e-15));
            CHECK(D.max_dist_to_spine(Q) <= std::ldexp(1.0, M + 1) / std::sqrt(double(m)) * d * (1 + 1e-15));
          }
          CHECK(D.min_dist_to_spine(cubes.front()) == std::ldexp(1.0, -k));
        }
      }
    }
  }
  CHECK_THROWS_AS(WhitneyDecomposition(1, 2, 3), ValidationError);
  CHECK_THROWS_AS(WhitneyDecomposition(2, 0, 3), ValidationError);
  CHECK_THROWS_AS(WhitneyDecomposition(2, 2, 0), ValidationError);
}

TEST_CASE("is_below examples and order properties") {
  WhitneyDecomposition D(2, 1, 3);
  WhitneyCube a{1, 0, {5}}, up{0, 1, {2}}, side{1, 0, {6}};
  CHECK(D.is_below(a, a));
  CHECK(D.is_below(a, up));
  CHECK_FALSE(D.is_below(up, a));
  CHECK_FALSE(D.is_below(a, side));
  const auto cubes = all_cubes(D);
  for (const auto& q : cubes) {
    for (const auto& r : cubes) {
      const bool b = D.is_below(q, r);
      CHECK(b == shadow_inside(D, q, r));
      if (b && D.is_below(r, q)) CHECK(D.y_center(q) == D.y_center(r));
    }
  }
  WhitneyDecomposition D3(3, 1, 2);
  const auto c3 = all_cubes(D3);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 2000; ++t) {
    const auto& x = c3[rng() % c3.size()];
    const auto& y = c3[rng() % c3.size()];
    const auto& z = c3[rng() % c3.size()];
    CHECK(D3.is_below(x, y) == shadow_inside(D3, x, y));
    if (D3.is_below(x, y) && D3.is_below(y, z)) CHECK(D3.is_below(x, z));
  }
}

TEST_CASE("domain membership examples") {
  WhitneyDecomposition D(2, 2, 4);
  WhitneyDomain all = whitney_domain([](const Vec&, double) { return 0.0; }, 0.05, D);
  CHECK(all.size() == std::size_t(64 + 128 + 256 + 512));
  const WhitneyCube top{0, 3, {5}};
  const Vec yhat = D.y_center(top);
  WhitneyDomain cut = whitney_domain(
      [&](const Vec& y, double r) { return (y == yhat && r == 4.0) ? INFINITY : 0.0; }, 0.05, D);
  for (const auto& Q : all_cubes(D)) CHECK(cut.contains(Q) == !D.is_below(Q, top));
  CHECK_THROWS_AS(whitney_domain([](const Vec&, double) { return 0.0; }, 0.0, D), ValidationError);
  CHECK_THROWS_AS(whitney_domain([](const Vec&, double) { return NAN; }, 0.1, D), SolverError);
}

TEST_CASE("membership matches the quantifier and shrinks with tau") {
  for (int m : {2, 3}) {
    WhitneyDecomposition D(m, 1, m == 2 ? 4 : 3);
    const auto cubes = all_cubes(D);
    RandomOracle oracle(m, 0.02);
    auto fn = [&](const Vec& y, double r) { return oracle(y, r); };
    std::vector<std::size_t> sizes;
    for (double tau : {0.15, 0.12, 0.1, 0.08}) {
      WhitneyDomain W = whitney_domain(fn, tau, D);
      std::size_t n = 0;
      for (const auto& Q : cubes) {
        bool expect = true;
        for (const auto& Q2 : cubes) {
          if (D.is_below(Q, Q2) && !(oracle(D.y_center(Q2), radius_of(W, Q2)) < tau * tau)) expect = false;
        }
        CHECK(W.contains(Q) == expect);
        n += expect;
        if (W.contains(Q) && !D.in_top_sublayer(Q)) CHECK(W.contains(D.immediately_above(Q)));
      }
      CHECK(W.size() == n);
      sizes.push_back(n);
    }
    for (std::size_t i = 1; i < sizes.size(); ++i) CHECK(sizes[i] <= sizes[i - 1]);
    WhitneyDomain big = whitney_domain(fn, 0.15, D), small = whitney_domain(fn, 0.08, D);
    for (const auto& Q : cubes) {
      if (small.contains(Q)) CHECK(big.contains(Q));
    }
  }
}

TEST_CASE("rho_W and the graphicality region") {
  WhitneyDecomposition D(2, 2, 5);
  Vec y0(1);
  y0 << 0.3;
  WhitneyDomain all = whitney_domain([](const Vec&, double) { return 0.0; }, 0.05, D);
  CHECK(rho_W(all, y0) == std::ldexp(1.0, -(D.depth() - 1)));
  WhitneyDomain none = whitney_domain([](const Vec&, double) { return 1.0; }, 0.05, D);
  CHECK(rho_W(none, y0) == 2.0);
  CHECK_FALSE(in_graphicality_region(none, 1.0, y0));
  CHECK(in_graphicality_region(none, 2.0, y0));
  CHECK(in_graphicality_region(all, 1.0, y0));
  CHECK_FALSE(in_graphicality_region(all, 2.5, y0));

  RandomOracle oracle(9, 0.02);
  auto fn = [&](const Vec& y, double r) { return oracle(y, r); };
  WhitneyDomain big = whitney_domain(fn, 0.13, D), small = whitney_domain(fn, 0.09, D);
  const auto cubes = all_cubes(D);
  for (int i = 0; i <= 400; ++i) {
    Vec y(1);
    y << -2.0 + 4.0 * i / 400.0;
    const double rb = rho_W(big, y), rs = rho_W(small, y);
    CHECK(rb <= rs);
    CHECK(std::log2(rb) == std::round(std::log2(rb)));
    // brute force inf of t over member cubes with closed shadows containing y
    double inf_t = 2.0;
    for (const auto& Q : cubes) {
      if (!big.contains(Q)) continue;
      const double c = D.y_center(Q)[0], h = D.side(Q) / 2;
      if (y[0] >= c - h && y[0] <= c + h) inf_t = std::min(inf_t, D.min_dist_to_spine(Q));
    }
    CHECK(rb == inf_t);
  }
}

TEST_CASE("selection examples: kappa0 = 1 and constant choices") {
  WhitneyDecomposition D(2, 2, 3);
  WhitneyDomain W = whitney_domain([](const Vec&, double) { return 0.0; }, 0.05, D);
  const WhitneyCube top{0, 3, {7}};
  std::map<WhitneyCube, int> ones;
  for (const auto& Q : W.cubes()) ones[Q] = 1;
  SelectionReport r1 = global_selection(W, ones, top, 1);
  for (const auto& [Q0, phi] : r1.phi) {
    CHECK(phi[1] == top);
    CHECK(phi[0] == Q0);
  }
  std::map<WhitneyCube, int> threes;
  for (const auto& Q : W.cubes()) threes[Q] = 3;
  SelectionReport r4 = global_selection(W, threes, top, 4);
  for (const auto& [Q0, phi] : r4.phi) {
    for (int s = 0; s < 4; ++s) CHECK(phi[s] == Q0);
    CHECK(phi[4] == top);
  }
  CHECK(r4.p1);
  CHECK(r4.p2);
  CHECK(r4.p3);
  // chain: column to the top sub-layer then a lexicographic shortest path
  const auto& ch = r1.chain.at(WhitneyCube{2, 0, {0}});
  CHECK(ch.size() == 12 + 7);
  CHECK(ch[11] == WhitneyCube{0, 3, {0}});
  CHECK(ch[12] == WhitneyCube{0, 3, {1}});
  CHECK(ch.back() == top);
  CHECK_THROWS_AS(global_selection(W, ones, WhitneyCube{0, 2, {7}}, 1), ValidationError);
  CHECK_THROWS_AS(global_selection(W, ones, top, 0), ValidationError);
  std::map<WhitneyCube, int> bad = ones;
  bad[top] = 5;
  CHECK_THROWS_AS(global_selection(W, bad, top, 2), ValidationError);
}

TEST_CASE("selection properties under randomized choices") {
  std::mt19937_64 rng(2024);
  int trials = 0;
  for (int t = 0; t < 1000; ++t) {
    const int m = 2 + int(rng() % 2);
    const int M = m == 2 ? 1 + int(rng() % 2) : 1;
    const int depth = 1 + int(rng() % (m == 2 ? 3 : 2));
    WhitneyDecomposition D(m, M, depth);
    RandomOracle oracle(rng(), 0.02);
    const double tau = 0.08 + 0.08 * double(rng() % 100) / 100.0;
    WhitneyDomain W = whitney_domain([&](const Vec& y, double r) { return oracle(y, r); }, tau, D);
    const auto cubes = W.cubes();
    std::vector<WhitneyCube> tops;
    for (const auto& Q : cubes) {
      if (D.in_top_sublayer(Q)) tops.push_back(Q);
    }
    const WhitneyCube top = tops[rng() % tops.size()];
    const int kappa0 = 1 + int(rng() % 5);
    std::map<WhitneyCube, int> hbar;
    for (const auto& Q : cubes) hbar[Q] = 1 + int(rng() % kappa0);
    SelectionReport r = global_selection(W, hbar, top, kappa0);
    CHECK(r.p1);
    CHECK(r.p2);
    CHECK(r.p3);
    CHECK(r.bound_holds);
    // independent recheck of (p2) and (p3) from the stored chains
    for (const auto& [Q0, phi] : r.phi) {
      const auto& ch = r.chain.at(Q0);
      CHECK(ch.front() == Q0);
      for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
        if (!D.in_top_sublayer(ch[i])) CHECK(D.is_below(ch[i], ch[i + 1]));
      }
      for (int s = 0; s < kappa0; ++s) {
        const std::size_t i = std::find(ch.begin(), ch.end(), phi[s]) - ch.begin();
        REQUIRE(i < ch.size());
        if (hbar[phi[s]] != hbar[phi[s + 1]]) CHECK(hbar[ch[i + 1]] == hbar[phi[s + 1]]);
      }
    }
    ++trials;
  }
  CHECK(trials == 1000);
}

TEST_CASE("tail sum bound at depth 8") {
  const auto start = std::chrono::steady_clock::now();
  WhitneyDecomposition D(2, 2, 8);
  WhitneyDomain W = whitney_domain([](const Vec&, double) { return 0.0; }, 0.05, D);
  std::mt19937_64 rng(0);
  std::map<WhitneyCube, int> hbar;
  const int kappa0 = 4;
  for (const auto& Q : W.cubes()) hbar[Q] = 1 + int(rng() % kappa0);
  const WhitneyCube top{0, 3, {8}};
  SelectionReport r = global_selection(W, hbar, top, kappa0);
  CHECK(r.bound_below_top == doctest::Approx(4.0 + 4.0 / 7.0));
  CHECK(r.bound_holds);
  CHECK(r.p1);
  CHECK(r.p2);
  CHECK(r.p3);
  // direct recount for the cubes below the top sub-layer
  std::map<WhitneyCube, double> sums;
  for (const auto& [Q0, phi] : r.phi) {
    std::set<WhitneyCube> seen(phi.begin(), phi.end());
    for (const auto& q : seen) sums[q] += std::pow(D.diameter(Q0) / D.diameter(q), 4);
  }
  for (const auto& [q, s] : sums) {
    CHECK(s == doctest::Approx(r.tail_sum.at(q)).epsilon(1e-12));
    if (!D.in_top_sublayer(q)) CHECK(s <= 4.0 + 4.0 / 7.0);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 10.0);
}

TEST_CASE("strip width scales like the excess to the power 1/(m+2)") {
  const OpenBook S = y_book();
  const double tau = 0.05;
  Vec bump(3);
  bump << 0.01, 0.005, 0.0;
  const double d2 = dist2_to_book(bump, S);
  REQUIRE(d2 > 0);
  WhitneyDecomposition D(2, 2, 8);
  Vec origin = Vec::Zero(3);
  Vec y0 = Vec::Zero(1);
  std::vector<double> E, rho;
  // total excess mass chosen so the critical radius sits midway between dyadic radii
  for (double Ebar : {tau * tau * 0.25, tau * tau * 0.25 * 16}) {
    VarifoldSample T = sample_book(S, {1, 1, 1}, 0.5, 0.05);
    const Eigen::Index n = T.size();
    T.points.conservativeResize(3, n + 1);
    T.weights.conservativeResize(n + 1);
    T.points.col(n) = bump;
    T.weights[n] = Ebar / d2;
    if (T.has_tangents()) T.plane_index.push_back(0);
    ExcessOracle oracle = sample_excess_oracle(T, S, origin, 1.0);
    WhitneyDomain W = whitney_domain(oracle, tau, D);
    E.push_back(Ebar);
    rho.push_back(rho_W(W, y0));
    Vec far(1);
    far << 1.9;
    CHECK(rho_W(W, far) < rho.back());
  }
  CHECK(rho[0] == 0.25);
  CHECK(rho[1] == 0.5);
  const double exponent = std::log(rho[1] / rho[0]) / std::log(E[1] / E[0]);
  CHECK(exponent == doctest::Approx(1.0 / 4.0).epsilon(1e-12));
}

TEST_CASE("domain CSV lists evaluated shadows per cube") {
  WhitneyDecomposition D(2, 1, 2);
  WhitneyDomain W = whitney_domain([](const Vec& y, double) { return y[0] > 0 ? 1.0 : 0.0; }, 0.5, D);
  const std::string csv = domain_to_csv(W);
  CHECK(csv.rfind("layer,row,position,excess,member\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  // 8 top shadows and 8 children of the 4 member shadows, 2 rows each
  CHECK(lines == 1 + 2 * (8 + 8));
  json j = cube_to_json(D, {1, 1, {3}});
  CHECK(j["side"] == 0.25);
  CHECK(j["t_center"] == 0.875);
}

TEST_CASE("Taylor surface as the excess oracle") {
  const RevolvedCurrent R = build_taylor_example(3, {-40, 0, 40}, 1.0, WeightedMetric::parse("x"));
  REQUIRE(!R.circles.empty());
  const SingularCircle& c = R.circles[0];
  const OpenBook S = tangent_book(c, 0.0);
  WhitneyDecomposition D(2, 2, 5);
  ExcessOracle oracle = sample_excess_oracle(R.sample, S, circle_point(c, 0.0), 0.05);
  WhitneyDomain W = whitney_domain(oracle, 0.1, D);
  CHECK(W.size() > 0);
  CHECK(W.size() < std::size_t(4 * (16 + 32 + 64 + 128 + 256)));
  for (const auto& Q : W.cubes()) {
    if (!D.in_top_sublayer(Q)) CHECK(W.contains(D.immediately_above(Q)));
  }
  Vec mid = Vec::Zero(1), edge = Vec::Constant(1, 1.99);
  CHECK(rho_W(W, mid) <= rho_W(W, edge));
}
