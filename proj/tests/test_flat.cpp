#include <doctest.h>

#include <cmath>
#include <queue>
#include <random>

#include "modp/flat.hpp"
#include "modp/mesh.hpp"

using namespace modp;

namespace {

IntegerChain random_chain(const SimplicialComplex& K, int k, std::mt19937_64& rng, int spread) {
  std::uniform_int_distribution<int> coef(-spread, spread);
  IntegerChain c(k);
  for (std::size_t i = 0; i < K.count(k); ++i) c.set(i, coef(rng));
  return c;
}

void check_witness(const SimplicialComplex& K, const IntegerChain& T, int64_t p,
                   const FlatDecomposition& f) {
  IntegerChain rebuilt = f.R + (f.Z.is_zero() ? IntegerChain(T.degree()) : boundary(K, f.Z)) +
                         f.P.scaled(p);
  CHECK(rebuilt == T);
}

// Dijkstra on the 1-skeleton, the p = 2 two-point Plateau oracle.
double graph_distance(const SimplicialComplex& K, std::size_t a, std::size_t b) {
  std::vector<double> d(K.num_vertices(), INFINITY);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  d[a] = 0;
  pq.push({0, a});
  while (!pq.empty()) {
    auto [dv, v] = pq.top();
    pq.pop();
    if (dv > d[v]) continue;
    for (const Incidence& e : K.coboundary_row(1, v)) {
      const Simplex& s = K.simplex(1, e.row);
      const std::size_t u = s[0] == int(v) ? s[1] : s[0];
      const double nd = dv + K.volume(1, e.row);
      if (nd < d[u]) {
        d[u] = nd;
        pq.push({nd, u});
      }
    }
  }
  return d[b];
}

Vec polar(double r, double deg) {
  Vec v(2);
  v << r * std::cos(deg * M_PI / 180), r * std::sin(deg * M_PI / 180);
  return v;
}

ModPClass three_point_boundary(const SimplicialComplex& K, const std::vector<double>& angles, int64_t p) {
  IntegerChain b(0);
  for (double a : angles) b.add(nearest_vertex(K, polar(1.0, a)), 1);
  return reduce_modp(b, p);
}

}  // namespace

TEST_CASE("flat norm of zero and of multiples of p") {
  SimplicialComplex K = grid_complex(2, 2);
  FlatDecomposition f = flat_norm_modp(K, IntegerChain(1), 3);
  CHECK(f.value == 0.0);
  CHECK(f.Z.is_zero());
  std::mt19937_64 rng(3);
  IntegerChain Q = random_chain(K, 1, rng, 3);
  FlatDecomposition g = flat_norm_modp(K, Q.scaled(3), 3);
  CHECK(g.value == doctest::Approx(0.0).epsilon(1e-12));
  check_witness(K, Q.scaled(3), 3, g);
}

TEST_CASE("unit right triangle boundary fills with area 0.5") {
  SimplicialComplex K = unit_right_triangle_complex();
  IntegerChain t(2);
  t.set(0, 1);
  IntegerChain T = boundary(K, t);
  FlatDecomposition f = flat_norm_modp(K, T, 3);
  CHECK(f.value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(f.Z.get(0)) == 1);
  check_witness(K, T, 3, f);
  CHECK(brute_force_flat_oracle(K, T, 3, 3) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("oracle trivial examples") {
  SimplicialComplex K = unit_right_triangle_complex();
  CHECK(brute_force_flat_oracle(K, IntegerChain(1), 3, 2) == 0.0);
  IntegerChain e(1);
  e.set(0, 2);
  CHECK(brute_force_flat_oracle(K, e, 2, 1) == 0.0);
  CHECK_THROWS_AS(brute_force_flat_oracle(grid_complex(4, 4), e, 2, 1), ValidationError);
}

TEST_CASE("ILP matches the exhaustive oracle on small complexes") {
  std::mt19937_64 rng(17);
  struct Case {
    SimplicialComplex K;
    int64_t p;
  };
  std::vector<Case> cases;
  for (int64_t p : {2, 3}) {
    cases.push_back({grid_complex(2, 3), p});
    cases.push_back({disk_mesh(1.0), p});
  }
  for (int64_t p : {4, 5}) cases.push_back({grid_complex(2, 2), p});
  for (const Case& c : cases) {
    for (int trial = 0; trial < 4; ++trial) {
      IntegerChain T = random_chain(c.K, 1, rng, 2);
      FlatDecomposition f = flat_norm_modp(c.K, T, c.p);
      const double oracle = brute_force_flat_oracle(c.K, T, c.p, c.p / 2);
      CHECK(f.value == doctest::Approx(oracle).epsilon(1e-12));
      CHECK(f.gap <= 1e-9);
      check_witness(c.K, T, c.p, f);
      CHECK(f.value <= mass(c.K, T) + 1e-12);
    }
  }
}

TEST_CASE("flat norm is invariant under adding p Q") {
  SimplicialComplex K = grid_complex(2, 3);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    IntegerChain T = random_chain(K, 1, rng, 2);
    IntegerChain Q = random_chain(K, 1, rng, 4);
    const double a = flat_norm_modp(K, T, 3).value;
    const double b = flat_norm_modp(K, T + Q.scaled(3), 3).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("flat distance is symmetric and satisfies the triangle inequality") {
  SimplicialComplex K = grid_complex(2, 2);
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    IntegerChain A = random_chain(K, 1, rng, 2);
    IntegerChain B = random_chain(K, 1, rng, 2);
    IntegerChain C = random_chain(K, 1, rng, 2);
    const double ab = flat_distance_modp(K, A, B, 3);
    CHECK(ab == doctest::Approx(flat_distance_modp(K, B, A, 3)).epsilon(1e-12));
    CHECK(ab <= flat_distance_modp(K, A, C, 3) + flat_distance_modp(K, C, B, 3) + 1e-9);
    CHECK(flat_distance_modp(K, A, A, 3) == 0.0);
    CHECK(flat_distance_modp(K, A, A + C.scaled(3), 3) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("localization, comparison and monotonicity in the region") {
  SimplicialComplex K = grid_complex(2, 3);
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<std::size_t> big, small;
    for (std::size_t t = 0; t < K.count(2); ++t) {
      if (rng() % 3 != 0) {
        big.push_back(t);
        if (rng() % 2) small.push_back(t);
      }
    }
    Region W = Region::closure_of(K, 2, big);
    Region Ws = Region::closure_of(K, 2, small);
    IntegerChain T = random_chain(K, 1, rng, 2);
    const double local = flat_norm_modp(K, T, 3, W).value;
    CHECK(local == doctest::Approx(flat_norm_modp(K, restrict_to(T, W), 3, W).value).epsilon(1e-12));
    CHECK(local <= flat_norm_modp(K, T, 3).value + 1e-12);
    CHECK(flat_norm_modp(K, T, 3, Ws).value <= local + 1e-12);
  }
  Region none = Region::empty(K);
  IntegerChain T = random_chain(K, 1, rng, 2);
  FlatDecomposition f = flat_norm_modp(K, T, 3, none);
  CHECK(f.value == 0.0);
  CHECK(f.R == T);
}

TEST_CASE("Plateau: trivial boundary and p = 2 shortest paths") {
  SimplicialComplex K = disk_mesh(0.25);
  PlateauSolution z = plateau_modp(K, reduce_modp(IntegerChain(0), 3));
  CHECK(z.chain.is_zero());
  CHECK(z.mass == 0.0);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t a = rng() % K.num_vertices();
    std::size_t b = rng() % K.num_vertices();
    if (a == b) b = (b + 1) % K.num_vertices();
    IntegerChain bd(0);
    bd.set(a, 1);
    bd.set(b, -1);
    PlateauSolution s = plateau_modp(K, reduce_modp(bd, 2));
    CHECK(s.mass == doctest::Approx(graph_distance(K, a, b)).epsilon(1e-12));
    CHECK(congruent_modp(boundary(K, s.chain), bd, 2));
  }
}

TEST_CASE("Plateau mod 3 on disk meshes approaches the Steiner value 3") {
  for (double h : {0.2, 0.1, 0.05}) {
    SimplicialComplex K = disk_mesh(h);
    PlateauSolution s = plateau_modp(K, three_point_boundary(K, {90, 210, 330}, 3));
    CHECK(std::abs(s.mass - 3.0) <= 2 * h);
    CHECK(s.mass < 2 * std::sqrt(3.0));
    for (const auto& [e, c] : s.chain.coeffs()) CHECK(std::abs(c) == 1);
  }
  // Off the mesh spokes the edge metric overestimates lengths by up to the
  // lattice stretch factor 2/sqrt(3), so only the two-sided bracket holds.
  for (double h : {0.1, 0.05}) {
    SimplicialComplex K = disk_mesh(h);
    PlateauSolution s = plateau_modp(K, three_point_boundary(K, {100, 220, 340}, 3));
    CHECK(s.mass >= 3.0 - 2 * h);
    CHECK(s.mass <= 3.0 * 2 / std::sqrt(3.0) + 2 * h);
  }
}

TEST_CASE("graph solver agrees with the Plateau ILP on a coarse mesh") {
  SimplicialComplex K = disk_mesh(0.5);
  for (auto angles : std::vector<std::vector<double>>{{90, 210, 330}, {90, 150, 270}}) {
    ModPClass b = three_point_boundary(K, angles, 3);
    PlateauSolution g = plateau_modp(K, b, PlateauMethod::kGraph);
    PlateauSolution i = plateau_modp(K, b, PlateauMethod::kIlp);
    CHECK(g.mass == doctest::Approx(i.mass).epsilon(1e-9));
    CHECK(i.optimality_gap <= 1e-9);
  }
  IntegerChain b(0);
  b.set(0, 2);
  b.set(3, 1);
  b.set(9, 1);
  ModPClass four = reduce_modp(b, 4);
  CHECK(plateau_modp(K, four, PlateauMethod::kGraph).mass ==
        doctest::Approx(plateau_modp(K, four, PlateauMethod::kIlp).mass).epsilon(1e-9));
}

TEST_CASE("Plateau in degree 2 via the ILP") {
  SimplicialComplex K = unit_right_triangle_complex();
  IntegerChain t(2);
  t.set(0, 1);
  PlateauSolution s = plateau_modp(K, reduce_modp(boundary(K, t), 3));
  CHECK(s.mass == doctest::Approx(0.5));
  CHECK(s.method == "ilp");
}

TEST_CASE("a boundary that does not bound mod p is rejected") {
  SimplicialComplex K = disk_mesh(0.5);
  IntegerChain b(0);
  b.set(0, 1);
  CHECK_THROWS_AS(plateau_modp(K, reduce_modp(b, 3)), ValidationError);
  b.set(4, 1);
  CHECK_THROWS_AS(plateau_modp(K, reduce_modp(b, 3), PlateauMethod::kIlp), ValidationError);
}
