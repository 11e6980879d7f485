#include <doctest.h>

#include <random>

#include "modp/chain.hpp"
#include "modp/complex_io.hpp"
#include "modp/mesh.hpp"

using namespace modp;

namespace {

Vec pt(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

IntegerChain random_chain(const SimplicialComplex& K, int k, std::mt19937_64& rng, int spread) {
  std::uniform_int_distribution<int> coef(-spread, spread);
  IntegerChain c(k);
  for (std::size_t i = 0; i < K.count(k); ++i) c.set(i, coef(rng));
  return c;
}

}  // namespace

TEST_CASE("edge boundary is head minus tail") {
  SimplicialComplex K({pt(0, 0), pt(1, 0)}, {{}, {{0, 1}}});
  IntegerChain e(1);
  e.set(0, 1);
  IntegerChain b = boundary(K, e);
  CHECK(b.get(1) == 1);
  CHECK(b.get(0) == -1);
}

TEST_CASE("boundary of a boundary vanishes") {
  SimplicialComplex K = unit_right_triangle_complex();
  IntegerChain t(2);
  t.set(0, 1);
  CHECK(boundary(K, boundary(K, t)).is_zero());
  CHECK_THROWS_AS(boundary(K, IntegerChain(0)), ValidationError);
}

TEST_CASE("shared edge cancels for two coherent triangles") {
  // square 0-1-2-3 split along 0-2
  SimplicialComplex K({pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)}, {{}, {}, {{0, 1, 2}, {0, 2, 3}}});
  IntegerChain t(2);
  t.set(0, 1);
  t.set(1, 1);
  IntegerChain b = boundary(K, t);
  CHECK(b.coeffs().size() == 4);
  const auto diag = K.find(1, {0, 2});
  REQUIRE(diag);
  CHECK(b.get(*diag) == 0);
  // independent oracle: dense incidence product per edge
  for (auto [a, c] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {3, 0}}) {
    const auto e = K.find(1, {a, c});
    REQUIRE(e);
    const Simplex& s = K.simplex(1, *e);
    CHECK(b.get(*e) == (s[0] == a ? 1 : -1));
  }
}

TEST_CASE("d d = 0 on random chains of a disk mesh") {
  SimplicialComplex K = disk_mesh(0.25);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    IntegerChain c = random_chain(K, 2, rng, 5);
    CHECK(boundary(K, boundary(K, c)).is_zero());
  }
}

TEST_CASE("mass examples") {
  SimplicialComplex K({pt(0, 0), pt(1, 0), pt(2, 0)}, {{}, {{0, 1}, {1, 2}}});
  CHECK(mass(K, IntegerChain(1)) == 0.0);
  IntegerChain a(1);
  a.set(0, -3);
  CHECK(mass(K, a) == doctest::Approx(3.0));
  IntegerChain b(1);
  b.set(0, 2);
  b.set(1, 1);
  CHECK(mass(K, b) == doctest::Approx(3.0));
}

TEST_CASE("reduce_modp examples") {
  IntegerChain c(1);
  c.set(0, 5);
  CHECK(reduce_modp(c, 3).representative.get(0) == -1);
  c.set(0, 2);
  CHECK(reduce_modp(c, 4).representative.get(0) == 2);
  c.set(0, -2);
  CHECK(reduce_modp(c, 4).representative.get(0) == 2);
  c.set(0, -3);
  CHECK(reduce_modp(c, 3).representative.is_zero());
  CHECK_THROWS_AS(reduce_modp(c, 1), ValidationError);
}

TEST_CASE("reduction properties on random chains") {
  SimplicialComplex K = disk_mesh(0.34);
  std::mt19937_64 rng(11);
  for (int64_t p : {2, 3, 4, 5, 7}) {
    for (int trial = 0; trial < 10; ++trial) {
      IntegerChain c = random_chain(K, 1, rng, 20);
      IntegerChain r = reduce_modp(c, p).representative;
      CHECK(mass(K, r) <= mass(K, c) + 1e-12);
      CHECK(reduce_modp(r, p).representative == r);
      CHECK(congruent_modp(r, c, p));
      for (const auto& [i, v] : r.coeffs()) {
        CHECK(2 * v <= p);
        CHECK(2 * v > -p);
      }
      IntegerChain d = random_chain(K, 1, rng, 20);
      CHECK(mass(K, c + d) <= mass(K, c) + mass(K, d) + 1e-9);
    }
  }
}

TEST_CASE("is_cycle_modp examples") {
  SimplicialComplex K = unit_right_triangle_complex();
  IntegerChain t(2);
  t.set(0, 1);
  CHECK(is_cycle_modp(K, boundary(K, t), 2));
  IntegerChain e(1);
  e.set(0, 1);
  CHECK_FALSE(is_cycle_modp(K, e, 3));
  CHECK(is_cycle_modp(K, e.scaled(3), 3));
}

TEST_CASE("degenerate and malformed complexes are rejected") {
  CHECK_THROWS_AS(SimplicialComplex({pt(0, 0), pt(1, 0), pt(2, 0)}, {{}, {}, {{0, 1, 2}}}),
                  ValidationError);
  CHECK_THROWS_AS(SimplicialComplex({pt(0, 0), pt(1, 0)}, {{}, {{0, 0}}}), ValidationError);
  CHECK_THROWS_AS(SimplicialComplex({pt(0, 0), pt(1, 0)}, {{}, {{0, 2}}}), ValidationError);
}

TEST_CASE("overflow is detected") {
  IntegerChain c(1);
  c.set(0, INT64_MAX);
  CHECK_THROWS_AS(c.add(0, 1), ValidationError);
  CHECK_THROWS_AS(c.scaled(2), ValidationError);
}

TEST_CASE("complex and chain JSON round trip") {
  SimplicialComplex K = disk_mesh(0.5);
  json j = complex_to_json(K);
  SimplicialComplex K2 = complex_from_json(json::parse(j.dump()));
  CHECK(complex_to_json(K2) == j);
  IntegerChain c(1);
  c.set(3, -2);
  c.set(5, 7);
  CHECK(chain_from_json(json::parse(chain_to_json(c).dump())) == c);
}

TEST_CASE("disk mesh volumes and ring structure") {
  SimplicialComplex K = disk_mesh(0.2);
  CHECK(K.count(2) == 6u * 25u);
  double area = 0.0;
  for (double v : K.volumes(2)) area += v;
  // inscribed polygon area of 30 sides
  CHECK(area == doctest::Approx(0.5 * 30 * std::sin(2 * M_PI / 30)).epsilon(1e-12));
  for (std::size_t e = 0; e < K.count(1); ++e) {
    const Simplex& s = K.simplex(1, e);
    CHECK(K.volume(1, e) == doctest::Approx((K.vertex(s[0]) - K.vertex(s[1])).norm()).epsilon(1e-14));
  }
}
