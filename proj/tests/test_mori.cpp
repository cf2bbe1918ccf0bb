#include <map>
#include <random>

#include "doctest.h"
#include "kv/mori.hpp"
#include "support.hpp"

using namespace kv;
using kvtest::iv;
using kvtest::q;

namespace {

Fan p2() { return fans::projective_space(2); }
Fan f1() { return star_subdivide(p2(), iv({1, 1})).fan; }
Fan flip_a() { return fans::flip_side_a(iv({1, 1, -2})); }

std::size_t wall_at(const Fan& x, const std::vector<Wall>& ws, std::initializer_list<IntVec> tau) {
  Cone t;
  for (const auto& u : tau) t.push_back(x.ray_index(u));
  std::sort(t.begin(), t.end());
  for (std::size_t i = 0; i < ws.size(); ++i)
    if (ws[i].tau == t) return i;
  return Fan::npos;
}

Rat coeff(const Fan& x, const RatVec& b, const IntVec& u) { return b[x.ray_index(u)]; }

// Random rank-2 and rank-3 complete simplicial fans.
std::vector<Fan> sample_fans() {
  std::mt19937_64 rng(9);
  std::vector<Fan> out{p2(), f1(), fans::p112(), fans::hirzebruch(2), fans::projective_space(3),
                       fans::product(fans::projective_space(1), fans::projective_space(1)),
                       fans::product(fans::projective_space(1), fans::projective_space(2))};
  for (int t = 0; t < 6; ++t) {
    Fan f = t % 2 ? p2() : fans::projective_space(3);
    for (int k = 0; k < 2; ++k)
      if (auto v = kvtest::random_support_point(f, rng, 2)) f = star_subdivide(f, *v).fan;
    out.push_back(f);
  }
  return out;
}

}  // namespace

TEST_CASE("walls examples") {
  CHECK(walls(p2()).size() == 3);
  CHECK(walls(f1()).size() == 4);
  Fan a = flip_a();
  auto w = walls(a);
  REQUIRE(w.size() == 1);
  CHECK(wall_at(a, w, {iv({1, 0, 0}), iv({0, 1, 0})}) == 0);
  CHECK_THROWS_AS(walls(fans::cube()), Error);
}

TEST_CASE("wall_relation examples") {
  Fan x = f1();
  auto ws = walls(x);
  auto b = wall_relation(x, ws[wall_at(x, ws, {iv({1, 1})})]);
  CHECK(coeff(x, b, iv({1, 0})) == 1);
  CHECK(coeff(x, b, iv({0, 1})) == 1);
  CHECK(coeff(x, b, iv({1, 1})) == -1);
  CHECK(coeff(x, b, iv({-1, -1})) == 0);

  Fan a = flip_a();
  auto ba = wall_relation(a, walls(a)[0]);
  CHECK(coeff(a, ba, iv({1, 0, 0})) == q(-1, 2));
  CHECK(coeff(a, ba, iv({0, 1, 0})) == q(-1, 2));
  CHECK(coeff(a, ba, iv({0, 0, 1})) == 1);
  CHECK(coeff(a, ba, iv({1, 1, -2})) == q(1, 2));

  Fan y = p2();
  auto wy = walls(y);
  auto by = wall_relation(y, wy[wall_at(y, wy, {iv({1, 0})})]);
  for (const auto& u : y.rays) CHECK(coeff(y, by, u) == 1);

  for (const Fan& f : sample_fans())
    for (const auto& w : walls(f)) {
      auto r = wall_relation(f, w);
      RatVec s(f.rank);
      for (std::size_t i = 0; i < f.nrays(); ++i)
        for (std::size_t j = 0; j < f.rank; ++j) s[j] += r[i] * f.rays[i][j];
      CHECK(is_zero(s));
      CHECK(r[w.off] > 0);
      CHECK(r[w.off2] > 0);
    }
}

TEST_CASE("intersect examples") {
  Fan x = f1();
  auto ws = walls(x);
  CHECK(intersect(x, prime(x, iv({1, 1})), ws[wall_at(x, ws, {iv({1, 1})})]) == -1);
  Fan y = p2();
  for (const auto& w : walls(y)) CHECK(intersect(y, prime(y, iv({1, 0})), w) == 1);
  for (const Fan& f : sample_fans())
    for (const auto& w : walls(f)) CHECK(intersect(f, principal(f, iv(f.rank == 2 ? std::initializer_list<long>{2, -3}
                                                                                  : std::initializer_list<long>{1, -1, 4})),
                                                   w) == 0);
  CHECK_THROWS_AS(intersect(fans::cube(), Divisor(8), Wall{}), Error);
}

TEST_CASE("curve_class examples") {
  Fan x = f1();
  auto ws = walls(x);
  auto c = curve_class(x, ws[wall_at(x, ws, {iv({1, 1})})]);
  CHECK(c.c[x.ray_index(iv({1, 1}))] == -1);
  CHECK(c.c[x.ray_index(iv({-1, -1}))] == 0);

  Fan y = p2();
  for (const auto& w : walls(y)) CHECK(curve_class(y, w).pair(prime(y, iv({0, 1}))) == 1);

  Fan pp = fans::product(fans::projective_space(1), fans::projective_space(1));
  std::map<RatVec, int> classes;
  for (const auto& w : walls(pp)) ++classes[curve_class(pp, w).c];
  CHECK(classes.size() == 2);
  for (const auto& [k, n] : classes) CHECK(n == 2);
}

TEST_CASE("extremal_rays examples") {
  auto r = extremal_rays(p2());
  REQUIRE(r.size() == 1);
  CHECK(r[0].walls.size() == 3);
  CHECK(extremal_rays(f1()).size() == 2);
  auto a = extremal_rays(flip_a());
  REQUIRE(a.size() == 1);
  CHECK(a[0].walls == std::vector<std::size_t>{0});
  // a single cone has no interior walls
  Fan one(2, {iv({1, 0}), iv({0, 1})}, {{0, 1}});
  CHECK(extremal_rays(one).empty());
}

TEST_CASE("mori invariants on sample fans") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<long> v(-3, 3);
  for (const Fan& f : sample_fans()) {
    auto ws = walls(f);
    const bool smooth = properties(f).smooth;
    // principal divisors for a lattice basis
    for (std::size_t i = 0; i < f.rank; ++i) {
      IntVec e(f.rank);
      e[i] = 1;
      for (const auto& w : ws) CHECK(intersect(f, principal(f, e), w) == 0);
    }
    for (int t = 0; t < 4; ++t) {
      Divisor a(f.nrays()), b(f.nrays());
      for (auto& x : a) x = q(v(rng), 1 + (v(rng) + 3) % 4);
      for (auto& x : b) x = v(rng);
      Rat s = q(v(rng), 5);
      bool nef_walls = true;
      for (const auto& w : ws) {
        CHECK(intersect(f, a + b, w) == intersect(f, a, w) + intersect(f, b, w));
        CHECK(intersect(f, s * a, w) == s * intersect(f, a, w));
        if (smooth) CHECK(intersect(f, b, w).get_den() == 1);
        if (intersect(f, b, w) < 0) nef_walls = false;
      }
      CHECK(positivity(f, b).nef == nef_walls);
    }
    // extremal rays span the same cone as all wall classes
    auto er = extremal_rays(f);
    std::vector<RatVec> gens;
    for (const auto& r : er) gens.push_back(r.cls.c);
    for (const auto& w : ws) CHECK(cone_contains(gens, wall_relation(f, w)));
  }
}
