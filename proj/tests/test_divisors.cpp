#include <random>

#include "doctest.h"
#include "kv/divisors.hpp"
#include "support.hpp"

using namespace kv;
using kvtest::iv;
using kvtest::q;

namespace {

Fan p2() { return fans::projective_space(2); }
Fan f1() { return star_subdivide(p2(), iv({1, 1})).fan; }

std::size_t cone_of(const Fan& x, std::initializer_list<IntVec> rays) {
  Cone c;
  for (const auto& u : rays) c.push_back(x.ray_index(u));
  std::sort(c.begin(), c.end());
  for (std::size_t i = 0; i < x.cones.size(); ++i)
    if (x.cones[i] == c) return i;
  return Fan::npos;
}

std::size_t affine_dim(const std::vector<IntVec>& pts, std::size_t rank) {
  if (pts.empty()) return 0;
  std::vector<IntVec> diffs;
  for (const auto& p : pts) {
    IntVec d(rank);
    for (std::size_t i = 0; i < rank; ++i) d[i] = p[i] - pts[0][i];
    diffs.push_back(d);
  }
  return rank_of(IntMat::from_rows(diffs, rank));
}

}  // namespace

TEST_CASE("canonical") {
  CHECK(canonical(p2()) == Divisor(3, Rat(-1)));
  CHECK(canonical(f1()) == Divisor(4, Rat(-1)));
  CHECK(canonical(fans::p112()) == Divisor(3, Rat(-1)));
}

TEST_CASE("cartier_data examples") {
  Fan x = p2();
  auto cd = require_cartier(x, prime(x, iv({1, 0})));
  CHECK(cd.m[cone_of(x, {iv({1, 0}), iv({0, 1})})] == kvtest::rv({-1, 0}));

  Fan cube = fans::cube();
  auto r = cartier_data(cube, prime(cube, cube.rays[0]));
  REQUIRE(std::holds_alternative<NotQCartier>(r));
  auto bad = std::get<NotQCartier>(r).cone;
  CHECK(std::binary_search(cube.cones[bad].begin(), cube.cones[bad].end(), std::size_t{0}));

  auto z = require_cartier(x, Divisor(3));
  for (const auto& m : z.m) CHECK(is_zero(m));

  // a non-full-dimensional cone gets the zero extension on the complement
  Fan ray(2, {iv({1, 1})}, {{0}});
  auto e = require_cartier(ray, Divisor{Rat(2)});
  CHECK(dot(e.m[0], iv({1, 1})) == -2);
}

TEST_CASE("positivity examples") {
  Fan x = p2();
  auto h = positivity(x, prime(x, iv({1, 0})));
  CHECK(h.nef);
  CHECK(h.ample);
  CHECK(h.big);
  auto k = positivity(x, canonical(x));
  CHECK_FALSE(k.nef);
  CHECK_FALSE(k.big);
  CHECK_FALSE(positivity(f1(), prime(f1(), iv({1, 1}))).nef);
  // nef, not big: fiber class on P1 x P1
  Fan pp = fans::product(fans::projective_space(1), fans::projective_space(1));
  auto fib = positivity(pp, prime(pp, iv({1, 0})));
  CHECK(fib.nef);
  CHECK_FALSE(fib.ample);
  CHECK_FALSE(fib.big);
  CHECK_THROWS_AS(positivity(fans::cube(), prime(fans::cube(), fans::cube().rays[0])), Error);
}

TEST_CASE("semiample_witness examples") {
  Fan x = p2();
  auto w = semiample_witness(x, 2 * prime(x, iv({1, 0})));
  REQUIRE(std::holds_alternative<SemiampleWitness>(w));
  CHECK(std::get<SemiampleWitness>(w).multiple == 1);
  CHECK(std::get<SemiampleWitness>(w).certificate);

  Fan w112 = fans::p112();
  auto a = semiample_witness(w112, prime(w112, iv({1, 0})));
  REQUIRE(std::holds_alternative<SemiampleWitness>(a));
  CHECK(std::get<SemiampleWitness>(a).multiple == 2);
  CHECK(std::get<SemiampleWitness>(a).certificate);
  auto b = semiample_witness(w112, prime(w112, iv({0, 1})));
  REQUIRE(std::holds_alternative<SemiampleWitness>(b));
  CHECK(std::get<SemiampleWitness>(b).multiple == 1);

  CHECK(std::holds_alternative<NotNef>(semiample_witness(f1(), prime(f1(), iv({1, 1})))));
}

TEST_CASE("klt_check examples") {
  Fan x = p2();
  CHECK(klt_check(x, Divisor(3, q(1, 2))).ok);
  auto r = klt_check(x, prime(x, iv({1, 0})));
  CHECK_FALSE(r.ok);
  CHECK(r.reason.find("(1,0)") != std::string::npos);
  CHECK(klt_check(fans::cube(), Divisor(8)).ok);
  // K + B not Q-Cartier on the cube fan
  Divisor b(8);
  b[0] = q(1, 2);
  CHECK_FALSE(klt_check(fans::cube(), b).ok);
}

TEST_CASE("discrepancy examples") {
  Fan x = p2();
  CHECK(discrepancy(x, Divisor(3), iv({1, 1})) == 1);
  CHECK(discrepancy(x, Divisor(3, q(1, 2)), iv({1, 1})) == 0);
  Divisor b{q(1, 3), q(1, 4), q(1, 5)};
  CHECK(discrepancy(x, b, x.rays[1]) == -q(1, 4));
  CHECK_THROWS_AS(discrepancy(fans::flip_side_a(iv({1, 1, -2})), Divisor(4), iv({-1, 0, 0})), Error);
  // agrees with the direct pullback on the star subdivision
  auto s = star_subdivide(x, iv({1, 2}));
  Divisor kb = canonical(x) + b;
  Divisor pb = pullback(s.map, kb);
  std::size_t e = s.fan.ray_index(iv({1, 2}));
  // K_Y + B' - pullback = a E, with B' the strict transform (coefficient 0 at E)
  CHECK(-1 - pb[e] == discrepancy(x, b, iv({1, 2})));
}

TEST_CASE("pullback and pushforward examples") {
  Fan x = p2(), y = f1();
  ToricMap id{IntMat::identity(2), x, x};
  Divisor d{q(1, 2), 3, -1};
  CHECK(pullback(id, d) == d);
  CHECK(pushforward(id, d) == d);

  ToricMap blow{IntMat::identity(2), y, x};
  auto h = pullback(blow, prime(x, iv({1, 0})));
  CHECK(h[y.ray_index(iv({1, 1}))] == 1);
  CHECK(h[y.ray_index(iv({1, 0}))] == 1);
  CHECK(h[y.ray_index(iv({0, 1}))] == 0);
  CHECK(is_zero(pullback(blow, Divisor(3))));

  Divisor dy{1, 2, 3, 4};
  auto pf = pushforward(blow, dy);
  REQUIRE(pf.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(pf[i] == dy[y.ray_index(x.rays[i])]);

  ToricMap up{IntMat::identity(2), x, y};
  CHECK_THROWS_AS(pushforward(up, d), Error);
}

TEST_CASE("round examples") {
  CHECK(round(Divisor{q(1, 2), q(-1, 2)}, Rounding::Up) == Divisor{1, 0});
  CHECK(round(Divisor{2, -3}, Rounding::Up) == Divisor{2, -3});
  CHECK(round(Divisor{q(1, 3)}, Rounding::Down) == Divisor{0});
  CHECK(round(Divisor{q(-1, 3)}, Rounding::Down) == Divisor{-1});
}

TEST_CASE("h0_dim examples") {
  Fan x = p2();
  auto a = h0_dim(x, 3 * prime(x, iv({1, 0})));
  CHECK(a.kind == H0::Kind::Count);
  CHECK(a.count == 10);
  CHECK(h0_dim(x, canonical(x)).kind == H0::Kind::Zero);

  // flip side A is birational over its affine base: sections never vanish
  Fan fa = fans::flip_side_a(iv({1, 1, -2}));
  CHECK(h0_dim(fa, -1 * prime(fa, iv({0, 0, 1}))).kind == H0::Kind::Infinite);

  // P1 x A1 over A1 with D negative on the fibers
  Fan pa(2, {iv({1, 0}), iv({-1, 0}), iv({0, 1})}, {{0, 2}, {1, 2}});
  Divisor d = -1 * (prime(pa, iv({1, 0})) + prime(pa, iv({-1, 0})));
  CHECK(h0_dim(pa, d).kind == H0::Kind::Zero);
}

TEST_CASE("principal divisors") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long> v(-4, 4);
  for (const Fan& x : {p2(), f1(), fans::p112(), fans::cube(), fans::projective_space(3)}) {
    for (int t = 0; t < 5; ++t) {
      IntVec m(x.rank);
      for (auto& c : m) c = v(rng);
      Divisor d = principal(x, m);
      auto cd = require_cartier(x, d);
      for (const auto& ms : cd.m)
        for (std::size_t i = 0; i < x.rank; ++i) CHECK(ms[i] == -m[i]);
      CHECK(is_nef(x, d));
      auto pts = lattice_points(section_polytope(x, d));
      REQUIRE(pts.size() == 1);
      for (std::size_t i = 0; i < x.rank; ++i) CHECK(pts[0][i] == -m[i]);
    }
  }
}

TEST_CASE("cartier data agrees on walls") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<long> v(-3, 3);
  for (int t = 0; t < 20; ++t) {
    Fan x = t % 2 ? f1() : fans::projective_space(3);
    Divisor d(x.nrays());
    for (auto& a : d) a = q(v(rng), 1 + (v(rng) + 3) % 3);
    auto cd = require_cartier(x, d);
    for (std::size_t c = 0; c < x.cones.size(); ++c)
      for (auto r : x.cones[c]) CHECK(dot(cd.m[c], x.rays[r]) == -d[r]);
    for (std::size_t a = 0; a < x.cones.size(); ++a)
      for (std::size_t b = a + 1; b < x.cones.size(); ++b) {
        Cone common;
        std::set_intersection(x.cones[a].begin(), x.cones[a].end(), x.cones[b].begin(), x.cones[b].end(),
                              std::back_inserter(common));
        for (auto r : common) CHECK(dot(cd.m[a], x.rays[r]) == dot(cd.m[b], x.rays[r]));
      }
  }
}

TEST_CASE("pullback then pushforward along a small map is the identity") {
  Fan cube = fans::cube();
  auto q_ = q_factorialize(cube);
  for (long s = -2; s <= 2; ++s) {
    Divisor d = Rat(s) * canonical(cube) + principal(cube, iv({s, 1, -s}));
    Divisor up = pullback(q_.map, d);
    CHECK(pushforward(q_.map, up) == d);
  }
}

TEST_CASE("klt implies discrepancies above -1") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> num(-2, 7);
  int klt = 0, nonklt = 0;
  for (int t = 0; t < 40; ++t) {
    Fan x = t % 2 ? p2() : fans::p112();
    Divisor b(x.nrays());
    for (auto& a : b) a = q(num(rng), 6);
    auto k = klt_check(x, b);
    bool any_bad = false;
    for (std::size_t r = 0; r < x.nrays(); ++r)
      if (-b[r] <= -1) any_bad = true;
    for (int s = 0; s < 6; ++s) {
      auto v = kvtest::random_support_point(x, rng, 4);
      if (!v) continue;
      Rat a = discrepancy(x, b, *v);
      if (k.ok) CHECK(a > -1);
      if (a <= -1) any_bad = true;
    }
    bool effective = true;
    for (const auto& a : b) effective = effective && a >= 0;
    if (effective && any_bad) CHECK_FALSE(k.ok);
    (k.ok ? klt : nonklt)++;
  }
  CHECK(klt > 3);
  CHECK(nonklt > 3);
}

TEST_CASE("nef implies semiample certificate; big matches section growth") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<long> v(-1, 2);
  int nef = 0, big = 0;
  std::vector<Fan> fs{p2(), f1(), fans::p112(), fans::product(fans::projective_space(1), fans::projective_space(1))};
  for (int t = 0; t < 60; ++t) {
    const Fan& x = fs[static_cast<std::size_t>(t) % fs.size()];
    Divisor d(x.nrays());
    for (auto& a : d) a = v(rng);
    auto p = positivity(x, d);
    if (p.nef) {
      ++nef;
      auto w = semiample_witness(x, d);
      REQUIRE(std::holds_alternative<SemiampleWitness>(w));
      CHECK(std::get<SemiampleWitness>(w).certificate);
    }
    bool full = false;
    for (long l = 1; l <= 6 && !full; ++l)
      full = affine_dim(lattice_points(section_polytope(x, Rat(l) * d)), x.rank) == x.rank;
    CHECK(p.big == full);
    if (p.big) ++big;
  }
  CHECK(nef > 5);
  CHECK(big > 5);
}
