#include <random>

#include "doctest.h"
#include "kv/mmp.hpp"
#include "support.hpp"

using namespace kv;
using kvtest::iv;
using kvtest::q;

namespace {

Fan p2() { return fans::projective_space(2); }
Fan f1() { return star_subdivide(p2(), iv({1, 1})).fan; }
Fan side_a(long c) { return fans::flip_side_a(iv({1, 1, c})); }

ExtremalRay ray_through(const Fan& x, std::initializer_list<IntVec> tau) {
  Cone t;
  for (const auto& u : tau) t.push_back(x.ray_index(u));
  std::sort(t.begin(), t.end());
  auto ws = walls(x);
  for (const auto& r : extremal_rays(x))
    for (auto i : r.walls)
      if (ws[i].tau == t) return r;
  throw Error("test: no extremal ray through that wall");
}

Divisor pd(const Fan& x, const IntVec& u) { return prime(x, u); }

// Both sides of the flip and the ray, for D negative on it.
struct FlipCase {
  Fan x, plus;
  ExtremalRay r;
};

FlipCase flip_case(long c, const Divisor& d) {
  FlipCase fc{side_a(c), {}, {}};
  fc.r = extremal_rays(fc.x).at(0);
  fc.plus = flip(fc.x, fc.r, d).plus;
  return fc;
}

std::vector<Fan> seeds() {
  std::mt19937_64 rng(31);
  std::vector<Fan> out{p2(), f1(), fans::hirzebruch(2), fans::hirzebruch(3), fans::projective_space(3),
                       fans::product(fans::projective_space(1), fans::projective_space(1)),
                       fans::product(fans::projective_space(1), fans::projective_space(2)), side_a(-2), side_a(-1),
                       q_factorialize(fans::cube()).fan};
  for (int t = 0; t < 8; ++t) {
    Fan f = t % 2 ? p2() : fans::projective_space(3);
    for (int k = 0; k < 2 + t % 3; ++k)
      if (auto v = kvtest::random_support_point(f, rng, 2)) f = star_subdivide(f, *v).fan;
    out.push_back(f);
  }
  return out;
}

}  // namespace

TEST_CASE("contract examples") {
  Fan x = f1();
  auto c = contract(x, ray_through(x, {iv({1, 1})}));
  CHECK(c.kind == Contraction::Kind::Divisorial);
  REQUIRE(c.removed);
  CHECK(x.rays[*c.removed] == iv({1, 1}));
  CHECK(c.target == p2());

  Fan a = side_a(-2);
  auto ca = contract(a, extremal_rays(a)[0]);
  CHECK(ca.kind == Contraction::Kind::Flipping);
  CHECK(ca.target.cones == std::vector<Cone>{{0, 1, 2, 3}});
  CHECK(ca.target.rays == a.rays);

  auto cp = contract(p2(), extremal_rays(p2())[0]);
  CHECK(cp.kind == Contraction::Kind::Fibration);
  CHECK(cp.target.rank == 0);
  CHECK(cp.target.nrays() == 0);

  // F_2: the (-2)-curve contracts to P(1,1,2), the fibre class to P^1
  Fan h = fans::hirzebruch(2);
  auto ch = contract(h, ray_through(h, {iv({0, 1})}));
  CHECK(ch.kind == Contraction::Kind::Divisorial);
  CHECK(ch.target == Fan(2, {iv({1, 0}), iv({-1, 2}), iv({0, -1})}, {{0, 1}, {0, 2}, {1, 2}}));
  auto cf = contract(h, ray_through(h, {iv({1, 0})}));
  CHECK(cf.kind == Contraction::Kind::Fibration);
  CHECK(cf.target.rank == 1);
  CHECK(cf.target.nrays() == 2);
  CHECK(check_map(cf.map).well_defined);

  Fan pp = fans::product(fans::projective_space(1), fans::projective_space(1));
  for (const auto& r : extremal_rays(pp)) {
    auto k = contract(pp, r);
    CHECK(k.kind == Contraction::Kind::Fibration);
    CHECK(k.target == fans::projective_space(1));
  }

  ExtremalRay bogus = extremal_rays(x)[0];
  bogus.walls = {99};
  CHECK_THROWS_AS(contract(x, bogus), Error);
}

TEST_CASE("flip examples") {
  Fan a = side_a(-2);
  auto r = extremal_rays(a)[0];
  Divisor d = pd(a, iv({1, 0, 0}));
  auto f = flip(a, r, d);
  CHECK(f.plus == fans::flip_side_b(iv({1, 1, -2})));
  CHECK(f.z.cones.size() == 1);
  CHECK_THROWS_AS(flip(a, r, pd(a, iv({0, 0, 1}))), Error);  // D.R > 0

  // flop: twice gives the original
  Fan o = side_a(-1);
  auto ro = extremal_rays(o)[0];
  Divisor dn = pd(o, iv({1, 0, 0}));
  auto once = flip(o, ro, dn);
  CHECK(once.plus == fans::flip_side_b(iv({1, 1, -1})));
  auto back = flip(once.plus, extremal_rays(once.plus)[0], (-1) * dn);
  CHECK(back.plus == o);

  Fan x = f1();
  CHECK_THROWS_AS(flip(x, ray_through(x, {iv({1, 1})}), pd(x, iv({1, 1}))), Error);
}

TEST_CASE("flip_diagram examples") {
  // hand computation: X cone <u1,u2,u3>, X+ cone <u1,u3,u4> both contain w
  for (long c : {-1L, -2L}) {
    auto fc = flip_case(c, pd(side_a(c), iv({1, 0, 0})));
    auto g = flip_diagram(fc.x, fc.plus, fc.r);
    CHECK(g.e_ray == iv({1, 1, 0}));
    CHECK(g.theta.nrays() == fc.x.nrays() + 1);
    CHECK(is_simplicial(g.theta));
    CHECK(check_map(g.psi).birational);
    CHECK(check_map(g.psi_plus).birational);
    CHECK(kappa(g, pd(fc.x, iv({1, 0, 0}))) == -1);
    CHECK(kappa(g, pd(fc.x, iv({0, 1, 0}))) == -1);
    if (c == -2) {
      CHECK(kappa(g, pd(fc.x, iv({0, 0, 1}))) == 2);
      CHECK(kappa(g, pd(fc.x, iv({1, 1, -2}))) == 1);
      CHECK(g.lambda == 2);
    } else {
      CHECK(kappa(g, pd(fc.x, iv({0, 0, 1}))) == 1);
      CHECK(g.lambda == 1);
    }
    // pullback of a Cartier divisor from Z: kappa vanishes
    CHECK(kappa(g, principal(fc.x, iv({3, -1, 2}))) == 0);
    // linearity and the wall pairing
    std::mt19937_64 rng(c + 100);
    std::uniform_int_distribution<long> v(-4, 4);
    auto w = walls(fc.x)[fc.r.walls[0]];
    for (int t = 0; t < 9; ++t) {
      Divisor f(fc.x.nrays());
      for (auto& e : f) e = q(v(rng), 1 + (v(rng) + 4) % 3);
      CHECK(kappa(g, f) == g.gamma.pair(f));
      CHECK(kappa(g, f) == g.lambda * intersect(fc.x, f, w));
    }
  }
}

TEST_CASE("step_certificate examples") {
  // flip u4 = (1,1,-2), B = 0, D = K: a = -1 + 2, e = -2, c = -lambda K.C = 1
  Fan a = side_a(-2);
  Divisor k = canonical(a), zero(a.nrays());
  auto fc = flip_case(-2, k);
  auto g = flip_diagram(fc.x, fc.plus, fc.r);
  auto s = step_certificate(g, a, k, zero);
  CHECK(s.ok);
  CHECK(s.a == 1);
  CHECK(s.b == 0);
  CHECK(s.c == 1);
  CHECK(s.flip_case == StepCertificate::Case::Low);
  CHECK(s.m_shift == 1);
  CHECK(s.d_y == canonical(g.theta));

  // fractional boundary: a = 1 - 3/4 - 3/4, e = 1/2
  Divisor b = {q(0), q(3, 4), q(3, 4), q(0)};
  Divisor d = {q(0), q(1, 4), q(1, 4), q(0)};
  REQUIRE(a.rays[1] == iv({0, 1, 0}));
  REQUIRE(a.rays[2] == iv({1, 0, 0}));
  auto s2 = step_certificate(g, a, d, b);
  CHECK(s2.ok);
  CHECK(s2.a == q(-1, 2));
  CHECK(s2.b == q(1, 2));
  CHECK(s2.flip_case == StepCertificate::Case::High);
  CHECK(s2.d_y == round(pullback(g.psi, d), Rounding::Down));

  // flop, integral D: b = 0
  auto fo = flip_case(-1, pd(side_a(-1), iv({1, 0, 0})));
  auto go = flip_diagram(fo.x, fo.plus, fo.r);
  auto so = step_certificate(go, fo.x, pd(fo.x, iv({1, 0, 0})), Divisor(4));
  CHECK(so.b == 0);
  CHECK(so.a == 1);
  CHECK(so.flip_case == StepCertificate::Case::Low);
}

TEST_CASE("run_mmp examples") {
  Fan x = f1();
  auto run = run_mmp(x, pd(x, iv({1, 1})), Divisor(4));
  REQUIRE(run.steps.size() == 1);
  CHECK(run.steps[0].cert.kind == StepCertificate::Kind::Divisorial);
  CHECK(run.steps[0].cert.a == 1);
  CHECK(run.models.back() == p2());
  CHECK(run.divisors.back() == Divisor(3));
  CHECK(run.end == MMPRun::End::Nef);

  auto r2 = run_mmp(p2(), (-1) * canonical(p2()), Divisor(3));
  CHECK(r2.steps.empty());
  CHECK(r2.end == MMPRun::End::Nef);

  auto r3 = run_mmp(p2(), canonical(p2()), Divisor(3));
  CHECK(r3.steps.empty());
  CHECK(r3.end == MMPRun::End::MoriFibreSpace);
  REQUIRE(r3.fibration);
  CHECK(r3.fibration->target.rank == 0);

  Fan a = side_a(-2);
  auto r4 = run_mmp(a, pd(a, iv({1, 0, 0})), Divisor(4));
  REQUIRE(r4.steps.size() == 1);
  CHECK(r4.steps[0].cert.kind == StepCertificate::Kind::Flip);
  CHECK(r4.models.back() == fans::flip_side_b(iv({1, 1, -2})));
  CHECK(r4.end == MMPRun::End::Nef);

  CHECK_THROWS_AS(run_mmp(fans::cube(), Divisor(8), Divisor(8)), Error);
}

TEST_CASE("run_mmp invariants") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> v(-3, 3), bd(0, 3);
  std::size_t flips = 0, divs = 0;
  for (const Fan& f : seeds()) {
    const auto bf = boundary_facets(f);
    for (int t = 0; t < 4; ++t) {
      Divisor d(f.nrays()), b(f.nrays());
      for (auto& e : d) e = q(v(rng), 1 + bd(rng) % 2);
      for (auto& e : b) e = q(bd(rng), 4);
      auto run = run_mmp(f, d, b);
      for (std::size_t i = 0; i < run.models.size(); ++i) {
        const Fan& m = run.models[i];
        CHECK(validate(m).empty());
        CHECK(is_simplicial(m));
        CHECK(is_support_convex(m));
        CHECK(is_complete(m) == is_complete(f));
        CHECK(is_q_cartier(m, run.divisors[i]));
      }
      for (std::size_t i = 0; i < run.steps.size(); ++i) {
        const auto& st = run.steps[i];
        CHECK_MESSAGE(st.cert.ok, st.cert.failure);
        const Fan &src = run.models[i], &dst = run.models[i + 1];
        if (st.cert.kind == StepCertificate::Kind::Divisorial) {
          ++divs;
          CHECK(dst.nrays() + 1 == src.nrays());
          // oracle: (D - aE).C = 0 on the contracted curve
          auto ws = walls(src);
          const auto& w = ws[st.wall];
          Divisor e = prime(src, st.cert.exceptional);
          Rat dc = intersect(src, run.divisors[i], w), ec = intersect(src, e, w);
          CHECK(ec < 0);
          CHECK(st.cert.a == dc / ec);
        } else {
          ++flips;
          REQUIRE(st.diagram);
          CHECK(dst.rays == src.rays);
          CHECK(st.cert.c == -st.diagram->lambda * intersect(src, run.divisors[i], walls(src)[st.wall]));
          // flipping back with -D recovers the source
          auto back = extremal_rays(dst);
          bool found = false;
          for (const auto& r : back)
            if (contract(dst, r).kind == Contraction::Kind::Flipping && dot(r.cls.c, run.divisors[i]) > 0) {
              if (flip(dst, r, (-1) * run.divisors[i]).plus == src) found = true;
            }
          CHECK(found);
        }
      }
      if (run.end == MMPRun::End::Nef) CHECK(is_nef(run.models.back(), run.divisors.back()));
      if (run.end == MMPRun::End::MoriFibreSpace) {
        REQUIRE(run.fibre_ray);
        CHECK(dot(run.fibre_ray->cls.c, run.divisors.back()) < 0);
        CHECK(check_map(run.fibration->map).well_defined);
      }
      if (!is_complete(f)) CHECK(boundary_facets(run.models.back()).size() == bf.size());
    }
  }
  CHECK(divs > 0);
  CHECK(flips > 0);
}
