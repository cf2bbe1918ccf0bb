#include "kv/mmp.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace kv {

namespace {

struct Dsu {
  std::vector<std::size_t> p;
  explicit Dsu(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  std::size_t find(std::size_t x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(std::size_t a, std::size_t b) { p[find(a)] = find(b); }
};

struct Groups {
  std::vector<std::vector<std::size_t>> members;  // cone indices
  std::vector<Cone> rays;                         // union of their rays
};

// Maximal cones glued across the walls of r.
Groups merge(const Fan& x, const ExtremalRay& r) {
  if (r.walls.empty()) throw Error("contract: extremal ray has no walls");
  auto ws = walls(x);
  Dsu dsu(x.cones.size());
  IntVec dir = primitive(r.cls.c);
  for (auto i : r.walls) {
    if (i >= ws.size() || primitive(wall_relation(x, ws[i])) != dir) throw Error("contract: R is not an extremal ray of X");
    dsu.unite(ws[i].sigma, ws[i].sigma2);
  }
  // every wall with this class must be listed
  for (std::size_t i = 0; i < ws.size(); ++i)
    if (dsu.find(ws[i].sigma) != dsu.find(ws[i].sigma2) && primitive(wall_relation(x, ws[i])) == dir)
      throw Error("contract: R is not an extremal ray of X");
  std::map<std::size_t, std::size_t> slot;
  Groups g;
  for (std::size_t c = 0; c < x.cones.size(); ++c) {
    auto [it, fresh] = slot.try_emplace(dsu.find(c), g.members.size());
    if (fresh) {
      g.members.emplace_back();
      g.rays.emplace_back();
    }
    g.members[it->second].push_back(c);
    auto& rs = g.rays[it->second];
    rs.insert(rs.end(), x.cones[c].begin(), x.cones[c].end());
  }
  for (auto& rs : g.rays) {
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
  }
  return g;
}

Contraction fibration(const Fan& x, const Groups& g) {
  std::vector<IntVec> lin;
  for (const auto& rs : g.rays) {
    auto gens = x.cone_rays(rs);
    for (const auto& u : gens) {
      IntVec neg = u;
      for (auto& e : neg) e = -e;
      if (cone_contains(gens, neg)) lin.push_back(u);
    }
  }
  const std::size_t l = rank_of(IntMat::from_rows(lin, x.rank));
  // rows of V^T past the lineality rank annihilate L and extend to a basis
  SmithForm s = smith_normal_form(IntMat::from_rows(lin, x.rank));
  IntMat q(x.rank - l, x.rank);
  for (std::size_t i = l; i < x.rank; ++i)
    for (std::size_t j = 0; j < x.rank; ++j) q(i - l, j) = s.V(j, i);

  std::vector<IntVec> rays;
  std::vector<std::vector<IntVec>> cone_gens;
  for (const auto& rs : g.rays) {
    std::vector<IntVec> img;
    for (auto i : rs) {
      IntVec v = q * x.rays[i];
      if (!is_zero(v)) img.push_back(primitive(v));
    }
    if (contains_line([&] {
          std::vector<RatVec> r;
          for (const auto& v : img) r.push_back(to_rat(v));
          return r;
        }()))
      throw Error("contract: lineality spaces of the merged cones differ");
    std::vector<IntVec> ext;
    for (auto k : extreme_rays(img)) ext.push_back(img[k]);
    std::sort(ext.begin(), ext.end());
    ext.erase(std::unique(ext.begin(), ext.end()), ext.end());
    rays.insert(rays.end(), ext.begin(), ext.end());
    cone_gens.push_back(std::move(ext));
  }
  std::sort(rays.begin(), rays.end());
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  std::vector<Cone> cones;
  for (const auto& gens : cone_gens) {
    Cone c;
    for (const auto& v : gens) c.push_back(std::lower_bound(rays.begin(), rays.end(), v) - rays.begin());
    std::sort(c.begin(), c.end());
    cones.push_back(std::move(c));
  }
  std::vector<Cone> maximal;
  for (const auto& c : cones) {
    bool face = false;
    for (const auto& d : cones)
      if (d != c && std::includes(d.begin(), d.end(), c.begin(), c.end())) face = true;
    if (!face) maximal.push_back(c);
  }
  Fan target(x.rank - l, rays, maximal);
  Contraction out;
  out.kind = Contraction::Kind::Fibration;
  out.target = target;
  out.map = {q, x, target};
  for (std::size_t k = 0; k < g.rays.size(); ++k)
    if (g.members[k].size() > 1) out.merged.push_back(g.rays[k]);
  return out;
}

}  // namespace

Contraction contract(const Fan& x, const ExtremalRay& r) {
  if (!is_simplicial(x)) throw Error("contract: fan is not simplicial");
  Groups g = merge(x, r);

  for (const auto& rs : g.rays) {
    std::vector<RatVec> gens;
    for (const auto& u : x.cone_rays(rs)) gens.push_back(to_rat(u));
    if (contains_line(gens)) return fibration(x, g);
  }

  Contraction out;
  std::optional<std::size_t> removed;
  for (std::size_t k = 0; k < g.rays.size(); ++k) {
    if (g.members[k].size() < 2) continue;
    out.merged.push_back(g.rays[k]);
    const auto& rs = g.rays[k];
    auto ext = extreme_rays(x.cone_rays(rs));
    if (ext.size() == rs.size()) continue;
    if (ext.size() + 1 != rs.size()) throw Error("contract: merged structure is not a fan");
    std::vector<bool> is_ext(rs.size());
    for (auto e : ext) is_ext[e] = true;
    std::size_t inner = Fan::npos;
    for (std::size_t i = 0; i < rs.size(); ++i)
      if (!is_ext[i]) inner = rs[i];
    if (removed && *removed != inner) throw Error("contract: merged structure is not a fan");
    removed = inner;
  }

  std::vector<Cone> cones;
  for (std::size_t k = 0; k < g.rays.size(); ++k) {
    Cone c = g.rays[k];
    if (removed) {
      auto it = std::find(c.begin(), c.end(), *removed);
      if (it != c.end()) {
        if (g.members[k].size() < 2) throw Error("contract: merged structure is not a fan");
        c.erase(it);
      }
    }
    cones.push_back(std::move(c));
  }

  if (removed) {
    // the surviving rays, reindexed
    std::vector<IntVec> rays;
    std::vector<std::size_t> idx(x.nrays(), Fan::npos);
    for (std::size_t i = 0; i < x.nrays(); ++i)
      if (i != *removed) {
        idx[i] = rays.size();
        rays.push_back(x.rays[i]);
      }
    for (auto& c : cones)
      for (auto& i : c) i = idx[i];
    Fan target(x.rank, rays, cones);
    if (!validate(target).empty()) throw Error("contract: merged structure is not a fan");
    if (!is_simplicial(target)) throw Error("contract: divisorial target is not simplicial");
    out.kind = Contraction::Kind::Divisorial;
    out.removed = removed;
    out.target = target;
    out.map = {IntMat::identity(x.rank), x, target};
    return out;
  }

  Fan target(x.rank, x.rays, cones);
  if (!validate(target).empty()) throw Error("contract: merged structure is not a fan");
  out.kind = Contraction::Kind::Flipping;
  out.target = target;
  out.map = {IntMat::identity(x.rank), x, target};
  return out;
}

Flip flip(const Fan& x, const ExtremalRay& r, const Divisor& d) {
  Contraction c = contract(x, r);
  if (c.kind != Contraction::Kind::Flipping) throw Error("flip: not a flipping ray");
  const RatVec& b = r.cls.c;
  if (dot(b, d) >= 0) throw Error("flip: D is not negative on R");

  Groups g = merge(x, r);
  std::vector<Cone> cones;
  std::vector<Cone> circuits;
  for (std::size_t k = 0; k < g.rays.size(); ++k) {
    if (g.members[k].size() < 2) {
      cones.push_back(g.rays[k]);
      continue;
    }
    const Cone& rs = g.rays[k];
    circuits.push_back(rs);
    // the current triangulation drops one positive index at a time
    for (auto j : rs)
      if (b[j] < 0) {
        Cone s;
        for (auto i : rs)
          if (i != j) s.push_back(i);
        cones.push_back(std::move(s));
      }
  }
  Fan plus(x.rank, x.rays, cones);
  if (!validate(plus).empty() || !is_simplicial(plus)) throw Error("flip: other triangulation is not a simplicial fan");

  CartierData cd = require_cartier(plus, d);
  for (const auto& w : walls(plus)) {
    Cone all = w.tau;
    all.push_back(w.off);
    all.push_back(w.off2);
    std::sort(all.begin(), all.end());
    bool over = std::any_of(circuits.begin(), circuits.end(),
                            [&](const Cone& rs) { return std::includes(rs.begin(), rs.end(), all.begin(), all.end()); });
    if (over && intersect(plus, d, w, cd) <= 0) throw Error("flip: D+ is not relatively ample on the other triangulation");
  }
  return {plus, c.target, {IntMat::identity(x.rank), plus, c.target}};
}

Rat kappa(const FlipDiagram& g, const Divisor& f) {
  return pullback(g.psi_plus, f)[g.e_index] - pullback(g.psi, f)[g.e_index];
}

FlipDiagram flip_diagram(const Fan& x, const Fan& xplus, const ExtremalRay& r) {
  if (x.rays != xplus.rays) throw Error("flip_diagram: X and X+ have different rays");
  const RatVec& b = r.cls.c;
  RatVec s(x.rank);
  for (std::size_t i = 0; i < x.nrays(); ++i)
    if (b[i] > 0)
      for (std::size_t j = 0; j < x.rank; ++j) s[j] += b[i] * x.rays[i][j];
  FlipDiagram g;
  g.e_ray = primitive(s);
  Subdivision a = star_subdivide(x, g.e_ray), p = star_subdivide(xplus, g.e_ray);
  if (!(a.fan == p.fan)) throw Error("flip_diagram: the two star subdivisions disagree");
  g.theta = a.fan;
  g.e_index = g.theta.ray_index(g.e_ray);
  if (g.theta.nrays() != x.nrays() + 1) throw Error("flip_diagram: E is not a new ray");
  g.psi = a.map;
  g.psi_plus = p.map;

  g.gamma.c.resize(x.nrays());
  for (std::size_t i = 0; i < x.nrays(); ++i) {
    Divisor e(x.nrays());
    e[i] = 1;
    g.gamma.c[i] = kappa(g, e);
  }
  std::optional<Rat> lambda;
  for (std::size_t i = 0; i < x.nrays(); ++i)
    if (b[i] != 0) {
      Rat l = g.gamma.c[i] / b[i];
      if (lambda && *lambda != l) throw Error("flip_diagram: kappa is not proportional to the wall class");
      lambda = l;
    } else if (g.gamma.c[i] != 0) {
      throw Error("flip_diagram: kappa is not proportional to the wall class");
    }
  if (!lambda || *lambda <= 0) throw Error("flip_diagram: gamma is not a positive multiple of the flipped class");
  g.lambda = *lambda;
  return g;
}

StepCertificate step_certificate(const FlipDiagram& g, const Fan& x, const Divisor& d, const Divisor& b) {
  StepCertificate s;
  s.kind = StepCertificate::Kind::Flip;
  s.exceptional = g.e_ray;
  auto fail = [&](std::string why) {
    if (s.ok) s.failure = std::move(why);
    s.ok = false;
  };

  s.a = discrepancy(x, b, g.e_ray);
  // K_Theta has -1 at E; the strict transform of B has 0 there
  Rat direct = -1 - pullback(g.psi, canonical(x) + b)[g.e_index];
  if (direct != s.a) throw Error("step_certificate: discrepancy disagrees with the pullback on Theta");

  Divisor pd = pullback(g.psi, d);
  const Rat& e = pd[g.e_index];
  Int up;
  mpz_cdiv_q(up.get_mpz_t(), e.get_num_mpz_t(), e.get_den_mpz_t());
  s.b = Rat(up) - e;
  s.c = -kappa(g, d);

  if (!(s.a > -1)) fail("a <= -1");
  if (s.b < 0 || s.b >= 1) fail("b outside [0,1)");
  if (!(s.c > 0)) fail("c <= 0");

  if (-s.a + s.b < 1) {
    s.flip_case = StepCertificate::Case::Low;
    Rat t = s.a - s.b;
    mpz_cdiv_q(s.m_shift.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
    Rat v = -s.a + s.b + Rat(s.m_shift);
    if (s.m_shift < 0 || v < 0 || v >= 1) fail("no shift m >= 0 with -a+b+m in [0,1)");
    s.d_y = round(pd, Rounding::Up);
    s.d_y[g.e_index] += Rat(s.m_shift);
  } else {
    s.flip_case = StepCertificate::Case::High;
    s.m_shift = 0;
    if (!(s.a < 0 && s.a > -1 && s.b > 0 && s.b < 1)) fail("case High without 0 < -a < 1 and 0 < b < 1");
    s.d_y = round(pd, Rounding::Down);
  }
  return s;
}

MMPRun run_mmp(const Fan& x0, const Divisor& d0, const Divisor& b0) {
  if (!is_simplicial(x0)) throw Error("run_mmp: fan is not simplicial");
  if (!is_support_convex(x0)) throw Error("run_mmp: support is not convex");
  require_cartier(x0, d0);
  MMPRun run;
  run.models.push_back(x0);
  run.divisors.push_back(d0);
  run.boundaries.push_back(b0);

  for (std::size_t step = 0;; ++step) {
    if (step >= kStepCap) throw Error("run_mmp: step cap exceeded");
    const Fan x = run.models.back();
    const Divisor d = run.divisors.back(), b = run.boundaries.back();
    CartierData cd = require_cartier(x, d);
    auto ws = walls(x);

    std::optional<ExtremalRay> neg;
    for (auto& r : extremal_rays(x))
      if (intersect(x, d, ws[r.walls[0]], cd) < 0) {
        neg = std::move(r);
        break;
      }
    if (!neg) {
      run.end = MMPRun::End::Nef;
      return run;
    }

    Contraction c = contract(x, *neg);
    MMPStep st;
    st.wall = neg->walls[0];
    st.wall_rays = ws[st.wall].tau;

    if (c.kind == Contraction::Kind::Fibration) {
      run.end = MMPRun::End::MoriFibreSpace;
      run.fibration = std::move(c);
      run.fibre_ray = std::move(neg);
      return run;
    }

    if (c.kind == Contraction::Kind::Divisorial) {
      Divisor dn = pushforward(c.map, d), bn = pushforward(c.map, b);
      Divisor back = pullback(c.map, dn);
      const std::size_t e = *c.removed;
      st.cert.kind = StepCertificate::Kind::Divisorial;
      st.cert.exceptional = x.rays[e];
      st.cert.a = d[e] - back[e];
      for (std::size_t i = 0; i < x.nrays(); ++i)
        if (i != e && back[i] != d[i]) throw Error("run_mmp: D_n - f^*D_{n+1} is not supported on E");
      if (!(st.cert.a > 0)) {
        st.cert.ok = false;
        st.cert.failure = "divisorial a <= 0";
      }
      run.models.push_back(c.target);
      run.divisors.push_back(dn);
      run.boundaries.push_back(bn);
    } else {
      Flip f = flip(x, *neg, d);
      FlipDiagram g = flip_diagram(x, f.plus, *neg);
      st.cert = step_certificate(g, x, d, b);
      if (pushforward(g.psi_plus, pullback(g.psi, d)) != d)
        throw Error("run_mmp: psi'_* psi^* D differs from the strict transform");
      st.diagram = std::move(g);
      run.models.push_back(f.plus);
      run.divisors.push_back(d);
      run.boundaries.push_back(b);
    }
    run.steps.push_back(std::move(st));
  }
}

}  // namespace kv
