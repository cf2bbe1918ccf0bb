#include "kv/mori.hpp"

#include <algorithm>
#include <map>

namespace kv {

Int multiplicity(const Fan& x, const Cone& c) {
  Int m = 1;
  if (c.empty()) return m;
  for (const auto& d : smith_invariants(IntMat::from_rows(x.cone_rays(c), x.rank))) m *= d;
  return m;
}

std::vector<Wall> walls(const Fan& x) {
  if (!is_simplicial(x)) throw Error("walls: fan is not simplicial");
  std::map<Cone, std::vector<std::pair<std::size_t, std::size_t>>> faces;
  for (std::size_t c = 0; c < x.cones.size(); ++c) {
    const Cone& s = x.cones[c];
    for (std::size_t j = 0; j < s.size(); ++j) {
      Cone t;
      for (std::size_t k = 0; k < s.size(); ++k)
        if (k != j) t.push_back(s[k]);
      faces[t].push_back({c, s[j]});
    }
  }
  std::vector<Wall> out;
  for (const auto& [tau, adj] : faces) {
    if (adj.size() != 2) continue;
    out.push_back({tau, adj[0].first, adj[1].first, adj[0].second, adj[1].second});
  }
  return out;
}

RatVec wall_relation(const Fan& x, const Wall& w) {
  Cone all = w.tau;
  all.push_back(w.off);
  all.push_back(w.off2);
  RatMat A(x.rank, all.size());
  for (std::size_t j = 0; j < all.size(); ++j)
    for (std::size_t i = 0; i < x.rank; ++i) A(i, j) = x.rays[all[j]][i];
  auto ker = kernel(A);
  if (ker.size() != 1) throw Error("wall_relation: relation is not unique");
  const RatVec& k = ker[0];
  const std::size_t io = all.size() - 2, io2 = all.size() - 1;
  if (k[io] == 0 || k[io2] == 0 || sgn(k[io]) != sgn(k[io2]))
    throw Error("wall_relation: off-wall rays on the same side");
  Rat mt(multiplicity(x, w.tau));
  Rat scale = mt / Rat(multiplicity(x, x.cones[w.sigma])) / k[io];
  RatVec b(x.nrays());
  for (std::size_t j = 0; j < all.size(); ++j) b[all[j]] = scale * k[j];
  if (b[w.off2] != mt / Rat(multiplicity(x, x.cones[w.sigma2])))
    throw Error("wall_relation: multiplicities disagree with the relation");
  return b;
}

CurveClass curve_class(const Fan& x, const Wall& w) { return {wall_relation(x, w)}; }

Rat intersect(const Fan& x, const Divisor& d, const Wall& w, const CartierData& cd) {
  RatVec b = wall_relation(x, w);
  const RatVec &m = cd.m[w.sigma], &m2 = cd.m[w.sigma2];
  RatVec diff(x.rank);
  for (std::size_t i = 0; i < x.rank; ++i) diff[i] = m[i] - m2[i];
  Rat v = b[w.off2] * dot(diff, x.rays[w.off2]);
  Rat swapped = -b[w.off] * dot(diff, x.rays[w.off]);
  if (v != swapped) throw Error("intersect: asymmetric wall pairing");
  if (v != dot(b, d)) throw Error("intersect: Cartier pairing disagrees with the curve class");
  return v;
}

Rat intersect(const Fan& x, const Divisor& d, const Wall& w) { return intersect(x, d, w, require_cartier(x, d)); }

std::vector<ExtremalRay> extremal_rays(const Fan& x) {
  auto ws = walls(x);
  std::vector<RatVec> cls;
  for (const auto& w : ws) cls.push_back(wall_relation(x, w));
  std::vector<ExtremalRay> out;
  if (cls.empty()) return out;
  for (auto i : extreme_rays(cls)) {
    ExtremalRay r;
    r.cls = {cls[i]};
    IntVec dir = primitive(cls[i]);
    for (std::size_t j = 0; j < cls.size(); ++j)
      if (primitive(cls[j]) == dir) r.walls.push_back(j);
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const ExtremalRay& a, const ExtremalRay& b) { return a.walls[0] < b.walls[0]; });
  return out;
}

}  // namespace kv
