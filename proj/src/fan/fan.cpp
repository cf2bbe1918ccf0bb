#include "kv/fan.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace kv {

namespace {

IntMat rows_of(const std::vector<IntVec>& v, std::size_t rank) { return IntMat::from_rows(v, rank); }

std::size_t rank_of_vecs(const std::vector<IntVec>& v, std::size_t rank) {
  if (v.empty()) return 0;
  return rank_of(rows_of(v, rank));
}

// Calls fn on every k-subset of {0..n-1} (sorted).
template <class Fn>
void for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

bool is_subset(const Cone& a, const Cone& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

Cone intersect(const Cone& a, const Cone& b) {
  Cone c;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(c));
  return c;
}

Cone difference(const Cone& a, const Cone& b) {
  Cone c;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(c));
  return c;
}

// Is cone(S) ∩ cone(T) = cone(S ∩ T), a common face? Tested by a separating
// covector: zero on common rays, positive on S \ T, negative on T \ S.
bool meets_in_common_face(const Fan& f, const Cone& s, const Cone& t) {
  IneqSystem sys(f.rank);
  for (auto i : intersect(s, t)) sys.eq(to_rat(f.rays[i]), 0);
  for (auto i : difference(s, t)) sys.gt(to_rat(f.rays[i]), 0);
  for (auto i : difference(t, s)) sys.lt(to_rat(f.rays[i]), 0);
  return feasible(sys).has_value();
}

std::vector<ConeFacet> global_facets(const Fan& f, const Cone& c) {
  auto local = cone_facets(f.cone_rays(c));
  for (auto& fc : local)
    for (auto& i : fc.gens) i = c[i];
  return local;
}

// One way of leaving a cone: a strict row.
std::vector<Inequality> escapes(const ConeHrep& h) {
  std::vector<Inequality> out;
  for (const auto& c : h.ineqs) {
    RatVec r = to_rat(c);
    for (auto& x : r) x = -x;
    out.push_back({r, 0, true});
  }
  for (const auto& a : h.eqs) {
    RatVec r = to_rat(a);
    out.push_back({r, 0, true});
    for (auto& x : r) x = -x;
    out.push_back({r, 0, true});
  }
  return out;
}

bool satisfies(const Inequality& q, const RatVec& x) {
  Rat v = dot(q.covector, x);
  return q.strict ? v > q.constant : v >= q.constant;
}

bool dfs_outside(IneqSystem& sys, const std::vector<std::vector<Inequality>>& esc, std::size_t depth) {
  auto w = feasible(sys);
  if (!w) return false;
  // the witness may already lie outside every remaining cone
  bool all = true;
  for (std::size_t j = depth; j < esc.size() && all; ++j) {
    bool out = false;
    for (const auto& q : esc[j])
      if (satisfies(q, *w)) out = true;
    all = out;
  }
  if (all) return true;
  for (const auto& q : esc[depth]) {
    sys.rows.push_back(q);
    bool found = dfs_outside(sys, esc, depth + 1);
    sys.rows.pop_back();
    if (found) return true;
  }
  return false;
}

// P ⊆ |f| for a polyhedral cone P given by weak rows in f's ambient space.
bool cone_in_support(const IneqSystem& p, const Fan& f) {
  if (!feasible(p)) return true;
  if (is_support_convex(f)) {
    ConeHrep h = cone_hrep(f.rays, f.rank);
    h.ineqs.clear();
    for (const auto& bf : boundary_facets(f)) h.ineqs.push_back(bf.normal);
    for (const auto& q : escapes(h)) {
      IneqSystem s = p;
      s.rows.push_back(q);
      if (feasible(s)) return false;
    }
    return true;
  }
  std::vector<std::vector<Inequality>> esc;
  for (const auto& c : f.cones) esc.push_back(escapes(cone_hrep(f.cone_rays(c), f.rank)));
  IneqSystem s = p;
  return !dfs_outside(s, esc, 0);
}

IneqSystem hrep_system(const ConeHrep& h, std::size_t dim, const IntMat* pull = nullptr) {
  IneqSystem s(dim);
  auto pulled = [&](const IntVec& c) {
    if (!pull) return to_rat(c);
    RatVec r(dim);
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t i = 0; i < c.size(); ++i) r[j] += c[i] * (*pull)(i, j);
    return r;
  };
  for (const auto& c : h.ineqs) s.geq(pulled(c), 0);
  for (const auto& a : h.eqs) s.eq(pulled(a), 0);
  return s;
}

}  // namespace

// ------------------------------------------------------------------ Fan

Fan::Fan(std::size_t rank_, std::vector<IntVec> rays_, std::vector<Cone> cones_) : rank(rank_) {
  for (const auto& u : rays_)
    if (u.size() != rank) throw Error("ray " + to_string(u) + " has wrong length");
  std::vector<std::size_t> order(rays_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lex_less(rays_[a], rays_[b]); });
  std::vector<std::size_t> where(rays_.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    where[order[i]] = i;
    rays.push_back(rays_[order[i]]);
  }
  for (auto& c : cones_) {
    for (auto& i : c) {
      if (i >= rays_.size()) throw Error("cone index " + std::to_string(i) + " out of range");
      i = where[i];
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  std::sort(cones_.begin(), cones_.end());
  cones_.erase(std::unique(cones_.begin(), cones_.end()), cones_.end());
  if (cones_.size() > 1 && cones_.front().empty()) cones_.erase(cones_.begin());
  if (cones_.empty()) cones_.push_back({});
  cones = std::move(cones_);
}

std::size_t Fan::ray_index(const IntVec& u) const {
  auto it = std::lower_bound(rays.begin(), rays.end(), u, lex_less);
  if (it != rays.end() && *it == u) return static_cast<std::size_t>(it - rays.begin());
  return npos;
}

std::vector<IntVec> Fan::cone_rays(const Cone& c) const {
  std::vector<IntVec> out;
  for (auto i : c) out.push_back(rays[i]);
  return out;
}

std::size_t Fan::cone_dim(const Cone& c) const { return rank_of_vecs(cone_rays(c), rank); }

std::string Defect::to_string() const {
  std::string s = kind;
  if (cone_a && cone_b)
    s += " (cones " + std::to_string(*cone_a) + " and " + std::to_string(*cone_b) + ")";
  else if (cone_a)
    s += " (cone " + std::to_string(*cone_a) + ")";
  if (ray) s += " (ray " + std::to_string(*ray) + ")";
  return s;
}

// ------------------------------------------------------------- validate

std::vector<Defect> validate(const Fan& f) {
  std::vector<Defect> out;
  for (std::size_t i = 0; i < f.nrays(); ++i) {
    if (is_zero(f.rays[i])) {
      out.push_back({"zero ray", {}, {}, i});
      continue;
    }
    if (gcd_of(f.rays[i]) != 1) out.push_back({"ray not primitive", {}, {}, i});
    if (i > 0 && f.rays[i] == f.rays[i - 1]) out.push_back({"duplicate ray", {}, {}, i});
  }
  if (!out.empty()) return out;

  std::vector<bool> convex(f.cones.size(), true);
  for (std::size_t c = 0; c < f.cones.size(); ++c) {
    auto g = f.cone_rays(f.cones[c]);
    std::vector<RatVec> gr;
    for (const auto& u : g) gr.push_back(to_rat(u));
    if (contains_line(gr)) {
      convex[c] = false;
      out.push_back({"not strongly convex", c, {}, {}});
      continue;
    }
    auto ext = extreme_rays(g);
    std::vector<bool> is_ext(g.size(), false);
    for (auto j : ext) is_ext[j] = true;
    for (std::size_t j = 0; j < g.size(); ++j)
      if (!is_ext[j]) out.push_back({"ray not extremal in cone", c, {}, f.cones[c][j]});
  }
  for (std::size_t a = 0; a < f.cones.size(); ++a)
    for (std::size_t b = a + 1; b < f.cones.size(); ++b) {
      if (!convex[a] || !convex[b]) continue;
      const Cone &s = f.cones[a], &t = f.cones[b];
      bool sub = is_subset(s, t) || is_subset(t, s);
      bool ok = meets_in_common_face(f, s, t);
      if (sub && ok)
        out.push_back({"cone is a face of another", a, b, {}});
      else if (!ok)
        out.push_back({"intersection not a face", a, b, {}});
    }
  std::vector<bool> used(f.nrays(), false);
  for (const auto& c : f.cones)
    for (auto i : c) used[i] = true;
  for (std::size_t i = 0; i < f.nrays(); ++i)
    if (!used[i]) out.push_back({"ray unused", {}, {}, i});
  return out;
}

void require_valid(const Fan& f) {
  auto d = validate(f);
  if (!d.empty()) throw Error("invalid fan: " + d.front().to_string());
}

// ------------------------------------------------------------ facets

std::vector<ConeFacet> cone_facets(const std::vector<IntVec>& gens) {
  std::vector<ConeFacet> out;
  if (gens.empty()) return out;
  const std::size_t rank = gens[0].size();
  const std::size_t d = rank_of_vecs(gens, rank);
  if (d == 0) return out;
  auto ann = integer_kernel(rows_of(gens, rank));
  std::set<Cone> seen;
  for_each_combination(gens.size(), d - 1, [&](const std::vector<std::size_t>& sub) {
    std::vector<IntVec> rows;
    for (auto i : sub) rows.push_back(gens[i]);
    if (rank_of_vecs(rows, rank) != d - 1) return;
    for (const auto& a : ann) rows.push_back(a);
    auto ker = rows.empty() ? std::vector<IntVec>{} : integer_kernel(rows_of(rows, rank));
    IntVec c;
    if (rows.empty()) {
      c = gens[0];  // rank-1 ambient, d = 1: the span itself
      for (const auto& g : gens)
        if (!is_zero(g)) c = primitive(g);
    } else {
      if (ker.size() != 1) return;
      c = ker[0];
    }
    bool pos = false, neg = false;
    Cone zero;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      int s = sgn(dot(c, gens[i]));
      if (s > 0) pos = true;
      if (s < 0) neg = true;
      if (s == 0) zero.push_back(i);
    }
    if (pos && neg) return;
    if (neg)
      for (auto& x : c) x = -x;
    if (seen.insert(zero).second) out.push_back({zero, c});
  });
  std::sort(out.begin(), out.end(), [](const ConeFacet& a, const ConeFacet& b) { return a.gens < b.gens; });
  return out;
}

ConeHrep cone_hrep(const std::vector<IntVec>& gens, std::size_t rank) {
  ConeHrep h;
  bool nonzero = false;
  for (const auto& g : gens) nonzero = nonzero || !is_zero(g);
  if (!nonzero) {
    for (std::size_t i = 0; i < rank; ++i) {
      IntVec e(rank);
      e[i] = 1;
      h.eqs.push_back(e);
    }
    return h;
  }
  for (const auto& fc : cone_facets(gens)) h.ineqs.push_back(fc.normal);
  h.eqs = integer_kernel(rows_of(gens, rank));
  return h;
}

std::vector<ConeFacet> boundary_facets(const Fan& f) {
  std::map<Cone, std::pair<int, IntVec>> count;
  for (const auto& c : f.cones)
    for (auto& fc : global_facets(f, c)) {
      auto& e = count[fc.gens];
      if (e.first++ == 0) e.second = fc.normal;
    }
  std::vector<ConeFacet> out;
  for (auto& [g, e] : count)
    if (e.first == 1) out.push_back({g, e.second});
  return out;
}

// -------------------------------------------------------- properties

bool is_simplicial(const Fan& f) {
  for (const auto& c : f.cones)
    if (c.size() != f.cone_dim(c)) return false;
  return true;
}

bool is_support_convex(const Fan& f) {
  const std::size_t k = rank_of_vecs(f.rays, f.rank);
  if (k == 0) return true;
  for (const auto& c : f.cones)
    if (f.cone_dim(c) != k) return false;
  for (const auto& bf : boundary_facets(f))
    for (const auto& u : f.rays)
      if (dot(bf.normal, u) < 0) return false;
  return true;
}

bool is_complete(const Fan& f) {
  if (f.rank == 0) return true;
  for (const auto& c : f.cones)
    if (f.cone_dim(c) != f.rank) return false;
  std::map<Cone, int> count;
  for (const auto& c : f.cones)
    for (const auto& fc : global_facets(f, c)) ++count[fc.gens];
  for (const auto& [g, n] : count)
    if (n != 2) return false;
  return is_support_convex(f);
}

FanProperties properties(const Fan& f) {
  require_valid(f);
  FanProperties p;
  p.simplicial = is_simplicial(f);
  p.smooth = p.simplicial;
  if (p.smooth)
    for (const auto& c : f.cones) {
      if (c.empty()) continue;
      for (const auto& d : smith_invariants(rows_of(f.cone_rays(c), f.rank)))
        if (d != 1) p.smooth = false;
    }
  p.complete = is_complete(f);
  p.support_convex = is_support_convex(f);
  Int index = 1;
  bool ok = true;
  for (const auto& c : f.cones) {
    auto m = cone_covector(f.cone_rays(c), RatVec(c.size(), Rat(1)), f.rank);
    if (!m) {
      ok = false;
      break;
    }
    Int l = lcm_of_denominators(*m);
    mpz_lcm(index.get_mpz_t(), index.get_mpz_t(), l.get_mpz_t());
  }
  if (ok) p.q_gorenstein_index = index;
  return p;
}

std::optional<RatVec> cone_covector(const std::vector<IntVec>& gens, const RatVec& values, std::size_t rank) {
  if (gens.size() != values.size()) throw Error("cone_covector: size mismatch");
  RatVec m(rank);
  if (gens.empty()) return m;
  SmithForm s = smith_normal_form(rows_of(gens, rank));
  // R m = v with R = U^-1 S V^-1; put m = V y, then S y = U v
  RatVec uv(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < gens.size(); ++j) uv[i] += s.U(i, j) * values[j];
  RatVec y(rank);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (i < s.rank)
      y[i] = uv[i] / Rat(s.S(i, i));
    else if (uv[i] != 0)
      return std::nullopt;
  }
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < s.rank; ++j) m[i] += s.V(i, j) * y[j];
  return m;
}

// -------------------------------------------------------- torus factor

TorusSplit torus_factor(const Fan& f) {
  TorusSplit t;
  const std::size_t k = rank_of_vecs(f.rays, f.rank);
  t.r = f.rank - k;
  if (t.r == 0) {
    t.reduced = f;
    t.change_of_basis = IntMat::identity(f.rank);
    t.ray_map.resize(f.nrays());
    std::iota(t.ray_map.begin(), t.ray_map.end(), 0);
    return t;
  }
  IntMat P = IntMat::identity(f.rank);
  if (!f.rays.empty()) P = smith_normal_form(rows_of(f.rays, f.rank)).V.transpose();
  t.change_of_basis = P;
  std::vector<IntVec> red;
  for (const auto& u : f.rays) {
    IntVec pu = P * u;
    red.emplace_back(pu.begin(), pu.begin() + static_cast<std::ptrdiff_t>(k));
  }
  t.reduced = Fan(k, red, f.cones);
  for (const auto& r : red) t.ray_map.push_back(t.reduced.ray_index(r));
  return t;
}

// --------------------------------------------------------- subdivisions

std::size_t locate(const Fan& f, const IntVec& v) {
  for (std::size_t c = 0; c < f.cones.size(); ++c)
    if (cone_contains(f.cone_rays(f.cones[c]), v)) return c;
  return Fan::npos;
}

bool in_support(const Fan& f, const IntVec& v) { return locate(f, v) != Fan::npos; }

Subdivision star_subdivide(const Fan& f, const IntVec& v) {
  if (v.size() != f.rank) throw Error("star_subdivide: wrong length");
  if (is_zero(v) || gcd_of(v) != 1) throw Error("star_subdivide: " + to_string(v) + " is not primitive");
  if (f.ray_index(v) != Fan::npos) throw Error("star_subdivide: " + to_string(v) + " is already a ray");
  std::vector<IntVec> rays = f.rays;
  rays.push_back(v);
  const std::size_t vi = f.nrays();
  std::vector<Cone> cones;
  bool hit = false;
  for (const auto& c : f.cones) {
    if (!cone_contains(f.cone_rays(c), v)) {
      cones.push_back(c);
      continue;
    }
    hit = true;
    for (const auto& fc : global_facets(f, c)) {
      if (cone_contains(f.cone_rays(fc.gens), v)) continue;
      Cone n = fc.gens;
      n.push_back(vi);
      cones.push_back(n);
    }
  }
  if (!hit) throw Error("star_subdivide: " + to_string(v) + " lies outside the support");
  Subdivision s;
  s.fan = Fan(f.rank, rays, cones);
  s.map = {IntMat::identity(f.rank), s.fan, f};
  return s;
}

namespace {

std::vector<Cone> pull(const Fan& f, const Cone& c) {
  if (c.size() == f.cone_dim(c)) return {c};
  const std::size_t v = c.front();
  std::vector<Cone> out;
  for (const auto& fc : global_facets(f, c)) {
    if (std::binary_search(fc.gens.begin(), fc.gens.end(), v)) continue;
    for (auto t : pull(f, fc.gens)) {
      t.insert(t.begin(), v);
      out.push_back(t);
    }
  }
  return out;
}

}  // namespace

Subdivision q_factorialize(const Fan& f) {
  std::vector<Cone> cones;
  for (const auto& c : f.cones)
    for (auto& t : pull(f, c)) cones.push_back(t);
  Subdivision s;
  s.fan = Fan(f.rank, f.rays, cones);
  s.map = {IntMat::identity(f.rank), s.fan, f};
  return s;
}

// --------------------------------------------------------------- maps

MapCheck check_map(const ToricMap& m) {
  const Fan &src = m.source, &tgt = m.target;
  if (m.matrix.rows() != tgt.rank || m.matrix.cols() != src.rank) throw Error("check_map: matrix dimensions do not match ranks");
  MapCheck r;
  r.well_defined = true;
  for (const auto& c : src.cones) {
    std::vector<IntVec> img;
    for (auto i : c) img.push_back(m.matrix * src.rays[i]);
    bool found = false;
    for (const auto& t : tgt.cones) {
      auto tr = tgt.cone_rays(t);
      bool all = true;
      for (const auto& x : img)
        if (!cone_contains(tr, x)) {
          all = false;
          break;
        }
      if (all) {
        found = true;
        break;
      }
    }
    if (!found) {
      r.well_defined = false;
      break;
    }
  }
  // |src| maps into |tgt|
  bool forward = r.well_defined;
  if (!forward) {
    forward = true;
    for (const auto& c : src.cones) {
      std::vector<IntVec> img;
      for (auto i : c) img.push_back(m.matrix * src.rays[i]);
      if (!cone_in_support(hrep_system(cone_hrep(img, tgt.rank), tgt.rank), tgt)) {
        forward = false;
        break;
      }
    }
  }
  // preimage of every target cone lies in |src|
  bool backward = true;
  if (forward)
    for (const auto& t : tgt.cones) {
      IneqSystem p = hrep_system(cone_hrep(tgt.cone_rays(t), tgt.rank), src.rank, &m.matrix);
      if (!cone_in_support(p, src)) {
        backward = false;
        break;
      }
    }
  r.proper = forward && backward;
  r.birational = r.well_defined && r.proper && m.matrix.rows() == m.matrix.cols() &&
                 abs(determinant(m.matrix)) == 1;
  return r;
}

SimplicialComplex incidence_complex(const Fan& f) {
  if (!is_simplicial(f)) throw Error("incidence_complex: fan is not simplicial");
  return {f.nrays(), f.cones};
}

// ------------------------------------------------------- standard fans

namespace fans {

namespace {
IntVec unit(std::size_t n, std::size_t i, long s = 1) {
  IntVec e(n);
  e[i] = s;
  return e;
}
}  // namespace

Fan projective_space(std::size_t n) {
  std::vector<IntVec> rays;
  for (std::size_t i = 0; i < n; ++i) rays.push_back(unit(n, i));
  rays.push_back(IntVec(n, Int(-1)));
  std::vector<Cone> cones;
  for_each_combination(n + 1, n, [&](const std::vector<std::size_t>& s) { cones.push_back(s); });
  return Fan(n, rays, cones);
}

Fan product(const Fan& a, const Fan& b) {
  const std::size_t n = a.rank + b.rank;
  std::vector<IntVec> rays;
  for (const auto& u : a.rays) {
    IntVec v(n);
    std::copy(u.begin(), u.end(), v.begin());
    rays.push_back(v);
  }
  for (const auto& u : b.rays) {
    IntVec v(n);
    std::copy(u.begin(), u.end(), v.begin() + static_cast<std::ptrdiff_t>(a.rank));
    rays.push_back(v);
  }
  std::vector<Cone> cones;
  for (const auto& s : a.cones)
    for (const auto& t : b.cones) {
      Cone c = s;
      for (auto j : t) c.push_back(a.nrays() + j);
      cones.push_back(c);
    }
  return Fan(n, rays, cones);
}

Fan p112() {
  return Fan(2, {{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(-1), Int(-2)}}, {{0, 1}, {1, 2}, {0, 2}});
}

Fan hirzebruch(long a) {
  return Fan(2, {{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(-1), Int(a)}, {Int(0), Int(-1)}},
             {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
}

Fan cube() {
  std::vector<IntVec> rays;
  for (int x : {-1, 1})
    for (int y : {-1, 1})
      for (int z : {-1, 1}) rays.push_back({Int(x), Int(y), Int(z)});
  std::vector<Cone> cones;
  for (std::size_t axis = 0; axis < 3; ++axis)
    for (int s : {-1, 1}) {
      Cone c;
      for (std::size_t i = 0; i < rays.size(); ++i)
        if (rays[i][axis] == s) c.push_back(i);
      cones.push_back(c);
    }
  return Fan(3, rays, cones);
}

Fan flip_side_a(const IntVec& u4) {
  return Fan(3, {unit(3, 0), unit(3, 1), unit(3, 2), u4}, {{0, 1, 2}, {0, 1, 3}});
}

Fan flip_side_b(const IntVec& u4) {
  return Fan(3, {unit(3, 0), unit(3, 1), unit(3, 2), u4}, {{0, 2, 3}, {1, 2, 3}});
}

}  // namespace fans

}  // namespace kv
