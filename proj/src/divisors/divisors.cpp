#include "kv/divisors.hpp"

#include <algorithm>
#include <numeric>

namespace kv {

namespace {

void check_len(const Fan& x, const Divisor& d) {
  if (d.size() != x.nrays())
    throw Error("divisor has " + std::to_string(d.size()) + " coefficients, fan has " + std::to_string(x.nrays()) +
                " rays");
}

Rat pair(const RatVec& m, const IntVec& u) { return dot(m, u); }

}  // namespace

Divisor canonical(const Fan& x) { return Divisor(x.nrays(), Rat(-1)); }

Divisor principal(const Fan& x, const RatVec& m) {
  Divisor d;
  for (const auto& u : x.rays) d.push_back(pair(m, u));
  return d;
}

Divisor principal(const Fan& x, const IntVec& m) { return principal(x, to_rat(m)); }

Divisor prime(const Fan& x, const IntVec& u) {
  std::size_t i = x.ray_index(u);
  if (i == Fan::npos) throw Error("no ray " + to_string(u));
  Divisor d(x.nrays());
  d[i] = 1;
  return d;
}

bool is_integral(const Divisor& d) {
  for (const auto& a : d)
    if (a.get_den() != 1) return false;
  return true;
}

Divisor operator+(const Divisor& a, const Divisor& b) {
  if (a.size() != b.size()) throw Error("divisor length mismatch");
  Divisor r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Divisor operator-(const Divisor& a, const Divisor& b) {
  if (a.size() != b.size()) throw Error("divisor length mismatch");
  Divisor r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Divisor operator*(const Rat& s, const Divisor& a) {
  Divisor r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

// ------------------------------------------------------------- Cartier

std::variant<CartierData, NotQCartier> cartier_data(const Fan& x, const Divisor& d) {
  check_len(x, d);
  CartierData cd;
  for (std::size_t c = 0; c < x.cones.size(); ++c) {
    RatVec vals;
    for (auto i : x.cones[c]) vals.push_back(-d[i]);
    auto m = cone_covector(x.cone_rays(x.cones[c]), vals, x.rank);
    if (!m) return NotQCartier{c};
    cd.m.push_back(std::move(*m));
  }
  return cd;
}

CartierData require_cartier(const Fan& x, const Divisor& d) {
  auto r = cartier_data(x, d);
  if (auto* n = std::get_if<NotQCartier>(&r)) throw Error("divisor is not Q-Cartier on cone " + std::to_string(n->cone));
  return std::get<CartierData>(r);
}

bool is_q_cartier(const Fan& x, const Divisor& d) { return std::holds_alternative<CartierData>(cartier_data(x, d)); }

// ---------------------------------------------------------- positivity

bool is_nef(const Fan& x, const Divisor& d) { return positivity(x, d).nef; }

Positivity positivity(const Fan& x, const Divisor& d) {
  CartierData cd = require_cartier(x, d);
  Positivity p;
  p.nef = true;
  bool strict = true;
  for (std::size_t c = 0; c < x.cones.size(); ++c)
    for (std::size_t r = 0; r < x.nrays(); ++r) {
      Rat v = pair(cd.m[c], x.rays[r]);
      if (v < -d[r]) p.nef = false;
      bool in = std::binary_search(x.cones[c].begin(), x.cones[c].end(), r);
      if (!in && !(v > -d[r])) strict = false;
    }
  bool distinct = true;
  for (std::size_t a = 0; a < cd.m.size(); ++a)
    for (std::size_t b = a + 1; b < cd.m.size(); ++b)
      if (cd.m[a] == cd.m[b]) distinct = false;
  bool full = true;
  for (const auto& c : x.cones)
    if (x.cone_dim(c) != x.rank) full = false;
  p.ample = p.nef && strict && distinct && full;

  IneqSystem s(x.rank);
  for (std::size_t r = 0; r < x.nrays(); ++r) s.gt(to_rat(x.rays[r]), -d[r]);
  p.big = feasible(s).has_value();
  return p;
}

std::variant<SemiampleWitness, NotNef> semiample_witness(const Fan& x, const Divisor& d) {
  CartierData cd = require_cartier(x, d);
  for (std::size_t c = 0; c < x.cones.size(); ++c)
    for (std::size_t r = 0; r < x.nrays(); ++r)
      if (pair(cd.m[c], x.rays[r]) < -d[r]) return NotNef{c, r};
  SemiampleWitness w;
  w.multiple = 1;
  for (const auto& m : cd.m) {
    Int l = lcm_of_denominators(m);
    mpz_lcm(w.multiple.get_mpz_t(), w.multiple.get_mpz_t(), l.get_mpz_t());
  }
  w.certificate = true;
  const Rat l(w.multiple);
  for (const auto& m : cd.m) {
    IntVec g;
    for (const auto& x_i : m) {
      Rat s = l * x_i;
      if (s.get_den() != 1) w.certificate = false;
      g.push_back(s.get_num());
    }
    // lm_sigma in P_{lD}
    for (std::size_t r = 0; r < x.nrays(); ++r)
      if (Rat(dot(g, x.rays[r])) < -l * d[r]) w.certificate = false;
    w.generators.push_back(std::move(g));
  }
  return w;
}

// ----------------------------------------------------------------- klt

KltResult klt_check(const Fan& x, const Divisor& b) {
  check_len(x, b);
  for (std::size_t r = 0; r < x.nrays(); ++r) {
    if (b[r] < 0) return {false, "coefficient of ray " + to_string(x.rays[r]) + " is negative"};
    if (b[r] >= 1) return {false, "coefficient of ray " + to_string(x.rays[r]) + " is at least 1"};
  }
  auto cd = cartier_data(x, canonical(x) + b);
  if (auto* n = std::get_if<NotQCartier>(&cd))
    return {false, "K+B is not Q-Cartier on cone " + std::to_string(n->cone)};
  return {true, ""};
}

Rat discrepancy(const Fan& x, const Divisor& b, const IntVec& v) {
  check_len(x, b);
  std::size_t r = x.ray_index(v);
  if (r != Fan::npos) return -b[r];
  std::size_t c = locate(x, v);
  if (c == Fan::npos) throw Error("discrepancy: " + to_string(v) + " lies outside the support");
  // m with <m, u_rho> = 1 - b_rho on the cone: Cartier data of K + B
  CartierData cd = require_cartier(x, canonical(x) + b);
  return -1 + pair(cd.m[c], v);
}

// ----------------------------------------------------- birational maps

Divisor pullback(const ToricMap& f, const Divisor& d) {
  const Fan &src = f.source, &tgt = f.target;
  check_len(tgt, d);
  CartierData cd = require_cartier(tgt, d);
  Divisor out;
  for (const auto& u : src.rays) {
    IntVec img = f.matrix * u;
    std::optional<Rat> coeff;
    for (std::size_t c = 0; c < tgt.cones.size(); ++c) {
      if (!cone_contains(tgt.cone_rays(tgt.cones[c]), img)) continue;
      Rat a = -pair(cd.m[c], img);
      if (coeff && *coeff != a) throw Error("pullback: coefficient depends on the cone");
      coeff = a;
    }
    if (!coeff) throw Error("pullback: image of ray " + to_string(u) + " lies outside the target support");
    out.push_back(*coeff);
  }
  return out;
}

Divisor pushforward(const ToricMap& f, const Divisor& d) {
  const Fan &src = f.source, &tgt = f.target;
  check_len(src, d);
  std::vector<IntVec> images;
  for (const auto& u : src.rays) images.push_back(f.matrix * u);
  Divisor out;
  for (const auto& t : tgt.rays) {
    std::size_t hit = Fan::npos;
    for (std::size_t i = 0; i < images.size() && hit == Fan::npos; ++i)
      if (images[i] == t) hit = i;
    if (hit == Fan::npos) throw Error("pushforward: target ray " + to_string(t) + " is not the image of a source ray");
    out.push_back(d[hit]);
  }
  return out;
}

Divisor round(const Divisor& d, Rounding dir) {
  Divisor r;
  for (const auto& a : d) {
    Int q;
    if (dir == Rounding::Up)
      mpz_cdiv_q(q.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
    else
      mpz_fdiv_q(q.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
    r.emplace_back(q);
  }
  return r;
}

// ------------------------------------------------------------ sections

IneqSystem section_polytope(const Fan& x, const Divisor& d) {
  check_len(x, d);
  IneqSystem s(x.rank);
  for (std::size_t r = 0; r < x.nrays(); ++r) s.geq(to_rat(x.rays[r]), -d[r]);
  return s;
}

H0 h0_dim(const Fan& x, const Divisor& d) {
  IneqSystem s = section_polytope(x, d);
  H0 h;
  if (!find_lattice_point(s)) return h;
  if (!is_bounded(s)) {
    h.kind = H0::Kind::Infinite;
    return h;
  }
  h.kind = H0::Kind::Count;
  h.count = Int(static_cast<unsigned long>(count_lattice_points(s)));
  return h;
}

}  // namespace kv
