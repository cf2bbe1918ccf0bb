#include "kv/cohomology.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace kv {

std::string Field::name() const { return p == 0 ? "Q" : "F" + std::to_string(p); }

Field parse_field(const std::string& s) {
  std::string t;
  for (char c : s) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "q") return {0};
  if (t.size() >= 2 && t[0] == 'f' && std::all_of(t.begin() + 1, t.end(), ::isdigit)) {
    unsigned long p = std::stoul(t.substr(1));
    bool prime = p >= 2;
    for (unsigned long k = 2; k * k <= p && prime; ++k)
      if (p % k == 0) prime = false;
    if (prime && p < (1ul << 31)) return {static_cast<std::uint32_t>(p)};
  }
  throw Error("unknown field '" + s + "' (expected q or f<prime>)");
}

namespace {

Cone mask_to_cone(std::uint32_t mask, std::size_t n) {
  Cone c;
  for (std::size_t i = 0; i < n; ++i)
    if (mask >> i & 1u) c.push_back(i);
  return c;
}

std::size_t field_rank(const std::vector<Int>& inv, Field f) {
  if (f.p == 0) return inv.size();
  std::size_t r = 0;
  for (const auto& d : inv)
    if (mpz_divisible_ui_p(d.get_mpz_t(), f.p) == 0) ++r;
  return r;
}

void require_chamber_size(const Fan& x) {
  if (x.nrays() > kMaxChamberRays)
    throw Error("chambers: " + std::to_string(x.nrays()) + " rays exceeds the limit of " +
                std::to_string(kMaxChamberRays));
}

IneqSystem pattern_system(const Fan& x, const Divisor& d, std::uint32_t mask) {
  IneqSystem s(x.rank);
  for (std::size_t i = 0; i < x.nrays(); ++i) {
    if (mask >> i & 1u)
      s.lt(to_rat(x.rays[i]), -d[i]);
    else
      s.geq(to_rat(x.rays[i]), -d[i]);
  }
  return s;
}

SimplicialComplex induced(const SimplicialComplex& inc, const Cone& neg) {
  std::set<Cone> faces;
  for (const auto& c : inc.facets) {
    Cone s;
    std::set_intersection(c.begin(), c.end(), neg.begin(), neg.end(), std::back_inserter(s));
    if (!s.empty()) faces.insert(s);
  }
  SimplicialComplex k{inc.nverts, {}};
  for (const auto& s : faces) {
    bool maximal = true;
    for (const auto& t : faces)
      if (t.size() > s.size() && std::includes(t.begin(), t.end(), s.begin(), s.end())) maximal = false;
    if (maximal) k.facets.push_back(s);
  }
  return k;
}

bool any_nonzero(const std::vector<std::size_t>& h, std::size_t from) {
  for (std::size_t i = from; i < h.size(); ++i)
    if (h[i]) return true;
  return false;
}

std::vector<std::size_t> padded(std::vector<std::size_t> h, std::size_t len) {
  if (h.size() > len) throw Error("cohomology: homology in degree above rank - 1");
  h.resize(len, 0);
  return h;
}

// One sign pattern for coh_dims: nothing if its homology vanishes over
// every requested field or its region has no lattice point.
struct Hit {
  std::uint32_t mask = 0;
  ChamberReport chamber;                       // homology left empty
  std::vector<std::vector<std::size_t>> per_field;
};

std::optional<Hit> contribution(const Fan& x, const Divisor& d, std::uint32_t mask, const SimplicialComplex& inc,
                                const std::vector<Field>& fs) {
  Cone neg = mask_to_cone(mask, x.nrays());
  const ChainData cd = chain_data(induced(inc, neg));
  Hit hit;
  hit.mask = mask;
  bool any = false;
  for (Field f : fs) {
    hit.per_field.push_back(padded(cd.homology(f), x.rank + 1));
    any = any || any_nonzero(hit.per_field.back(), 0);
  }
  if (!any) return std::nullopt;

  ChamberReport& r = hit.chamber;
  r.neg = std::move(neg);
  r.region = pattern_system(x, d, mask);
  if (!feasible(r.region)) return std::nullopt;
  r.bounded = is_bounded(r.region);
  if (!r.bounded) {
    if (find_lattice_point(r.region))
      throw Error("coh_dims: unbounded chamber with nonzero homology (internal consistency)");
    return std::nullopt;
  }
  r.lattice_count = Int(static_cast<unsigned long>(count_lattice_points(r.region)));
  r.has_lattice_point = *r.lattice_count > 0;
  if (!r.has_lattice_point) return std::nullopt;
  return hit;
}

void check_complete(const Fan& x, const Divisor& d) {
  if (!is_simplicial(x)) throw Error("coh_dims: fan is not simplicial");
  if (!is_complete(x)) throw Error("coh_dims: fan is not complete (use vanishing_higher)");
  if (d.size() != x.nrays()) throw Error("coh_dims: divisor length differs from ray count");
  require_chamber_size(x);
}

std::vector<CohomologyReport> assemble(const Fan& x, const std::vector<Field>& fs, std::vector<Hit> found) {
  std::sort(found.begin(), found.end(), [](const Hit& a, const Hit& b) { return a.mask < b.mask; });
  std::vector<CohomologyReport> reps(fs.size());
  for (std::size_t k = 0; k < fs.size(); ++k) {
    reps[k].field = fs[k];
    reps[k].dims.assign(x.rank + 1, 0);
  }
  for (const auto& h : found)
    for (std::size_t k = 0; k < fs.size(); ++k) {
      if (!any_nonzero(h.per_field[k], 0)) continue;
      for (std::size_t p = 0; p <= x.rank; ++p)
        reps[k].dims[p] += *h.chamber.lattice_count * Int(static_cast<unsigned long>(h.per_field[k][p]));
      ChamberReport c = h.chamber;
      c.homology = h.per_field[k];
      reps[k].chambers.push_back(std::move(c));
    }
  return reps;
}

// Rank of a small integer matrix over F_p by elimination on residues.
std::size_t rank_mod_p(std::vector<std::vector<long>> a, long p) {
  std::size_t r = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (auto& row : a)
    for (auto& v : row) v = ((v % p) + p) % p;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t piv = r;
    while (piv < a.size() && a[piv][c] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[r]);
    long inv = 1, base = a[r][c];
    for (long e = p - 2; e > 0; e >>= 1, base = base * base % p)
      if (e & 1) inv = inv * base % p;
    for (auto& v : a[r]) v = v * inv % p;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (i != r && a[i][c] != 0) {
        long k = a[i][c];
        for (std::size_t j = 0; j < cols; ++j) a[i][j] = ((a[i][j] - k * a[r][j]) % p + p) % p;
      }
    ++r;
  }
  return r;
}

std::size_t oracle_rank(const std::vector<std::vector<long>>& a, std::size_t cols, Field f) {
  if (a.empty() || cols == 0) return 0;
  if (f.p) return rank_mod_p(a, f.p);
  RatMat m(a.size(), cols);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = a[i][j];
  return rank_of(m);
}

}  // namespace

SimplicialComplex neg_complex(const Fan& x, const Cone& neg) { return induced(incidence_complex(x), neg); }

ChainData chain_data(const SimplicialComplex& k) {
  // faces by dimension, index d+1
  std::vector<std::vector<Cone>> faces(1, std::vector<Cone>{Cone{}});
  std::vector<std::map<Cone, std::size_t>> index(1);
  index[0][Cone{}] = 0;
  for (const auto& f : k.facets) {
    const std::size_t n = f.size();
    for (std::uint32_t m = 1; m < (1u << n); ++m) {
      Cone s;
      for (std::size_t i = 0; i < n; ++i)
        if (m >> i & 1u) s.push_back(f[i]);
      if (faces.size() <= s.size()) {
        faces.resize(s.size() + 1);
        index.resize(s.size() + 1);
      }
      if (index[s.size()].emplace(s, index[s.size()].size()).second) faces[s.size()].push_back(s);
    }
  }
  ChainData out;
  for (const auto& fs : faces) out.chain_dims.push_back(fs.size());
  for (std::size_t d = 1; d < faces.size(); ++d) {
    // boundary from faces of size d to size d-1
    IntMat b(faces[d - 1].size(), faces[d].size());
    for (std::size_t j = 0; j < faces[d].size(); ++j) {
      const Cone& s = faces[d][j];
      for (std::size_t i = 0; i < s.size(); ++i) {
        Cone t;
        for (std::size_t l = 0; l < s.size(); ++l)
          if (l != i) t.push_back(s[l]);
        b(index[d - 1].at(t), j) = i % 2 ? -1 : 1;
      }
    }
    out.invariants.push_back(smith_invariants(b));
  }
  return out;
}

std::vector<std::size_t> ChainData::homology(Field f) const {
  std::vector<std::size_t> rk(chain_dims.size() + 1, 0);  // rk[i]: rank of the map out of chain index i
  for (std::size_t d = 0; d < invariants.size(); ++d) rk[d + 1] = field_rank(invariants[d], f);
  std::vector<std::size_t> h(chain_dims.size());
  for (std::size_t i = 0; i < chain_dims.size(); ++i) h[i] = chain_dims[i] - rk[i] - rk[i + 1];
  return h;
}

std::vector<std::size_t> reduced_homology(const SimplicialComplex& k, Field f) { return chain_data(k).homology(f); }

std::vector<ChamberReport> chambers(const Fan& x, const Divisor& d) {
  if (!is_simplicial(x)) throw Error("chambers: fan is not simplicial");
  require_chamber_size(x);
  std::vector<ChamberReport> out;
  const std::uint32_t total = 1u << x.nrays();
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    ChamberReport r;
    r.region = pattern_system(x, d, mask);
    if (!feasible(r.region)) continue;
    r.neg = mask_to_cone(mask, x.nrays());
    r.bounded = is_bounded(r.region);
    if (r.bounded) {
      r.lattice_count = Int(static_cast<unsigned long>(count_lattice_points(r.region)));
      r.has_lattice_point = *r.lattice_count > 0;
    } else {
      r.has_lattice_point = find_lattice_point(r.region).has_value();
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CohomologyReport> coh_dims(const Fan& x, const Divisor& d, const std::vector<Field>& fs) {
  check_complete(x, d);
  const SimplicialComplex inc = incidence_complex(x);
  const std::int64_t total = std::int64_t{1} << x.nrays();
  std::vector<Hit> found;
  std::string error;
#pragma omp parallel
  {
    std::vector<Hit> local;
#pragma omp for schedule(dynamic, 16) nowait
    for (std::int64_t m = 0; m < total; ++m) {
      try {
        if (auto h = contribution(x, d, static_cast<std::uint32_t>(m), inc, fs)) local.push_back(std::move(*h));
      } catch (const std::exception& e) {
#pragma omp critical(kv_coh_error)
        if (error.empty()) error = e.what();
      }
    }
#pragma omp critical(kv_coh_merge)
    for (auto& h : local) found.push_back(std::move(h));
  }
  if (!error.empty()) throw Error(error);
  return assemble(x, fs, std::move(found));
}

std::vector<CohomologyReport> coh_dims_serial(const Fan& x, const Divisor& d, const std::vector<Field>& fs) {
  check_complete(x, d);
  const SimplicialComplex inc = incidence_complex(x);
  std::vector<Hit> found;
  const std::uint32_t total = 1u << x.nrays();
  for (std::uint32_t mask = 0; mask < total; ++mask)
    if (auto h = contribution(x, d, mask, inc, fs)) found.push_back(std::move(*h));
  return assemble(x, fs, std::move(found));
}

CohomologyReport coh_dims(const Fan& x, const Divisor& d, Field f) { return coh_dims(x, d, std::vector<Field>{f})[0]; }

CohomologyReport coh_dims_serial(const Fan& x, const Divisor& d, Field f) {
  return coh_dims_serial(x, d, std::vector<Field>{f})[0];
}

Vanishing vanishing_higher(const Fan& x, const Divisor& d, Field f) {
  if (!is_simplicial(x)) throw Error("vanishing_higher: fan is not simplicial");
  if (!is_support_convex(x)) throw Error("vanishing_higher: support is not convex");
  if (d.size() != x.nrays()) throw Error("vanishing_higher: divisor length differs from ray count");
  require_chamber_size(x);
  const std::uint32_t total = 1u << x.nrays();
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    Cone neg = mask_to_cone(mask, x.nrays());
    auto h = padded(reduced_homology(neg_complex(x, neg), f), x.rank + 1);
    if (!any_nonzero(h, 1)) continue;
    IneqSystem s = pattern_system(x, d, mask);
    if (!feasible(s) || !find_lattice_point(s)) continue;
    std::size_t p = 1;
    while (h[p] == 0) ++p;
    return {false, neg, p};
  }
  return {};
}

std::vector<std::size_t> cech_graded(const Fan& x, const Divisor& d, const IntVec& m, Field f) {
  if (!is_simplicial(x)) throw Error("cech_graded: fan is not simplicial");
  const std::size_t n = x.cones.size();
  if (n > 16) throw Error("cech_graded: too many maximal cones for the oracle");
  std::vector<bool> ok_ray(x.nrays());
  for (std::size_t i = 0; i < x.nrays(); ++i) ok_ray[i] = Rat(dot(m, x.rays[i])) >= -d[i];

  // C^p basis: (p+1)-subsets of maximal cones whose common face admits m
  const std::size_t top = x.rank + 1;
  std::vector<std::vector<std::uint32_t>> basis(top + 1);
  std::vector<std::map<std::uint32_t, std::size_t>> pos(top + 1);
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    const auto k = static_cast<std::size_t>(__builtin_popcount(s));
    if (k > top + 1) continue;
    Cone meet;
    bool first = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(s >> i & 1u)) continue;
      if (first) {
        meet = x.cones[i];
        first = false;
      } else {
        Cone t;
        std::set_intersection(meet.begin(), meet.end(), x.cones[i].begin(), x.cones[i].end(), std::back_inserter(t));
        meet = std::move(t);
      }
    }
    if (std::all_of(meet.begin(), meet.end(), [&](std::size_t r) { return ok_ray[r]; })) {
      pos[k - 1][s] = basis[k - 1].size();
      basis[k - 1].push_back(s);
    }
  }
  // d^p : C^p -> C^{p+1}
  std::vector<std::size_t> rk(top + 1, 0);
  for (std::size_t p = 0; p < top; ++p) {
    std::vector<std::vector<long>> mat(basis[p + 1].size(), std::vector<long>(basis[p].size(), 0));
    for (std::size_t row = 0; row < basis[p + 1].size(); ++row) {
      const std::uint32_t s = basis[p + 1][row];
      long sign = 1;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(s >> i & 1u)) continue;
        auto it = pos[p].find(s & ~(1u << i));
        if (it != pos[p].end()) mat[row][it->second] = sign;
        sign = -sign;
      }
    }
    rk[p] = oracle_rank(mat, basis[p].size(), f);
  }
  std::vector<std::size_t> h(x.rank + 1);
  for (std::size_t p = 0; p <= x.rank; ++p) h[p] = basis[p].size() - rk[p] - (p ? rk[p - 1] : 0);
  return h;
}

}  // namespace kv
