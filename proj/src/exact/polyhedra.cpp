// Inequality systems: Fourier-Motzkin projection with strictness tracking,
// witnesses by back-substitution, boundedness, and lattice enumeration.

#include <algorithm>
#include <functional>
#include <map>

#include "checked_int.hpp"
#include "kv/exact.hpp"

namespace kv {

IneqSystem& IneqSystem::geq(RatVec c, Rat k) {
  rows.push_back({std::move(c), std::move(k), false});
  return *this;
}
IneqSystem& IneqSystem::gt(RatVec c, Rat k) {
  rows.push_back({std::move(c), std::move(k), true});
  return *this;
}
IneqSystem& IneqSystem::leq(RatVec c, Rat k) {
  for (auto& x : c) x = -x;
  return geq(std::move(c), -k);
}
IneqSystem& IneqSystem::lt(RatVec c, Rat k) {
  for (auto& x : c) x = -x;
  return gt(std::move(c), -k);
}
IneqSystem& IneqSystem::eq(RatVec c, Rat k) {
  geq(c, k);
  return leq(std::move(c), std::move(k));
}
void IneqSystem::check() const {
  for (const auto& r : rows)
    if (r.covector.size() != dim) throw Error("inequality covector has wrong rank");
}

namespace {

using detail::I64;

template <class T>
struct Row {
  std::vector<T> c;
  T k;
  bool strict = false;
};

// Scale a rational row to integers (positive factor, so the sense is kept).
template <class T>
Row<T> integer_row(const Inequality& in) {
  Int l = lcm_of_denominators(in.covector);
  mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), in.constant.get_den_mpz_t());
  Row<T> r;
  r.c.reserve(in.covector.size());
  for (const auto& x : in.covector) {
    Rat s = x * l;
    r.c.push_back(detail::from_mpz<T>(s.get_num()));
  }
  Rat s = in.constant * l;
  r.k = detail::from_mpz<T>(s.get_num());
  r.strict = in.strict;
  return r;
}

template <class T>
T gcd_coeffs(const std::vector<T>& c) {
  T g = 0;
  for (const auto& x : c) g = detail::gcd_of2(g, x);
  return g;
}

// Normalize rows, drop trivial ones, keep only the tightest row per
// direction. Returns false if a trivial row is violated.
template <class T>
bool clean(std::vector<Row<T>>& rows) {
  struct Best {
    Row<T> row;
    T g;  // gcd of coefficients of row
  };
  std::map<std::vector<T>, Best> by_dir;
  for (auto& r : rows) {
    T gc = gcd_coeffs(r.c);
    if (gc == 0) {
      bool ok = r.strict ? (T(0) > r.k) : (T(0) >= r.k);
      if (!ok) return false;
      continue;
    }
    T g = detail::gcd_of2(gc, r.k);
    if (g != 1) {
      for (auto& x : r.c) x = x / g;
      r.k = r.k / g;
      gc = gc / g;
    }
    std::vector<T> dir(r.c.size());
    for (std::size_t i = 0; i < r.c.size(); ++i) dir[i] = r.c[i] / gc;
    auto it = by_dir.find(dir);
    if (it == by_dir.end()) {
      by_dir.emplace(std::move(dir), Best{r, gc});
      continue;
    }
    // compare r.k / gc against best.k / best.g (both denominators positive)
    const Best& b = it->second;
    T lhs = r.k * b.g, rhs = b.row.k * gc;
    if (lhs > rhs || (lhs == rhs && r.strict && !b.row.strict)) it->second = Best{r, gc};
  }
  rows.clear();
  for (auto& [dir, b] : by_dir) rows.push_back(std::move(b.row));
  return true;
}

// levels[j] holds rows involving variables < j only; levels[n] is the input.
template <class T>
std::optional<std::vector<std::vector<Row<T>>>> fm_levels(std::vector<Row<T>> rows, std::size_t n) {
  std::vector<std::vector<Row<T>>> levels(n + 1);
  if (!clean(rows)) return std::nullopt;
  levels[n] = rows;
  for (std::size_t j = n; j-- > 0;) {
    const auto& cur = levels[j + 1];
    std::vector<Row<T>> next, pos, neg;
    for (const auto& r : cur) {
      if (r.c[j] > 0)
        pos.push_back(r);
      else if (r.c[j] < 0)
        neg.push_back(r);
      else
        next.push_back(r);
    }
    for (const auto& p : pos)
      for (const auto& q : neg) {
        T a = -q.c[j], b = p.c[j];
        Row<T> r;
        r.c.resize(n);
        for (std::size_t i = 0; i < n; ++i) r.c[i] = a * p.c[i] + b * q.c[i];
        r.c[j] = 0;
        r.k = a * p.k + b * q.k;
        r.strict = p.strict || q.strict;
        next.push_back(std::move(r));
      }
    if (!clean(next)) return std::nullopt;
    levels[j] = std::move(next);
  }
  return levels;
}

struct Interval {
  std::optional<Rat> lo, hi;
  bool lo_strict = false, hi_strict = false;

  void add_lower(const Rat& v, bool s) {
    if (!lo || v > *lo || (v == *lo && s)) {
      lo = v;
      lo_strict = s;
    }
  }
  void add_upper(const Rat& v, bool s) {
    if (!hi || v < *hi || (v == *hi && s)) {
      hi = v;
      hi_strict = s;
    }
  }
  bool allows(const Rat& v) const {
    if (lo && (v < *lo || (v == *lo && lo_strict))) return false;
    if (hi && (v > *hi || (v == *hi && hi_strict))) return false;
    return true;
  }
  // Deterministic choice: 0, else the integer of least magnitude, else the
  // midpoint (or a unit step away from the single finite bound).
  Rat choose() const {
    if (allows(Rat(0))) return 0;
    if (lo && hi) {
      Int a, b;
      mpz_cdiv_q(a.get_mpz_t(), lo->get_num_mpz_t(), lo->get_den_mpz_t());
      mpz_fdiv_q(b.get_mpz_t(), hi->get_num_mpz_t(), hi->get_den_mpz_t());
      // lo > 0 or hi < 0 here since 0 is excluded
      if (*lo >= 0) {
        for (Int z = a; z <= b; ++z)
          if (allows(Rat(z))) return Rat(z);
      } else {
        for (Int z = b; z >= a; --z)
          if (allows(Rat(z))) return Rat(z);
      }
      Rat mid = (*lo + *hi) / 2;
      return mid;
    }
    if (lo) {
      Int a;
      mpz_cdiv_q(a.get_mpz_t(), lo->get_num_mpz_t(), lo->get_den_mpz_t());
      Rat z(a);
      if (!allows(z)) z += 1;
      return z;
    }
    Int b;
    mpz_fdiv_q(b.get_mpz_t(), hi->get_num_mpz_t(), hi->get_den_mpz_t());
    Rat z(b);
    if (!allows(z)) z -= 1;
    return z;
  }
};

template <class T>
std::optional<RatVec> fm_witness(const IneqSystem& sys) {
  std::vector<Row<T>> rows;
  for (const auto& r : sys.rows) rows.push_back(integer_row<T>(r));
  const std::size_t n = sys.dim;
  auto levels = fm_levels(std::move(rows), n);
  if (!levels) return std::nullopt;
  RatVec x(n);
  for (std::size_t j = 0; j < n; ++j) {
    Interval iv;
    for (const auto& r : (*levels)[j + 1]) {
      if (r.c[j] == 0) continue;
      Rat rest(detail::to_mpz(r.k));
      for (std::size_t i = 0; i < j; ++i)
        if (r.c[i] != 0) rest -= Rat(detail::to_mpz(r.c[i])) * x[i];
      Rat cj(detail::to_mpz(r.c[j]));
      Rat v = rest / cj;
      if (cj > 0)
        iv.add_lower(v, r.strict);
      else
        iv.add_upper(v, r.strict);
    }
    x[j] = iv.choose();
  }
  return x;
}

// Integer rows with strict rows tightened; all rows weak afterwards.
template <class T>
std::vector<Row<T>> tightened_rows(const IneqSystem& sys) {
  std::vector<Row<T>> out;
  for (const auto& in : sys.rows) {
    Row<T> r = integer_row<T>(in);
    T g = gcd_coeffs(r.c);
    if (g == 0) {
      out.push_back(r);
      continue;
    }
    for (auto& x : r.c) x = x / g;
    r.k = r.strict ? detail::floor_div(r.k, g) + T(1) : detail::ceil_div(r.k, g);
    r.strict = false;
    out.push_back(std::move(r));
  }
  return out;
}

template <class T>
T floor_q(const T& a, const T& b) {  // floor(a/b), b != 0
  return b > 0 ? detail::floor_div(a, b) : detail::floor_div(-a, -b);
}
template <class T>
T ceil_q(const T& a, const T& b) {
  return b > 0 ? detail::ceil_div(a, b) : detail::ceil_div(-a, -b);
}

// Enumerate integer points in lexicographic order; visit returns false to stop.
template <class T>
void enumerate(std::vector<Row<T>> rows, std::size_t n, const std::function<bool(const IntVec&)>& visit) {
  auto levels = fm_levels(std::move(rows), n);
  if (!levels) return;
  std::vector<T> x(n);
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (stop) return;
    if (j == n) {
      IntVec p(n);
      for (std::size_t i = 0; i < n; ++i) p[i] = detail::to_mpz(x[i]);
      if (!visit(p)) stop = true;
      return;
    }
    std::optional<T> lo, hi;
    for (const auto& r : (*levels)[j + 1]) {
      if (r.c[j] == 0) continue;
      T rest = r.k;
      for (std::size_t i = 0; i < j; ++i)
        if (r.c[i] != 0) rest -= r.c[i] * x[i];
      if (r.c[j] > 0) {
        T v = ceil_q(rest, r.c[j]);
        if (!lo || v > *lo) lo = v;
      } else {
        T v = floor_q(rest, r.c[j]);
        if (!hi || v < *hi) hi = v;
      }
    }
    if (!lo || !hi) throw Error("unbounded region");
    for (T v = *lo; v <= *hi && !stop; v += T(1)) {
      x[j] = v;
      rec(j + 1);
    }
  };
  rec(0);
}

template <class T>
void enumerate_system(const IneqSystem& sys, const std::function<bool(const IntVec&)>& visit) {
  enumerate<T>(tightened_rows<T>(sys), sys.dim, visit);
}

void enumerate_any(const IneqSystem& sys, const std::function<bool(const IntVec&)>& visit) {
  // The int64 pass may overflow part-way; collect first so the visitor sees
  // each point exactly once.
  std::vector<IntVec> pts;
  bool complete = true;
  try {
    enumerate_system<I64>(sys, [&](const IntVec& p) {
      pts.push_back(p);
      if (!visit(p)) {
        complete = false;
        return false;
      }
      return true;
    });
    return;
  } catch (const Overflow&) {
  }
  std::size_t skip = pts.size();
  if (!complete) return;
  enumerate_system<Int>(sys, [&](const IntVec& p) {
    if (skip > 0) {
      --skip;
      return true;
    }
    return visit(p);
  });
}

}  // namespace

std::optional<RatVec> feasible_fm(const IneqSystem& sys) {
  sys.check();
  try {
    return fm_witness<I64>(sys);
  } catch (const Overflow&) {
    return fm_witness<Int>(sys);
  }
}

std::optional<RatVec> feasible(const IneqSystem& sys) {
  sys.check();
  if (sys.dim <= 4) return feasible_fm(sys);
  return feasible_simplex(sys);
}

bool is_bounded(const IneqSystem& sys) {
  if (!feasible(sys)) throw Error("empty region");
  for (std::size_t i = 0; i < sys.dim; ++i)
    for (int s : {1, -1}) {
      IneqSystem rec(sys.dim);
      for (const auto& r : sys.rows) rec.geq(r.covector, 0);
      RatVec e(sys.dim);
      e[i] = s;
      rec.gt(e, 0);
      if (feasible(rec)) return false;
    }
  return true;
}

std::vector<IntVec> lattice_points(const IneqSystem& sys) {
  sys.check();
  std::vector<IntVec> out;
  if (!feasible(sys)) return out;
  if (!is_bounded(sys)) throw Error("unbounded region");
  enumerate_any(sys, [&](const IntVec& p) {
    out.push_back(p);
    return true;
  });
  return out;
}

std::size_t count_lattice_points(const IneqSystem& sys) {
  sys.check();
  if (!feasible(sys)) return 0;
  if (!is_bounded(sys)) throw Error("unbounded region");
  std::size_t n = 0;
  enumerate_any(sys, [&](const IntVec&) {
    ++n;
    return true;
  });
  return n;
}

namespace {

// All k-element subsets of {0..n-1} in lexicographic order.
void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  for (;;) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::optional<IntVec> find_lattice_point(const IneqSystem& sys) {
  sys.check();
  const std::size_t n = sys.dim;
  // integer weak rows
  std::vector<Row<Int>> rows = tightened_rows<Int>(sys);
  std::vector<Row<Int>> live;
  for (auto& r : rows) {
    if (is_zero(r.c)) {
      if (!(0 >= r.k)) return std::nullopt;
      continue;
    }
    live.push_back(std::move(r));
  }
  if (live.empty()) return IntVec(n, Int(0));

  // Split off the lineality space: x = V y with C V supported on the first
  // k columns.
  IntMat C(live.size(), n);
  for (std::size_t i = 0; i < live.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) C(i, j) = live[i].c[j];
  SmithForm sf = smith_normal_form(C);
  const std::size_t k = sf.rank;
  IntMat CV = C * sf.V;
  IneqSystem red(k);
  for (std::size_t i = 0; i < live.size(); ++i) {
    RatVec c(k);
    for (std::size_t j = 0; j < k; ++j) c[j] = CV(i, j);
    red.geq(std::move(c), Rat(live[i].k));
  }
  auto lift = [&](const IntVec& y) {
    IntVec full(n, Int(0));
    for (std::size_t j = 0; j < k; ++j) full[j] = y[j];
    return sf.V * full;
  };
  if (!feasible(red)) return std::nullopt;

  std::optional<IntVec> hit;
  auto first = [&](const IntVec& p) {
    hit = p;
    return false;
  };
  if (is_bounded(red)) {
    enumerate_any(red, first);
    if (hit) return lift(*hit);
    return std::nullopt;
  }

  // Pointed and unbounded: a lattice point exists iff one exists in
  // conv(vertices) + [0,1]-combinations of the integral extreme rays.
  const std::size_t m = red.rows.size();
  std::vector<RatVec> vertices;
  for_each_subset(m, k, [&](const std::vector<std::size_t>& sub) {
    RatMat A(k, k);
    RatVec b(k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) A(i, j) = red.rows[sub[i]].covector[j];
      b[i] = red.rows[sub[i]].constant;
    }
    auto s = solve_rational(A, b);
    if (s.kind != LinearSolution::Kind::Unique) return;
    for (const auto& r : red.rows)
      if (dot(r.covector, s.particular) < r.constant) return;
    vertices.push_back(s.particular);
  });
  std::vector<IntVec> rays;
  for_each_subset(m, k - 1, [&](const std::vector<std::size_t>& sub) {
    RatMat A(k - 1, k);
    for (std::size_t i = 0; i + 1 < k; ++i)
      for (std::size_t j = 0; j < k; ++j) A(i, j) = red.rows[sub[i]].covector[j];
    auto ker = kernel(A);
    if (ker.size() != 1) return;
    bool pos = true, negd = true;
    for (const auto& r : red.rows) {
      Rat v = dot(r.covector, ker[0]);
      if (v < 0) pos = false;
      if (v > 0) negd = false;
    }
    if (pos == negd) return;
    RatVec d = ker[0];
    if (negd)
      for (auto& x : d) x = -x;
    rays.push_back(primitive(d));
  });
  if (vertices.empty()) throw Error("find_lattice_point: pointed region without vertices");
  IneqSystem boxed = red;
  for (std::size_t j = 0; j < k; ++j) {
    Rat lo = vertices[0][j], hi = vertices[0][j];
    for (const auto& v : vertices) {
      if (v[j] < lo) lo = v[j];
      if (v[j] > hi) hi = v[j];
    }
    for (const auto& r : rays) {
      if (r[j] < 0) lo += r[j];
      if (r[j] > 0) hi += r[j];
    }
    RatVec e(k);
    e[j] = 1;
    boxed.geq(e, lo);
    boxed.leq(e, hi);
  }
  enumerate_any(boxed, first);
  if (hit) return lift(*hit);
  return std::nullopt;
}

}  // namespace kv
