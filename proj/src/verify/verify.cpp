#include "kv/verify.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace kv {

namespace {

using Rng = std::mt19937_64;
using namespace fans;

Rat rand_rat(Rng& rng, long lo, long hi, long max_den) {
  const long den = std::uniform_int_distribution<long>(1, max_den)(rng);
  const long num = std::uniform_int_distribution<long>(lo * den, hi * den)(rng);
  Rat r(num, den);
  r.canonicalize();
  return r;
}

IntVec rand_intvec(Rng& rng, std::size_t n, long bound) {
  std::uniform_int_distribution<long> u(-bound, bound);
  IntVec v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

std::string fmt(const Rat& q) { return to_string(q); }

bool all_in_unit(const Divisor& b) {
  return std::all_of(b.begin(), b.end(), [](const Rat& c) { return c >= 0 && c < 1; });
}

// ------------------------------------------------------------ fan seeds

struct Seed {
  std::string name;
  Fan fan;
  bool mutate = true;
};

std::vector<Seed> seeds(std::size_t rank) {
  std::vector<Seed> s;
  if (rank == 2) {
    s.push_back({"p2", projective_space(2)});
    s.push_back({"p1xp1", product(projective_space(1), projective_space(1))});
    s.push_back({"p112", p112()});
  } else {
    s.push_back({"p3", projective_space(3)});
    s.push_back({"p1xp2", product(projective_space(1), projective_space(2))});
    s.push_back({"p1xp1xp1", product(product(projective_space(1), projective_space(1)), projective_space(1))});
    s.push_back({"p112xp1", product(p112(), projective_space(1))});
    s.push_back({"cubeq", q_factorialize(cube()).fan});
    s.push_back({"cube", cube(), false});
  }
  return s;
}

std::optional<IntVec> support_point(const Fan& f, Rng& rng, long bound) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    IntVec v = rand_intvec(rng, f.rank, bound);
    if (is_zero(v) || gcd_of(v) != 1) continue;
    if (f.ray_index(v) != Fan::npos) continue;
    if (in_support(f, v)) return v;
  }
  return std::nullopt;
}

Fan mutate(const Fan& f, Rng& rng, std::size_t max_rays) {
  Fan x = f;
  const long bound = f.rank == 2 ? 3 : 2;
  const std::size_t room = max_rays > x.nrays() ? max_rays - x.nrays() : 0;
  const std::size_t k = std::uniform_int_distribution<std::size_t>(0, std::min<std::size_t>(room, 4))(rng);
  for (std::size_t i = 0; i < k; ++i) {
    auto v = support_point(x, rng, bound);
    if (!v) break;
    x = star_subdivide(x, *v).fan;
  }
  return x;
}

// ------------------------------------------------------------ ample draws

// A point of the open ample cone of a simplicial projective fan, then moved
// off the LP vertex by a random positive scale, noise and a rational div(m).
std::optional<Divisor> draw_ample(const Fan& x, Rng& rng) {
  if (!is_simplicial(x)) {
    const Rat t = rand_rat(rng, 0, 2, 3);
    if (t <= 0) return std::nullopt;
    RatVec m(x.rank);
    const bool integral = std::uniform_int_distribution<int>(0, 1)(rng) == 0;
    for (auto& c : m) c = rand_rat(rng, -1, 1, integral ? 1 : 2);
    Divisor a = (-t) * canonical(x) + principal(x, m);
    return a;
  }
  const auto ws = walls(x);
  IneqSystem sys(x.nrays());
  for (const auto& w : ws) sys.geq(curve_class(x, w).c, 1);
  auto a0 = feasible(sys);
  if (!a0) return std::nullopt;
  for (int attempt = 0; attempt < 20; ++attempt) {
    // small multiples keep K + A away from the nef cone often enough to
    // give the MMP something to do
    Rat s(std::uniform_int_distribution<long>(1, 8)(rng), 6);
    s.canonicalize();
    Divisor a = s * *a0;
    for (auto& c : a) c += rand_rat(rng, 0, 1, 4) / 4;
    RatVec m(x.rank);
    for (auto& c : m) c = rand_rat(rng, -2, 2, 3);
    a = a + principal(x, m);
    if (positivity(x, a).ample) return a;
  }
  return std::nullopt;
}

std::optional<Instance> draw_hyp2(const Fan& x, Rng& rng) {
  auto a = draw_ample(x, rng);
  if (!a) return std::nullopt;
  Instance inst;
  inst.x = x;
  inst.mode = 2;
  inst.d = round(canonical(x) + *a, Rounding::Up);
  inst.b = inst.d - canonical(x) - *a;
  if (!is_simplicial(x) && !is_q_cartier(x, inst.d)) return std::nullopt;
  if (!check_hypothesis(inst).ok) return std::nullopt;
  return inst;
}

// D_rho = ceil(<m,u>) - 1 makes B = D - K - div(m) land in [0,1); an
// integral div(m2) shift keeps D integral and is recorded in the witness.
std::optional<Instance> draw_hyp1(const Fan& x, Rng& rng) {
  const long den = std::uniform_int_distribution<long>(2, 5)(rng);
  IntVec mi = rand_intvec(rng, x.rank, 2 * den);
  RatVec m(x.rank);
  for (std::size_t i = 0; i < x.rank; ++i) {
    m[i] = Rat(mi[i], den);
    m[i].canonicalize();
  }
  const Divisor dm = principal(x, m);
  Instance inst;
  inst.x = x;
  inst.mode = 1;
  inst.d.resize(x.nrays());
  for (std::size_t i = 0; i < x.nrays(); ++i) {
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), dm[i].get_num_mpz_t(), dm[i].get_den_mpz_t());
    inst.d[i] = Rat(c - 1);
  }
  inst.b = inst.d - canonical(x) - dm;
  inst.witness.push_back({Rat(1, den), mi});
  IntVec m2 = rand_intvec(rng, x.rank, 1);
  if (!is_zero(m2)) {
    inst.d = inst.d + principal(x, m2);
    inst.witness.push_back({Rat(1), m2});
  }
  if (!check_hypothesis(inst).ok) return std::nullopt;
  return inst;
}

// ------------------------------------------------------------ evaluation

struct Eval {
  FieldDims dims;                                  // complete models
  std::vector<std::pair<Field, bool>> vanishing;
};

Eval evaluate(const Fan& x, const Divisor& d, const std::vector<Field>& fields) {
  Eval e;
  if (is_complete(x)) {
    for (auto& r : coh_dims(x, d, fields)) {
      bool zero = true;
      for (std::size_t p = 1; p < r.dims.size(); ++p) zero = zero && r.dims[p] == 0;
      e.vanishing.emplace_back(r.field, zero);
      e.dims.emplace_back(r.field, std::move(r.dims));
    }
  } else {
    for (Field f : fields) e.vanishing.emplace_back(f, vanishing_higher(x, d, f).vanishes);
  }
  return e;
}

std::string dims_str(const std::vector<Int>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
  return s + ")";
}

// Simplicial model of the instance: the identity small map when X is not
// simplicial, with D and B keeping their coefficients.
struct Model {
  Fan x;
  std::vector<std::string> failures, notes;
};

Model simplicial_model(const Instance& inst) {
  Model m{inst.x, {}, {}};
  if (is_simplicial(inst.x)) return m;
  const Subdivision s = q_factorialize(inst.x);
  m.x = s.fan;
  m.notes.push_back("q-factorialized: " + std::to_string(s.fan.cones.size()) + " simplicial cones");
  if (s.fan.rays != inst.x.rays) m.failures.push_back("q-factorialization changed the rays");
  const MapCheck mc = check_map(s.map);
  if (!mc.proper || !mc.birational) m.failures.push_back("q-factorialization map not proper birational");
  if (!validate(s.fan).empty()) m.failures.push_back("q-factorialization fails validate");
  if (is_q_cartier(inst.x, inst.d) && pullback(s.map, inst.d) != inst.d)
    m.failures.push_back("pullback of D differs from its strict transform");
  return m;
}

std::string end_name(MMPRun::End e) { return e == MMPRun::End::Nef ? "nef" : "mori-fibre-space"; }

void merge_into(Verdict& v, const Verdict& w, const std::string& prefix) {
  for (const auto& f : w.failures) v.failures.push_back(prefix + f);
  for (const auto& n : w.notes) v.notes.push_back(prefix + n);
}

Divisor by_rays(const Fan& x, const std::vector<std::pair<IntVec, Rat>>& cs) {
  Divisor d(x.nrays(), Rat(0));
  for (const auto& [u, c] : cs) {
    const std::size_t i = x.ray_index(u);
    if (i == Fan::npos) throw Error("curated instance: missing ray " + to_string(u));
    d[i] = c;
  }
  return d;
}

IntVec v2(long a, long b) { return {Int(a), Int(b)}; }
IntVec v3(long a, long b, long c) { return {Int(a), Int(b), Int(c)}; }

}  // namespace

std::vector<Field> default_fields() { return {Field{0}, Field{2}, Field{3}, Field{5}, Field{7}}; }

// ------------------------------------------------------------ hypotheses

HypothesisCheck check_hypothesis(const Instance& inst) {
  HypothesisCheck h;
  const Fan& x = inst.x;
  auto why = [&](std::string s) { h.reasons.push_back(std::move(s)); };
  if (inst.b.size() != x.nrays() || inst.d.size() != x.nrays()) {
    why("coefficient vectors do not match the ray count");
    return h;
  }
  if (!is_integral(inst.d)) why("D is not integral");
  if (!all_in_unit(inst.b)) why("B has a coefficient outside [0,1)");
  const KltResult klt = klt_check(x, inst.b);
  if (!klt.ok) why("(X,B) not klt: " + klt.reason);
  const Divisor a = inst.d - canonical(x) - inst.b;
  if (inst.mode == 2) {
    try {
      const Positivity p = positivity(x, a);
      if (!p.nef) why("D-(K+B) is not nef");
      if (!p.big) why("D-(K+B) is not big");
    } catch (const Error& e) {
      why(std::string("D-(K+B): ") + e.what());
    }
  } else if (inst.mode == 1) {
    Divisor sum(x.nrays(), Rat(0));
    for (const auto& w : inst.witness) {
      if (w.m.size() != x.rank) {
        why("witness covector has the wrong length");
        return h;
      }
      sum = sum + w.q * principal(x, w.m);
    }
    if (sum != a) why("witness does not realize D-(K+B)");
    try {
      if (!positivity(x, inst.b).big) why("B is not big");
    } catch (const Error& e) {
      why(std::string("B: ") + e.what());
    }
  } else {
    why("mode must be 1 or 2");
  }
  h.ok = h.reasons.empty();
  return h;
}

// ------------------------------------------------------------ corpus

Corpus gen_corpus(const CorpusParams& p) {
  if (p.rank != 2 && p.rank != 3) throw InputError("gen_corpus: rank must be 2 or 3");
  if (p.max_rays > 14) throw InputError("gen_corpus: max_rays must be at most 14");
  const auto base = seeds(p.rank);
  if (p.max_rays < base.front().fan.nrays()) throw InputError("gen_corpus: max_rays below the smallest seed");
  Rng rng(p.seed * 1000003ull + p.rank);
  Corpus c;
  constexpr int kBudget = 60;
  for (std::size_t i = 0; i < p.count; ++i) {
    const bool hyp1 = i % 4 == 3;
    bool done = false;
    for (int attempt = 0; attempt < kBudget && !done; ++attempt) {
      const Seed& s = base[std::uniform_int_distribution<std::size_t>(0, base.size() - 1)(rng)];
      if (s.fan.nrays() > p.max_rays) continue;
      const Fan x = s.mutate ? mutate(s.fan, rng, p.max_rays) : s.fan;
      auto inst = hyp1 ? draw_hyp1(x, rng) : draw_hyp2(x, rng);
      if (!inst) continue;
      std::ostringstream l;
      l << "r" << p.rank << "-s" << p.seed << "-" << (i < 10 ? "00" : i < 100 ? "0" : "") << i << "-hyp"
        << inst->mode << "-" << s.name << "-n" << x.nrays();
      inst->label = l.str();
      c.instances.push_back(std::move(*inst));
      done = true;
    }
    if (!done) c.notes.push_back("instance " + std::to_string(i) + ": rejection budget exhausted, skipped");
  }
  return c;
}

// ------------------------------------------------------------ arithmetic self-checks

std::vector<std::string> arithmetic_checks(const Fan& x, const Divisor& d) {
  std::vector<std::string> out;
  const IntMat a = IntMat::from_rows(x.rays, x.rank);
  const SmithForm s = smith_normal_form(a);
  if (s.U * a * s.V != s.S) out.push_back("SNF identity U*A*V = S fails on the ray matrix");
  if (!is_simplicial(x)) return out;
  const auto ws = walls(x);
  for (std::size_t k = 0; k < x.rank; ++k) {
    IntVec e(x.rank, Int(0));
    e[k] = 1;
    const Divisor p = principal(x, e);
    for (std::size_t w = 0; w < ws.size(); ++w)
      if (intersect(x, p, ws[w]) != 0) out.push_back("principal divisor not trivial on wall " + std::to_string(w));
  }
  if (is_q_cartier(x, d) && !ws.empty()) {
    bool wall_nef = true;
    for (const auto& w : ws) wall_nef = wall_nef && intersect(x, d, w) >= 0;
    // walls alone decide nefness only when every maximal cone meets a wall
    if (is_complete(x) && wall_nef != positivity(x, d).nef) out.push_back("nef via support function and via walls disagree");
  }
  return out;
}

// ------------------------------------------------------------ verifiers

Verdict verify_kv(const Instance& inst, const std::vector<Field>& fields) {
  Verdict v;
  v.kind = "kv";
  const HypothesisCheck h = check_hypothesis(inst);
  v.hypothesis_ok = h.ok;
  for (const auto& r : h.reasons) v.notes.push_back("hypothesis: " + r);
  Model m = simplicial_model(inst);
  v.failures = m.failures;
  for (auto& n : m.notes) v.notes.push_back(n);
  for (auto& f : arithmetic_checks(m.x, inst.d)) v.failures.push_back(f);
  Eval e = evaluate(m.x, inst.d, fields);
  v.dims = std::move(e.dims);
  v.vanishing = std::move(e.vanishing);
  if (v.hypothesis_ok)
    for (std::size_t k = 0; k < v.vanishing.size(); ++k)
      if (!v.vanishing[k].second) {
        std::string msg = "higher cohomology nonzero over " + v.vanishing[k].first.name();
        if (k < v.dims.size()) msg += ": " + dims_str(v.dims[k].second);
        v.failures.push_back(msg);
      }
  v.pass = v.failures.empty();
  return v;
}

Verdict verify_mfs(const Fan& x, const Divisor& d, const ExtremalRay& r, const Contraction& f,
                   const std::vector<Field>& fields) {
  if (f.kind != Contraction::Kind::Fibration) throw Error("verify_mfs: contraction is not a fibration");
  if (r.cls.pair(d) >= 0) throw Error("verify_mfs: D is not negative on the contracted ray");
  Verdict v;
  v.kind = "mfs";
  v.hypothesis_ok = true;
  const H0 h0 = h0_dim(x, d);
  if (h0.kind != H0::Kind::Zero) v.failures.push_back("h0 is not zero on the Mori fibre space");
  Eval e = evaluate(x, d, fields);
  for (std::size_t k = 0; k < e.dims.size(); ++k) {
    bool zero = true;
    for (const auto& c : e.dims[k].second) zero = zero && c == 0;
    if (!zero) v.failures.push_back("cohomology nonzero over " + e.dims[k].first.name() + ": " + dims_str(e.dims[k].second));
  }
  for (const auto& [fld, ok] : e.vanishing)
    if (!ok) v.failures.push_back("higher cohomology nonzero over " + fld.name());
  v.dims = std::move(e.dims);
  v.vanishing = std::move(e.vanishing);
  v.end = "mori-fibre-space";
  v.pass = v.failures.empty();
  return v;
}

Verdict verify_flip_diagram(const Fan& x, const ExtremalRay& r, const Divisor& d, std::uint64_t seed) {
  Verdict v;
  v.kind = "flip";
  v.hypothesis_ok = true;
  const Flip fl = flip(x, r, d);
  const FlipDiagram g = flip_diagram(x, fl.plus, r);
  auto bad = [&](std::string s) { v.failures.push_back(std::move(s)); };

  if (g.theta.nrays() != x.nrays() + 1) bad("resolution adds more than one ray");
  for (const auto& u : x.rays)
    if (g.theta.ray_index(u) == Fan::npos) bad("resolution lost ray " + to_string(u));
  if (x.ray_index(g.e_ray) != Fan::npos) bad("exceptional ray is already a ray of X");
  if (!is_simplicial(g.theta)) bad("resolution is not simplicial");
  if (!validate(g.theta).empty()) bad("resolution fails validate");
  for (const ToricMap* mp : {&g.psi, &g.psi_plus}) {
    const MapCheck mc = check_map(*mp);
    if (!mc.proper || !mc.birational) bad("resolution map not proper birational");
  }

  std::vector<Divisor> tests;
  for (std::size_t i = 0; i < x.nrays(); ++i) {
    Divisor e(x.nrays(), Rat(0));
    e[i] = 1;
    tests.push_back(std::move(e));
  }
  Rng rng(seed);
  for (int k = 0; k < 5; ++k) {
    Divisor f(x.nrays());
    for (auto& c : f) c = rand_rat(rng, -3, 3, 5);
    tests.push_back(std::move(f));
  }
  for (const auto& f : tests) {
    Divisor rhs = pullback(g.psi_plus, f);
    rhs[g.e_index] -= g.gamma.pair(f);
    if (pullback(g.psi, f) != rhs) bad("pullback equation fails for F = " + to_string(f));
  }
  const Rat c = -kappa(g, d);
  if (c <= 0) bad("c = " + fmt(c) + " is not positive");
  v.notes.push_back("checked " + std::to_string(tests.size()) + " divisors; lambda = " + fmt(g.lambda) + ", c = " + fmt(c));
  v.pass = v.failures.empty();
  return v;
}

Verdict verify_mmp(const Instance& inst, const std::vector<Field>& fields) {
  Verdict v;
  v.kind = "mmp";
  const HypothesisCheck h = check_hypothesis(inst);
  v.hypothesis_ok = h.ok;
  Model m = simplicial_model(inst);
  v.failures = m.failures;

  std::vector<std::string> problems;  // count as failures only under the hypothesis
  MMPRun run;
  try {
    run = run_mmp(m.x, inst.d, inst.b);
  } catch (const Error& e) {
    (v.hypothesis_ok ? v.failures : v.notes).push_back(std::string("run_mmp: ") + e.what());
    v.pass = v.failures.empty();
    return v;
  }

  Eval prev = evaluate(run.models[0], run.divisors[0], fields);
  v.dims = prev.dims;
  v.vanishing = prev.vanishing;
  for (std::size_t i = 0; i < run.steps.size(); ++i) {
    const MMPStep& st = run.steps[i];
    const std::string tag = "step " + std::to_string(i) + ": ";
    StepRecord rec;
    rec.kind = st.cert.kind;
    rec.wall = run.models[i].cone_rays(st.wall_rays);
    rec.cert = st.cert;
    std::vector<std::string> local;
    if (!st.cert.ok) local.push_back(tag + "certificate: " + st.cert.failure);
    if (st.cert.a <= -1) local.push_back(tag + "a = " + fmt(st.cert.a) + " is not > -1");
    if (st.cert.kind == StepCertificate::Kind::Divisorial) {
      if (st.cert.a <= 0) local.push_back(tag + "divisorial a = " + fmt(st.cert.a) + " is not > 0");
    } else {
      if (st.cert.b < 0 || st.cert.b >= 1) local.push_back(tag + "b = " + fmt(st.cert.b) + " not in [0,1)");
      if (st.cert.c <= 0) local.push_back(tag + "c = " + fmt(st.cert.c) + " is not > 0");
      const auto rays = extremal_rays(run.models[i]);
      const auto it = std::find_if(rays.begin(), rays.end(), [&](const ExtremalRay& r) {
        return std::find(r.walls.begin(), r.walls.end(), st.wall) != r.walls.end();
      });
      if (it == rays.end()) {
        local.push_back(tag + "flipped wall lies on no extremal ray");
      } else {
        const Verdict fd = verify_flip_diagram(run.models[i], *it, run.divisors[i], 1000 + i);
        for (const auto& f : fd.failures) local.push_back(tag + "flip diagram: " + f);
      }
    }
    Eval next = evaluate(run.models[i + 1], run.divisors[i + 1], fields);
    if (next.dims != prev.dims) {
      std::string msg = tag + "dimension vector changed";
      if (!prev.dims.empty() && !next.dims.empty())
        msg += " over " + prev.dims[0].first.name() + ": " + dims_str(prev.dims[0].second) + " -> " + dims_str(next.dims[0].second);
      local.push_back(msg);
    }
    if (next.vanishing != prev.vanishing) local.push_back(tag + "vanishing verdict changed");
    rec.dims_after = next.dims;
    if (next.dims.empty()) rec.vanishing_after = next.vanishing;
    rec.ok = local.empty();
    for (auto& s : local) problems.push_back(std::move(s));
    v.steps.push_back(std::move(rec));
    prev = std::move(next);
  }

  v.end = end_name(run.end);
  const Fan& last = run.models.back();
  const Divisor& dl = run.divisors.back();
  if (run.end == MMPRun::End::Nef) {
    for (const auto& [f, ok] : prev.vanishing)
      if (!ok) problems.push_back("end model: higher cohomology nonzero over " + f.name());
  } else {
    try {
      const Verdict mv = verify_mfs(last, dl, *run.fibre_ray, *run.fibration, fields);
      for (const auto& f : mv.failures) problems.push_back("end model: " + f);
    } catch (const Error& e) {
      problems.push_back(std::string("end model: ") + e.what());
    }
  }
  v.notes.push_back(std::to_string(run.steps.size()) + " steps, end " + v.end);
  for (auto& s : problems) (v.hypothesis_ok ? v.failures : v.notes).push_back(std::move(s));
  v.pass = v.failures.empty();
  return v;
}

Verdict verify_instance(const Instance& inst, const std::vector<Field>& fields) {
  Verdict v = verify_kv(inst, fields);
  const Verdict m = verify_mmp(inst, fields);
  v.kind = "kv+mmp";
  v.steps = m.steps;
  v.end = m.end;
  merge_into(v, m, "mmp: ");
  v.pass = v.failures.empty();
  return v;
}

// ------------------------------------------------------------ curated set

std::vector<std::pair<Instance, bool>> curated_instances() {
  std::vector<std::pair<Instance, bool>> out;
  auto add = [&](std::string label, const Fan& x, const Divisor& d, const Divisor& b, bool control) {
    Instance i;
    i.label = "curated/" + label;
    i.x = x;
    i.d = d;
    i.b = b;
    i.mode = 2;
    out.emplace_back(std::move(i), control);
  };
  const Fan p2 = projective_space(2);
  const Divisor zero3(3, Rat(0));
  add("p2-K", p2, canonical(p2), zero3, true);
  add("p2-3H", p2, by_rays(p2, {{v2(1, 0), Rat(3)}}), zero3, false);
  add("p2-A-third", p2, zero3, Divisor(3, Rat(2, 3)), false);

  const Fan f1 = star_subdivide(p2, v2(1, 1)).fan;
  add("f1-exceptional", f1, by_rays(f1, {{v2(1, 1), Rat(1)}}),
      by_rays(f1, {{v2(-1, -1), Rat(1, 2)}, {v2(1, 1), Rat(1, 2)}}), false);

  const Fan fa = flip_side_a(v3(1, 1, -2));
  add("flip-side-a", fa, by_rays(fa, {{v3(1, 0, 0), Rat(1)}, {v3(0, 1, 0), Rat(1)}, {v3(1, 1, -2), Rat(1)}}),
      by_rays(fa, {{v3(1, 0, 0), Rat(1, 2)}, {v3(0, 1, 0), Rat(1, 2)}}), false);

  const Fan fl = flip_side_a(v3(1, 1, -1));
  add("flop", fl, by_rays(fl, {{v3(1, 0, 0), Rat(1)}, {v3(0, 1, 0), Rat(1)}, {v3(0, 0, 1), Rat(1)}}),
      by_rays(fl, {{v3(1, 0, 0), Rat(9, 10)}, {v3(0, 1, 0), Rat(9, 10)}, {v3(1, 1, -1), Rat(7, 10)}}), false);

  const Fan cb = cube();
  add("cube", cb, Divisor(cb.nrays(), Rat(0)), Divisor(cb.nrays(), Rat(1, 2)), false);

  const Fan pp = product(projective_space(1), projective_space(1));
  add("p1xp1-mfs", pp, by_rays(pp, {{v2(1, 0), Rat(-1)}}),
      by_rays(pp, {{v2(1, 0), Rat(1, 2)}, {v2(0, 1), Rat(1, 2)}, {v2(0, -1), Rat(1, 2)}}), false);

  add("p2-mfs", p2, by_rays(p2, {{v2(1, 0), Rat(-1)}}), Divisor(3, Rat(1, 2)), false);
  return out;
}

// ------------------------------------------------------------ suite

namespace {

SuiteRecord record(const Instance& inst, const Verdict& v, bool control) {
  SuiteRecord r{inst.label, v, control, v.pass ? "pass" : "fail"};
  if (control) {
    const bool van = std::all_of(v.vanishing.begin(), v.vanishing.end(), [](const auto& p) { return p.second; });
    bool h2_one = false;
    for (const auto& [f, dims] : v.dims)
      if (f.p == 0) h2_one = dims.size() == 3 && dims[0] == 0 && dims[1] == 0 && dims[2] == 1;
    r.status = !v.hypothesis_ok && !van && h2_one ? "expected-fail" : "fail";
  }
  return r;
}

Verdict guarded(const Instance& inst, const std::vector<Field>& fields) {
  try {
    return verify_instance(inst, fields);
  } catch (const Error& e) {
    Verdict v;
    v.kind = "kv+mmp";
    v.failures.push_back(std::string("error: ") + e.what());
    return v;
  }
}

}  // namespace

SuiteResult run_suite(const SuiteParams& p, const std::vector<Instance>& extra) {
  SuiteResult res;
  for (std::size_t rank : p.ranks) {
    const Corpus c = gen_corpus({p.seed, rank, p.max_rays, p.count});
    for (const auto& n : c.notes) res.notes.push_back("rank " + std::to_string(rank) + ": " + n);
    for (const auto& inst : c.instances) res.records.push_back(record(inst, guarded(inst, p.fields), false));
  }
  if (p.curated) {
    for (const auto& [inst, control] : curated_instances())
      res.records.push_back(record(inst, guarded(inst, p.fields), control));
    for (const auto& [inst, control] : curated_instances()) {
      if (inst.label != "curated/flop" && inst.label != "curated/flip-side-a") continue;
      const auto rays = extremal_rays(inst.x);
      Instance tagged = inst;
      tagged.label = inst.label + "/flip-diagram";
      res.records.push_back(record(tagged, verify_flip_diagram(inst.x, rays.at(0), inst.d, p.seed), false));
    }
  }
  for (const auto& inst : extra) res.records.push_back(record(inst, guarded(inst, p.fields), false));
  res.all_ok = std::none_of(res.records.begin(), res.records.end(), [](const SuiteRecord& r) { return r.status == "fail"; });
  return res;
}

std::string suite_table(const SuiteResult& r) {
  std::ostringstream o;
  std::size_t w = 5;
  for (const auto& rec : r.records) w = std::max(w, rec.label.size());
  auto pad = [](std::string s, std::size_t n) {
    s.resize(std::max(s.size(), n), ' ');
    return s;
  };
  o << pad("label", w) << "  " << pad("status", 13) << "  hyp  " << pad("h (Q)", 14) << "  steps  end\n";
  std::size_t pass = 0, fail = 0, expected = 0;
  for (const auto& rec : r.records) {
    std::string dims = "-";
    for (const auto& [f, d] : rec.verdict.dims)
      if (f.p == 0) dims = dims_str(d);
    o << pad(rec.label, w) << "  " << pad(rec.status, 13) << "  " << (rec.verdict.hypothesis_ok ? "yes" : "no ") << "  "
      << pad(dims, 14) << "  " << pad(std::to_string(rec.verdict.steps.size()), 5) << "  "
      << (rec.verdict.end.empty() ? "-" : rec.verdict.end) << "\n";
    (rec.status == "pass" ? pass : rec.status == "fail" ? fail : expected)++;
  }
  o << pass << " pass, " << fail << " fail, " << expected << " expected-fail\n";
  return o.str();
}

}  // namespace kv
