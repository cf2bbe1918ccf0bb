#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "kv/io.hpp"
#include "support.hpp"

using namespace kv;
using kvtest::iv;
using kvtest::q;
using io::json;
namespace fs = std::filesystem;

namespace {

const Field QQ{0};

fs::path scratch(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "kv_test_verify";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

std::string thrown(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

Instance find(const std::string& label) {
  for (auto& [i, c] : curated_instances())
    if (i.label == label) return i;
  FAIL("no curated instance " << label);
  return {};
}

std::vector<Int> ints(std::initializer_list<long> xs) {
  std::vector<Int> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

const std::vector<Int>& dims_over(const Verdict& v, std::uint32_t p) {
  for (const auto& [f, d] : v.dims)
    if (f.p == p) return d;
  throw Error("field missing");
}

}  // namespace

TEST_CASE("rational strings") {
  CHECK(io::parse_rational("3/6", "x") == q(1, 2));
  CHECK(io::parse_rational("-4", "x") == q(-4));
  CHECK(io::format_rational(q(-2, 4)) == "-1/2");
  CHECK(io::format_rational(q(5)) == "5");
  CHECK(thrown([] { io::parse_rational("1/-2", "x"); }).find("denominator must be positive") != std::string::npos);
  CHECK(thrown([] { io::parse_rational("1/\xe2\x88\x92" "2", "x"); }).find("denominator must be positive") != std::string::npos);
  CHECK(thrown([] { io::parse_rational("1/0", "x"); }).find("denominator must be positive") != std::string::npos);
  CHECK(!thrown([] { io::parse_rational("1.5", "x"); }).empty());
  CHECK(!thrown([] { io::parse_rational("", "x"); }).empty());
}

TEST_CASE("fan files") {
  const std::string p2 = R"({"rank":2,"rays":[[-1,-1],[0,1],[1,0]],"max_cones":[[0,1],[0,2],[1,2]]})";
  const json j = json::parse(p2);
  const Fan f = io::fan_from_json(j);
  CHECK(f == fans::projective_space(2));
  CHECK(io::fan_to_json(f) == j);
  CHECK(io::dump(io::fan_to_json(io::fan_from_json(io::fan_to_json(f)))) == io::dump(j));

  // unsorted input canonicalizes, and re-serializing is then stable
  const json messy = json::parse(R"({"rank":2,"rays":[[1,0],[0,1],[-1,-1]],"max_cones":[[2,1],[0,1],[2,0]]})");
  CHECK(io::fan_to_json(io::fan_from_json(messy)) == j);

  const std::string e1 = thrown([] { io::fan_from_json(json::parse(R"({"rank":2,"rays":[[2,0],[0,1]],"max_cones":[[0,1]]})")); });
  CHECK(e1.find("(2,0)") != std::string::npos);
  CHECK(e1.find("not primitive") != std::string::npos);
  CHECK(thrown([] { io::fan_from_json(json::parse(R"({"rank":2,"rays":[[1,0]],"max_cones":[[0,3]]})")); }).find("max_cones[0]") !=
        std::string::npos);
  CHECK(thrown([] { io::fan_from_json(json::parse(R"({"rank":2,"rays":[[1,0,0]],"max_cones":[]})")); }).find("rays[0]") !=
        std::string::npos);
  CHECK(thrown([] { io::fan_from_json(json::parse(R"({"rays":[],"max_cones":[]})")); }).find("rank") != std::string::npos);
}

TEST_CASE("divisor files follow the file's ray order") {
  const fs::path fp = scratch("messy_fan.json", R"({"rank":2,"rays":[[1,0],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2],[0,2]]})");
  const fs::path dp = scratch("d.json", R"({"fan":"messy_fan.json","coeffs":["3","0","1/2"]})");
  const auto d = io::divisor_from_json(io::parse_file(dp), dp.parent_path());
  CHECK(d.coeffs[d.fan.ray_index(iv({1, 0}))] == q(3));
  CHECK(d.coeffs[d.fan.ray_index(iv({-1, -1}))] == q(1, 2));
  CHECK(io::divisor_to_json(d)["fan"] == "messy_fan.json");

  const json inl = json::parse(R"({"fan":{"rank":1,"rays":[[-1],[1]],"max_cones":[[0],[1]]},"coeffs":["-1","1/3"]})");
  const auto e = io::divisor_from_json(inl, ".");
  CHECK(e.coeffs == Divisor{q(-1), q(1, 3)});
  CHECK(io::divisor_to_json(e) == inl);
  CHECK(!thrown([&] { io::divisor_from_json(json::parse(R"({"fan":"nope.json","coeffs":[]})"), dp.parent_path()); }).empty());
  CHECK(thrown([&] {
          io::divisor_from_json(json::parse(R"({"fan":"messy_fan.json","coeffs":["1"]})"), dp.parent_path());
        }).find("coefficients") != std::string::npos);
}

TEST_CASE("instance files") {
  for (const auto& [inst, control] : curated_instances()) {
    const json j = io::instance_to_json(inst);
    const Instance back = io::instance_from_json(j, ".", "x");
    CHECK(back.label == inst.label);
    CHECK(back.x == inst.x);
    CHECK(back.b == inst.b);
    CHECK(back.d == inst.d);
    CHECK(io::dump(io::instance_to_json(back)) == io::dump(j));
  }
  const Corpus c = gen_corpus({5, 2, 12, 8});
  for (const auto& inst : c.instances) {
    const Instance back = io::instance_from_json(io::instance_to_json(inst), ".", "x");
    REQUIRE(back.witness.size() == inst.witness.size());
    for (std::size_t k = 0; k < inst.witness.size(); ++k) {
      CHECK(back.witness[k].q == inst.witness[k].q);
      CHECK(back.witness[k].m == inst.witness[k].m);
    }
  }

  const std::string one = io::dump(io::instance_to_json(find("curated/p2-3H")));
  const fs::path single = scratch("single.json", one);
  const fs::path list = scratch("list.json", "[" + one + "," + one + "]");
  const fs::path obj = scratch("obj.json", "{\"instances\": [" + one + "]}");
  CHECK(io::load_instances(single).size() == 1);
  CHECK(io::load_instances(list).size() == 2);
  CHECK(io::load_instances(obj).size() == 1);
  CHECK(!thrown([&] { io::load_instances(scratch("bad.json", "{\"instances\": [")); }).empty());
  CHECK(!thrown([&] { io::load_instances(scratch("bad2.json", "{\"instances\": 3}")); }).empty());
  CHECK(thrown([&] {
          io::load_instances(scratch("bad3.json", R"({"fan":{"rank":1,"rays":[[1],[-1]],"max_cones":[[0],[1]]},"B":["0","0"],"D":["1/2","0"],"mode":2})"));
        }).find("integral") != std::string::npos);
  CHECK(thrown([&] {
          io::load_instances(scratch("bad4.json", R"({"fan":{"rank":1,"rays":[[1],[-1]],"max_cones":[[0],[1]]},"B":["0","0"],"D":["0","0"],"mode":3})"));
        }).find("mode") != std::string::npos);
}

TEST_CASE("hypothesis checks") {
  CHECK(check_hypothesis(find("curated/p2-3H")).ok);
  CHECK(check_hypothesis(find("curated/cube")).ok);
  const auto k = check_hypothesis(find("curated/p2-K"));
  CHECK(!k.ok);
  CHECK(!k.reasons.empty());

  Instance bad = find("curated/p2-3H");
  bad.b[0] = 1;
  CHECK(!check_hypothesis(bad).ok);

  // mode 1 with a witness on P^2: rays sorted as (-1,-1), (0,1), (1,0);
  // div(1,1) = (-2, 1, 1), so B = (0, 1/2, 1/2) makes D integral
  Instance m1;
  m1.x = fans::projective_space(2);
  m1.b = Divisor{q(0), q(1, 2), q(1, 2)};
  m1.mode = 1;
  const IntVec m = iv({1, 1});
  m1.d = canonical(m1.x) + m1.b + q(1, 2) * principal(m1.x, m);
  REQUIRE(is_integral(m1.d));
  CHECK(!check_hypothesis(m1).ok);  // no witness given
  m1.witness.push_back({q(1, 2), m});
  CHECK(check_hypothesis(m1).ok);
  m1.witness[0].q = q(1, 3);
  CHECK(!check_hypothesis(m1).ok);
}

TEST_CASE("gen_corpus post-conditions") {
  const Corpus c = gen_corpus({42, 2, 12, 5});
  REQUIRE(c.instances.size() == 5);
  for (const auto& inst : c.instances) {
    CHECK(inst.x.nrays() <= 12);
    CHECK(validate(inst.x).empty());
    CHECK(is_integral(inst.d));
    CHECK(klt_check(inst.x, inst.b).ok);
    for (const auto& b : inst.b) CHECK((b >= 0 && b < 1));
    const Divisor a = inst.d - canonical(inst.x) - inst.b;
    if (inst.mode == 2) {
      const auto p = positivity(inst.x, a);
      CHECK(p.nef);
      CHECK(p.big);
    } else {
      Divisor sum(inst.x.nrays(), q(0));
      for (const auto& w : inst.witness) sum = sum + w.q * principal(inst.x, w.m);
      CHECK(sum == a);
      CHECK(positivity(inst.x, inst.b).big);
    }
  }
  CHECK(c.instances[3].mode == 1);

  auto dump_all = [](const Corpus& k) {
    std::string s;
    for (const auto& i : k.instances) s += io::dump(io::instance_to_json(i));
    return s;
  };
  CHECK(dump_all(c) == dump_all(gen_corpus({42, 2, 12, 5})));
  CHECK(dump_all(c) != dump_all(gen_corpus({43, 2, 12, 5})));

  const Corpus r3 = gen_corpus({42, 3, 12, 12});
  CHECK(r3.instances.size() == 12);
  for (const auto& inst : r3.instances) CHECK(check_hypothesis(inst).ok);

  CHECK_THROWS_AS(gen_corpus({42, 4, 12, 5}), InputError);
  CHECK_THROWS_AS(gen_corpus({42, 1, 12, 5}), InputError);
  CHECK_THROWS_AS(gen_corpus({42, 2, 15, 5}), InputError);
}

TEST_CASE("verify_kv") {
  const auto fields = default_fields();
  const Verdict k = verify_kv(find("curated/p2-K"), fields);
  CHECK(!k.hypothesis_ok);
  CHECK(dims_over(k, 0) == ints({0, 0, 1}));
  CHECK(dims_over(k, 2) == ints({0, 0, 1}));
  CHECK(k.pass);  // the implication holds vacuously

  const Verdict h = verify_kv(find("curated/p2-3H"), fields);
  CHECK(h.hypothesis_ok);
  CHECK(h.pass);
  for (const auto& [f, d] : h.dims) CHECK(d == ints({10, 0, 0}));

  const Verdict t = verify_kv(find("curated/p2-A-third"), fields);
  CHECK(t.pass);
  CHECK(dims_over(t, 0) == ints({1, 0, 0}));

  const Verdict c = verify_kv(find("curated/cube"), fields);
  CHECK(c.pass);
  CHECK(std::any_of(c.notes.begin(), c.notes.end(), [](const std::string& n) { return n.find("q-factorialized") == 0; }));

  // non-complete: vanishing only
  const Verdict f = verify_kv(find("curated/flip-side-a"), fields);
  CHECK(f.pass);
  CHECK(f.dims.empty());
  CHECK(f.vanishing.size() == fields.size());

  // a false hypothesis with nonvanishing cohomology must not be reported as a failure of the implication
  Instance lie = find("curated/p2-K");
  lie.b = Divisor(3, q(0));
  lie.mode = 1;
  lie.witness.push_back({q(0), iv({0, 0})});  // D - K - B = 0
  const Verdict l = verify_kv(lie, {QQ});
  CHECK(!l.hypothesis_ok);  // B = 0 is not big
  CHECK(l.pass);
}

TEST_CASE("verify_mmp") {
  const auto fields = default_fields();
  const Verdict e = verify_mmp(find("curated/f1-exceptional"), fields);
  CHECK(e.pass);
  REQUIRE(e.steps.size() == 1);
  CHECK(e.steps[0].kind == StepCertificate::Kind::Divisorial);
  CHECK(e.steps[0].cert.a > 0);
  CHECK(e.end == "nef");
  for (const auto& [fld, d] : e.steps[0].dims_after) CHECK(d == dims_over(e, fld.p));

  const Verdict fl = verify_mmp(find("curated/flip-side-a"), fields);
  CHECK(fl.pass);
  REQUIRE(fl.steps.size() == 1);
  CHECK(fl.steps[0].kind == StepCertificate::Kind::Flip);
  CHECK(fl.steps[0].cert.c > 0);
  CHECK(fl.steps[0].vanishing_after.size() == fields.size());

  const Verdict m = verify_mmp(find("curated/p1xp1-mfs"), fields);
  CHECK(m.pass);
  CHECK(m.end == "mori-fibre-space");

  const Verdict n = verify_mmp(find("curated/p2-3H"), fields);
  CHECK(n.steps.empty());
  CHECK(n.end == "nef");
}

TEST_CASE("verify_mfs") {
  const auto fields = default_fields();
  const Instance i = find("curated/p2-mfs");
  const auto rays = extremal_rays(i.x);
  REQUIRE(rays.size() == 1);
  const Contraction f = contract(i.x, rays[0]);
  const Verdict v = verify_mfs(i.x, i.d, rays[0], f, fields);
  CHECK(v.pass);
  for (const auto& [fld, d] : v.dims) CHECK(d == ints({0, 0, 0}));
  CHECK_THROWS_AS(verify_mfs(i.x, Divisor(3, q(0)), rays[0], f, fields), Error);

  const Instance e = find("curated/f1-exceptional");
  for (const auto& r : extremal_rays(e.x)) {
    const Contraction c = contract(e.x, r);
    if (c.kind != Contraction::Kind::Fibration) CHECK_THROWS_AS(verify_mfs(e.x, e.d, r, c, fields), Error);
  }
}

TEST_CASE("verify_flip_diagram") {
  for (const char* l : {"curated/flop", "curated/flip-side-a"}) {
    const Instance i = find(l);
    const auto rays = extremal_rays(i.x);
    REQUIRE(rays.size() == 1);
    const Verdict v = verify_flip_diagram(i.x, rays[0], i.d, 3);
    CHECK(v.pass);
    CHECK(v.failures.empty());
  }
}

TEST_CASE("arithmetic checks") {
  for (const auto& [i, c] : curated_instances()) CHECK(arithmetic_checks(is_simplicial(i.x) ? i.x : q_factorialize(i.x).fan, i.d).empty());
}

TEST_CASE("suite") {
  SuiteParams p;
  p.seed = 7;
  p.ranks = {2};
  p.count = 4;
  const SuiteResult r = run_suite(p);
  CHECK(r.all_ok);
  std::size_t controls = 0;
  for (const auto& rec : r.records) {
    if (rec.control) {
      ++controls;
      CHECK(rec.status == "expected-fail");
    } else {
      CHECK(rec.status == "pass");
    }
  }
  CHECK(controls == 1);
  CHECK(io::dump(io::report_to_json(r)) == io::dump(io::report_to_json(run_suite(p))));
  const std::string table = suite_table(r);
  CHECK(table.find("expected-fail") != std::string::npos);
  CHECK(table.find(" fail, 1 expected-fail") != std::string::npos);

  // extra instances only; K on P^2 outside the control list is a plain
  // instance whose hypothesis fails, so it still passes
  SuiteParams none;
  none.ranks = {};
  none.curated = false;
  none.fields = {QQ};
  Instance k = find("curated/p2-K");
  k.label = "extra/p2-K";
  const SuiteResult extra = run_suite(none, {find("curated/p2-3H"), k});
  REQUIRE(extra.records.size() == 2);
  CHECK(extra.all_ok);
  CHECK(extra.records[1].status == "pass");
  CHECK(!extra.records[1].verdict.hypothesis_ok);
}
