#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "kv/io.hpp"

namespace {

using kv::io::json;
namespace fs = std::filesystem;

struct Global {
  std::uint64_t seed = 42;
  std::string report;
  bool quiet = false;
};

// JSON goes to --report when given, to stdout unless --quiet.
void emit(const Global& g, const json& j) {
  const std::string text = kv::io::dump(j);
  if (!g.report.empty()) {
    std::ofstream out(g.report, std::ios::binary);
    if (!out) throw kv::InputError(g.report + ": cannot write");
    out << text;
  }
  if (!g.quiet) std::cout << text;
}

json ints(const std::vector<kv::Int>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.get_si());
  return a;
}

json cone_json(const kv::Cone& c) {
  json a = json::array();
  for (auto i : c) a.push_back(i);
  return a;
}

kv::Instance load_one(const std::string& path) {
  auto v = kv::io::load_instances(path);
  if (v.size() != 1) throw kv::InputError(path + ": expected exactly one instance");
  return v[0];
}

int fan_info(const Global& g, const std::string& path) {
  const json j = kv::io::parse_file(path);
  const kv::Fan f = kv::io::fan_from_json(j, path);
  json out;
  out["rank"] = f.rank;
  out["rays"] = f.nrays();
  out["max_cones"] = f.cones.size();
  const auto defects = kv::validate(f);
  json d = json::array();
  for (const auto& x : defects) d.push_back(x.to_string());
  out["valid"] = defects.empty();
  out["defects"] = std::move(d);
  if (defects.empty()) {
    const auto p = kv::properties(f);
    out["simplicial"] = p.simplicial;
    out["smooth"] = p.smooth;
    out["complete"] = p.complete;
    out["support_convex"] = p.support_convex;
    if (p.q_gorenstein_index) out["q_gorenstein_index"] = p.q_gorenstein_index->get_si();
    else out["q_gorenstein_index"] = nullptr;
  }
  emit(g, out);
  return defects.empty() ? 0 : 1;
}

int div_check(const Global& g, const std::string& path) {
  const kv::io::DivisorFile df = kv::io::divisor_from_json(kv::io::parse_file(path), fs::path(path).parent_path());
  kv::require_valid(df.fan);
  json out;
  out["integral"] = kv::is_integral(df.coeffs);
  const bool qc = kv::is_q_cartier(df.fan, df.coeffs);
  out["q_cartier"] = qc;
  if (qc) {
    const auto p = kv::positivity(df.fan, df.coeffs);
    out["nef"] = p.nef;
    out["ample"] = p.ample;
    out["big"] = p.big;
  }
  const auto klt = kv::klt_check(df.fan, df.coeffs);
  out["klt_as_boundary"] = klt.ok;
  if (!klt.ok) out["klt_reason"] = klt.reason;
  const auto h0 = kv::h0_dim(df.fan, df.coeffs);
  if (h0.kind == kv::H0::Kind::Infinite) out["h0"] = "infinite";
  else out["h0"] = h0.count.get_si();
  emit(g, out);
  return 0;
}

int coh_dims(const Global& g, const std::string& path, const std::string& field) {
  const kv::Field f = kv::parse_field(field);
  const kv::io::DivisorFile df = kv::io::divisor_from_json(kv::io::parse_file(path), fs::path(path).parent_path());
  kv::require_valid(df.fan);
  if (!kv::is_simplicial(df.fan)) throw kv::InputError(path + ": fan is not simplicial");
  json out;
  out["field"] = kv::io::field_key(f);
  if (kv::is_complete(df.fan)) {
    const auto r = kv::coh_dims(df.fan, df.coeffs, f);
    out["dims"] = ints(r.dims);
    json ch = json::array();
    for (const auto& c : r.chambers) {
      json e;
      e["neg"] = cone_json(c.neg);
      e["lattice_count"] = c.lattice_count ? c.lattice_count->get_si() : 0;
      json h = json::array();
      for (auto x : c.homology) h.push_back(x);
      e["homology"] = std::move(h);
      ch.push_back(std::move(e));
    }
    out["chambers"] = std::move(ch);
  } else {
    if (!kv::is_support_convex(df.fan)) throw kv::InputError(path + ": fan is neither complete nor support-convex");
    const auto v = kv::vanishing_higher(df.fan, df.coeffs, f);
    out["higher_vanishing"] = v.vanishes;
    if (v.witness) {
      out["witness"] = cone_json(*v.witness);
      out["degree"] = v.degree;
    }
  }
  emit(g, out);
  return 0;
}

int mmp_run(const Global& g, const std::string& path) {
  const kv::Instance inst = load_one(path);
  if (!kv::is_simplicial(inst.x)) throw kv::InputError(path + ": mmp run needs a simplicial fan");
  const kv::MMPRun run = kv::run_mmp(inst.x, inst.d, inst.b);
  std::vector<kv::StepRecord> recs;
  bool ok = true;
  for (std::size_t i = 0; i < run.steps.size(); ++i) {
    kv::StepRecord r;
    r.kind = run.steps[i].cert.kind;
    r.wall = run.models[i].cone_rays(run.steps[i].wall_rays);
    r.cert = run.steps[i].cert;
    r.ok = r.cert.ok;
    ok = ok && r.ok;
    recs.push_back(std::move(r));
  }
  json out;
  out["steps"] = kv::io::steps_to_json(recs);
  out["end"] = run.end == kv::MMPRun::End::Nef ? "nef" : "mori-fibre-space";
  out["model"] = kv::io::fan_to_json(run.models.back());
  out["D"] = kv::io::coeffs_to_json(run.divisors.back());
  out["B"] = kv::io::coeffs_to_json(run.boundaries.back());
  emit(g, out);
  return ok ? 0 : 1;
}

// First D-negative extremal ray whose contraction has the wanted kind.
std::optional<kv::ExtremalRay> negative_ray(const kv::Instance& inst, kv::Contraction::Kind kind) {
  for (const auto& r : kv::extremal_rays(inst.x))
    if (r.cls.pair(inst.d) < 0 && kv::contract(inst.x, r).kind == kind) return r;
  return std::nullopt;
}

int verify(const Global& g, const std::string& what, const std::string& path) {
  const kv::Instance inst = load_one(path);
  const auto fields = kv::default_fields();
  kv::Verdict v;
  if (what == "kv") {
    v = kv::verify_kv(inst, fields);
  } else if (what == "mmp") {
    v = kv::verify_mmp(inst, fields);
  } else if (what == "mfs") {
    if (!kv::is_simplicial(inst.x)) throw kv::InputError(path + ": verify mfs needs a simplicial fan");
    auto r = negative_ray(inst, kv::Contraction::Kind::Fibration);
    if (!r) throw kv::InputError(path + ": no D-negative extremal ray with a fibration contraction");
    v = kv::verify_mfs(inst.x, inst.d, *r, kv::contract(inst.x, *r), fields);
  } else {
    if (!kv::is_simplicial(inst.x)) throw kv::InputError(path + ": verify flip needs a simplicial fan");
    auto r = negative_ray(inst, kv::Contraction::Kind::Flipping);
    if (!r) throw kv::InputError(path + ": no D-negative flipping extremal ray");
    v = kv::verify_flip_diagram(inst.x, *r, inst.d, g.seed);
  }
  json out;
  out["label"] = inst.label;
  out["verdict"] = kv::io::verdict_to_json(v, v.pass ? "pass" : "fail");
  out["dims"] = kv::io::field_dims_to_json(v.dims);
  out["mmp"] = kv::io::steps_to_json(v.steps);
  emit(g, out);
  return v.pass ? 0 : 1;
}

struct SuiteOpts {
  std::vector<std::size_t> ranks{2, 3};
  std::size_t count = 36;
  std::size_t max_rays = 12;
  std::vector<std::string> fields{"q", "f2", "f3", "f5", "f7"};
  std::string corpus;
  std::string write_corpus;
  bool no_curated = false;
};

int suite(const Global& g, const SuiteOpts& o) {
  kv::SuiteParams p;
  p.seed = g.seed;
  p.ranks = o.ranks;
  p.count = o.count;
  p.max_rays = o.max_rays;
  p.curated = !o.no_curated;
  p.fields.clear();
  for (const auto& f : o.fields) p.fields.push_back(kv::parse_field(f));
  std::vector<kv::Instance> extra;
  if (!o.corpus.empty()) extra = kv::io::load_instances(o.corpus);
  if (!o.write_corpus.empty()) {
    json list = json::array();
    for (auto rank : p.ranks)
      for (const auto& inst : kv::gen_corpus({p.seed, rank, p.max_rays, p.count}).instances)
        list.push_back(kv::io::instance_to_json(inst));
    json j;
    j["instances"] = std::move(list);
    std::ofstream out(o.write_corpus, std::ios::binary);
    if (!out) throw kv::InputError(o.write_corpus + ": cannot write");
    out << kv::io::dump(j);
  }
  const kv::SuiteResult r = kv::run_suite(p, extra);
  const std::string text = kv::io::dump(kv::io::report_to_json(r));
  if (!g.report.empty()) {
    std::ofstream out(g.report, std::ios::binary);
    if (!out) throw kv::InputError(g.report + ": cannot write");
    out << text;
  }
  if (!g.quiet) {
    std::cout << kv::suite_table(r);
    for (const auto& n : r.notes) std::cout << "note: " << n << "\n";
  }
  return r.all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* t = std::getenv("KV_VERIFY_THREADS")) {
    const int n = std::atoi(t);
    if (n > 0) omp_set_num_threads(n);
  }

  CLI::App app{"Exact checks of vanishing theorems on toric varieties"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--report", g.report, "write the JSON result to this path");
  app.add_flag("--quiet", g.quiet, "print nothing on stdout");

  std::string path, field = "q", what;
  std::function<int()> action;
  app.fallthrough();

  auto* fan = app.add_subcommand("fan", "fan files")->require_subcommand(1);
  auto* fan_info_cmd = fan->add_subcommand("info", "validate a fan and list its properties");
  fan_info_cmd->add_option("file", path, "fan JSON")->required();
  fan_info_cmd->callback([&] { action = [&] { return fan_info(g, path); }; });

  auto* div = app.add_subcommand("div", "divisor files")->require_subcommand(1);
  auto* div_check_cmd = div->add_subcommand("check", "Cartier, positivity, klt and h0 of a divisor");
  div_check_cmd->add_option("file", path, "divisor JSON")->required();
  div_check_cmd->callback([&] { action = [&] { return div_check(g, path); }; });

  auto* coh = app.add_subcommand("coh", "sheaf cohomology")->require_subcommand(1);
  auto* coh_dims_cmd = coh->add_subcommand("dims", "cohomology dimensions of O(D)");
  coh_dims_cmd->add_option("file", path, "divisor JSON")->required();
  coh_dims_cmd->add_option("--field", field, "q|f2|f3|f5|f7")
      ->check(CLI::IsMember({"q", "f2", "f3", "f5", "f7"}))
      ->capture_default_str();
  coh_dims_cmd->callback([&] { action = [&] { return coh_dims(g, path, field); }; });

  auto* mmp = app.add_subcommand("mmp", "minimal model program")->require_subcommand(1);
  auto* mmp_run_cmd = mmp->add_subcommand("run", "run the D-MMP with step certificates");
  mmp_run_cmd->add_option("file", path, "instance JSON")->required();
  mmp_run_cmd->callback([&] { action = [&] { return mmp_run(g, path); }; });

  auto* ver = app.add_subcommand("verify", "verify one instance");
  ver->add_option("what", what, "kv|mmp|mfs|flip")->required()->check(CLI::IsMember({"kv", "mmp", "mfs", "flip"}));
  ver->add_option("file", path, "instance JSON")->required();
  ver->callback([&] { action = [&] { return verify(g, what, path); }; });

  SuiteOpts so;
  auto* su = app.add_subcommand("suite", "corpus, curated examples and all verifiers");
  su->add_option("--rank", so.ranks, "ranks to generate (2, 3)")->check(CLI::IsMember({2, 3}));
  su->add_option("--count", so.count, "instances per rank")->capture_default_str();
  su->add_option("--max-rays", so.max_rays, "ray bound for generated fans")->capture_default_str();
  su->add_option("--fields", so.fields, "fields to test")->check(CLI::IsMember({"q", "f2", "f3", "f5", "f7"}));
  su->add_option("--corpus", so.corpus, "extra instance file");
  su->add_option("--write-corpus", so.write_corpus, "also write the generated corpus here");
  su->add_flag("--no-curated", so.no_curated, "skip the curated examples");
  su->callback([&] { action = [&] { return suite(g, so); }; });

  for (auto* sub : app.get_subcommands({}))
    for (auto* leaf : sub->fallthrough()->get_subcommands({})) leaf->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return action();
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
