#include "kv/io.hpp"

#include <fstream>
#include <sstream>

namespace kv::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw InputError(where + ": " + what); }

Int int_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Int(j.get<unsigned long>()) : Int(j.get<long>());
  fail(where, "expected an integer");
}

json int_to_json(const Int& v) {
  if (!v.fits_slong_p()) throw Error("integer " + v.get_str() + " does not fit the JSON writer");
  return v.get_si();
}

IntVec intvec_from_json(const json& j, std::size_t n, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of integers");
  if (j.size() != n) fail(where, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  IntVec v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(int_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

const json& member(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

}  // namespace

Rat parse_rational(const std::string& s, const std::string& where) {
  auto digits = [](const std::string& t, std::size_t from) {
    if (from >= t.size()) return false;
    for (std::size_t i = from; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  const auto slash = s.find('/');
  const std::string num = s.substr(0, slash);
  if (!digits(num, !num.empty() && num[0] == '-' ? 1 : 0)) fail(where, "malformed rational \"" + s + "\"");
  Rat q;
  if (slash == std::string::npos) {
    q = Rat(Int(num));
  } else {
    const std::string den = s.substr(slash + 1);
    if (!den.empty() && (den[0] == '-' || den.rfind("\xe2\x88\x92", 0) == 0)) fail(where, "denominator must be positive");
    if (!digits(den, 0)) fail(where, "malformed rational \"" + s + "\"");
    Int d(den);
    if (d == 0) fail(where, "denominator must be positive");
    q = Rat(Int(num), d);
    q.canonicalize();
  }
  return q;
}

std::string format_rational(const Rat& q) { return q.get_str(); }

json fan_to_json(const Fan& f) {
  json j;
  j["rank"] = f.rank;
  json rays = json::array();
  for (const auto& u : f.rays) {
    json r = json::array();
    for (const auto& c : u) r.push_back(int_to_json(c));
    rays.push_back(std::move(r));
  }
  j["rays"] = std::move(rays);
  json cones = json::array();
  for (const auto& c : f.cones) cones.push_back(c);
  j["max_cones"] = std::move(cones);
  return j;
}

namespace {

// A fan together with the canonical index of each ray as listed in the file;
// coefficient arrays follow the file's ray order.
struct Loaded {
  Fan fan;
  std::vector<std::size_t> order;
};

Loaded load_fan(const json& j, const std::string& where) {
  const json& rk = member(j, "rank", where);
  if (!rk.is_number_integer() || rk.get<long>() < 0 || rk.get<long>() > 16) fail(where + ".rank", "expected an integer in 0..16");
  const auto rank = rk.get<std::size_t>();
  const json& rays = member(j, "rays", where);
  if (!rays.is_array()) fail(where + ".rays", "expected an array");
  std::vector<IntVec> rv;
  for (std::size_t i = 0; i < rays.size(); ++i) {
    const std::string w = where + ".rays[" + std::to_string(i) + "]";
    IntVec u = intvec_from_json(rays[i], rank, w);
    if (is_zero(u)) fail(w, "ray is zero");
    if (gcd_of(u) != 1) fail(w, "ray " + to_string(u) + " is not primitive");
    rv.push_back(std::move(u));
  }
  const json& cones = member(j, "max_cones", where);
  if (!cones.is_array()) fail(where + ".max_cones", "expected an array");
  std::vector<Cone> cv;
  for (std::size_t i = 0; i < cones.size(); ++i) {
    const std::string w = where + ".max_cones[" + std::to_string(i) + "]";
    if (!cones[i].is_array()) fail(w, "expected an array of ray indices");
    Cone c;
    for (const auto& e : cones[i]) {
      if (!e.is_number_integer() || e.get<long>() < 0 || e.get<std::size_t>() >= rv.size())
        fail(w, "ray index out of range");
      c.push_back(e.get<std::size_t>());
    }
    cv.push_back(std::move(c));
  }
  Loaded l;
  try {
    l.fan = Fan(rank, rv, std::move(cv));
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    fail(where, e.what());
  }
  for (const auto& u : rv) l.order.push_back(l.fan.ray_index(u));
  return l;
}

Loaded resolve(const json& ref, const std::filesystem::path& base, const std::string& where) {
  if (ref.is_string()) {
    std::filesystem::path p = ref.get<std::string>();
    if (p.is_relative()) p = base / p;
    return load_fan(parse_file(p), p.string());
  }
  return load_fan(ref, where);
}

Divisor aligned(const json& j, const Loaded& l, const std::string& where) {
  const Divisor raw = coeffs_from_json(j, l.order.size(), where);
  Divisor d(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) d[l.order[i]] = raw[i];
  return d;
}

}  // namespace

Fan fan_from_json(const json& j, const std::string& where) { return load_fan(j, where).fan; }

json coeffs_to_json(const Divisor& d) {
  json a = json::array();
  for (const auto& q : d) a.push_back(format_rational(q));
  return a;
}

Divisor coeffs_from_json(const json& j, std::size_t n, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of rational strings");
  if (j.size() != n) fail(where, "expected " + std::to_string(n) + " coefficients (one per ray), got " + std::to_string(j.size()));
  Divisor d;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_string()) fail(w, "expected a string \"p/q\"");
    d.push_back(parse_rational(j[i].get<std::string>(), w));
  }
  return d;
}

json parse_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError(p.string() + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw InputError(p.string() + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

Fan resolve_fan(const json& ref, const std::filesystem::path& base, const std::string& where) {
  return resolve(ref, base, where).fan;
}

DivisorFile divisor_from_json(const json& j, const std::filesystem::path& base) {
  DivisorFile d;
  d.fan_ref = member(j, "fan", "divisor");
  const Loaded l = resolve(d.fan_ref, base, "divisor.fan");
  d.fan = l.fan;
  d.coeffs = aligned(member(j, "coeffs", "divisor"), l, "divisor.coeffs");
  if (d.fan_ref.is_object()) d.fan_ref = fan_to_json(d.fan);
  return d;
}

json divisor_to_json(const DivisorFile& d) {
  json j;
  j["fan"] = d.fan_ref;
  j["coeffs"] = coeffs_to_json(d.coeffs);
  return j;
}

Instance instance_from_json(const json& j, const std::filesystem::path& base, const std::string& label) {
  Instance inst;
  inst.label = label;
  if (j.is_object() && j.contains("label")) {
    if (!j["label"].is_string()) fail(label, "label must be a string");
    inst.label = j["label"].get<std::string>();
  }
  const std::string w = inst.label.empty() ? "instance" : inst.label;
  const Loaded l = resolve(member(j, "fan", w), base, w + ".fan");
  inst.x = l.fan;
  inst.b = aligned(member(j, "B", w), l, w + ".B");
  inst.d = aligned(member(j, "D", w), l, w + ".D");
  if (!is_integral(inst.d)) fail(w + ".D", "D must be integral");
  const json& mode = member(j, "mode", w);
  if (!mode.is_number_integer() || (mode.get<long>() != 1 && mode.get<long>() != 2)) fail(w + ".mode", "expected 1 or 2");
  inst.mode = mode.get<int>();
  if (j.contains("witness")) {
    const json& ws = j["witness"];
    if (!ws.is_array()) fail(w + ".witness", "expected an array");
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const std::string wi = w + ".witness[" + std::to_string(i) + "]";
      const json& q = member(ws[i], "q", wi);
      if (!q.is_string()) fail(wi + ".q", "expected a string \"p/q\"");
      inst.witness.push_back({parse_rational(q.get<std::string>(), wi + ".q"),
                              intvec_from_json(member(ws[i], "m", wi), inst.x.rank, wi + ".m")});
    }
  }
  return inst;
}

json instance_to_json(const Instance& inst) {
  json j;
  j["fan"] = fan_to_json(inst.x);
  j["B"] = coeffs_to_json(inst.b);
  j["D"] = coeffs_to_json(inst.d);
  j["mode"] = inst.mode;
  if (!inst.witness.empty()) {
    json ws = json::array();
    for (const auto& w : inst.witness) {
      json e;
      e["q"] = format_rational(w.q);
      json m = json::array();
      for (const auto& c : w.m) m.push_back(int_to_json(c));
      e["m"] = std::move(m);
      ws.push_back(std::move(e));
    }
    j["witness"] = std::move(ws);
  }
  if (!inst.label.empty()) j["label"] = inst.label;
  return j;
}

std::vector<Instance> load_instances(const std::filesystem::path& p) {
  json j = parse_file(p);
  const auto base = p.parent_path();
  const std::string stem = p.stem().string();
  std::vector<Instance> out;
  const json* list = nullptr;
  if (j.is_array())
    list = &j;
  else if (j.is_object() && j.contains("instances"))
    list = &j["instances"];
  if (!list) {
    out.push_back(instance_from_json(j, base, stem));
    return out;
  }
  if (!list->is_array()) fail(p.string() + ".instances", "expected an array");
  for (std::size_t i = 0; i < list->size(); ++i)
    out.push_back(instance_from_json((*list)[i], base, stem + "#" + std::to_string(i)));
  return out;
}

std::string field_key(Field f) { return f.p == 0 ? "q" : "f" + std::to_string(f.p); }

json field_dims_to_json(const FieldDims& d) {
  json j = json::object();
  for (const auto& [f, dims] : d) {
    json a = json::array();
    for (const auto& v : dims) a.push_back(int_to_json(v));
    j[field_key(f)] = std::move(a);
  }
  return j;
}

json steps_to_json(const std::vector<StepRecord>& steps) {
  json a = json::array();
  for (const auto& s : steps) {
    json j;
    const bool flip = s.kind == StepCertificate::Kind::Flip;
    j["kind"] = flip ? "flip" : "divisorial";
    json wall = json::array();
    for (const auto& u : s.wall) {
      json r = json::array();
      for (const auto& c : u) r.push_back(int_to_json(c));
      wall.push_back(std::move(r));
    }
    j["wall"] = std::move(wall);
    json e = json::array();
    for (const auto& c : s.cert.exceptional) e.push_back(int_to_json(c));
    j["exceptional"] = std::move(e);
    j["a"] = format_rational(s.cert.a);
    if (flip) {
      j["b"] = format_rational(s.cert.b);
      j["c"] = format_rational(s.cert.c);
      j["case"] = s.cert.flip_case == StepCertificate::Case::Low ? "Low" : "High";
      j["m_shift"] = int_to_json(s.cert.m_shift);
    }
    if (!s.dims_after.empty()) j["dims"] = field_dims_to_json(s.dims_after);
    if (!s.vanishing_after.empty()) {
      json v = json::object();
      for (const auto& [f, ok] : s.vanishing_after) v[field_key(f)] = ok;
      j["vanishing"] = std::move(v);
    }
    j["ok"] = s.ok;
    a.push_back(std::move(j));
  }
  return a;
}

json verdict_to_json(const Verdict& v, const std::string& status) {
  json j;
  j["status"] = status;
  j["kind"] = v.kind;
  j["hypothesis_ok"] = v.hypothesis_ok;
  json van = json::object();
  for (const auto& [f, ok] : v.vanishing) van[field_key(f)] = ok;
  j["vanishing"] = std::move(van);
  if (!v.end.empty()) j["mmp_end"] = v.end;
  j["failures"] = v.failures;
  j["notes"] = v.notes;
  return j;
}

json report_to_json(const SuiteResult& r) {
  json inst = json::array();
  for (const auto& rec : r.records) {
    json j;
    j["label"] = rec.label;
    j["verdict"] = verdict_to_json(rec.verdict, rec.status);
    j["dims"] = field_dims_to_json(rec.verdict.dims);
    j["mmp"] = steps_to_json(rec.verdict.steps);
    inst.push_back(std::move(j));
  }
  json j;
  j["instances"] = std::move(inst);
  return j;
}

}  // namespace kv::io
