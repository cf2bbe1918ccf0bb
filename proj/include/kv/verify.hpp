#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kv/cohomology.hpp"
#include "kv/mmp.hpp"

namespace kv {

/// Bad user input (files, schema, arguments). The CLI maps it to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// D - K - B = sum q_j div(m_j).
struct Witness {
  Rat q;
  IntVec m;
};

struct Instance {
  std::string label;
  Fan x;
  Divisor b;
  Divisor d;        ///< integral
  int mode = 2;     ///< 1: D ~ K + B with B big klt; 2: D - (K+B) nef and big, (X,B) klt
  std::vector<Witness> witness;
};

struct HypothesisCheck {
  bool ok = false;
  std::vector<std::string> reasons;  ///< why not
};

HypothesisCheck check_hypothesis(const Instance& inst);

struct CorpusParams {
  std::uint64_t seed = 42;
  std::size_t rank = 2;
  std::size_t max_rays = 12;
  std::size_t count = 5;
};

struct Corpus {
  std::vector<Instance> instances;
  std::vector<std::string> notes;  ///< skipped draws
};

/// Deterministic under the seed. Every fourth instance is mode 1.
Corpus gen_corpus(const CorpusParams& p);

using FieldDims = std::vector<std::pair<Field, std::vector<Int>>>;

struct StepRecord {
  StepCertificate::Kind kind = StepCertificate::Kind::Divisorial;
  std::vector<IntVec> wall;  ///< rays of the representative wall
  StepCertificate cert;
  FieldDims dims_after;      ///< complete models
  std::vector<std::pair<Field, bool>> vanishing_after;  ///< non-complete models
  bool ok = true;
};

struct Verdict {
  std::string kind;  ///< "kv", "mmp", "mfs", "flip", or joined with '+'
  bool hypothesis_ok = false;
  std::vector<std::pair<Field, bool>> vanishing;
  FieldDims dims;                 ///< h^0..h^rank on X (complete X only)
  std::vector<StepRecord> steps;
  std::string end;                ///< "nef", "mori-fibre-space" or empty
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  bool pass = false;
};

Verdict verify_kv(const Instance& inst, const std::vector<Field>& fields);
Verdict verify_mmp(const Instance& inst, const std::vector<Field>& fields);
/// f must come from contract() and be a fibration with D negative on r.
Verdict verify_mfs(const Fan& x, const Divisor& d, const ExtremalRay& r, const Contraction& f,
                   const std::vector<Field>& fields);
Verdict verify_flip_diagram(const Fan& x, const ExtremalRay& r, const Divisor& d, std::uint64_t seed);
/// kv and mmp on one instance, merged.
Verdict verify_instance(const Instance& inst, const std::vector<Field>& fields);

std::vector<Field> default_fields();  ///< Q, F2, F3, F5, F7

/// Exact self-checks on (x, d): SNF identity on the ray matrix, principal
/// divisors numerically trivial on every wall, nef via support function
/// agrees with nef via walls. Returns failure messages.
std::vector<std::string> arithmetic_checks(const Fan& x, const Divisor& d);

// ------------------------------------------------------------------ suite

struct SuiteParams {
  std::uint64_t seed = 42;
  std::vector<std::size_t> ranks{2, 3};
  std::size_t count = 36;
  std::size_t max_rays = 12;
  std::vector<Field> fields = default_fields();
  bool curated = true;
};

struct SuiteRecord {
  std::string label;
  Verdict verdict;
  bool control = false;  ///< negative control: expected to violate vanishing
  std::string status;    ///< "pass", "fail", "expected-fail"
};

struct SuiteResult {
  std::vector<SuiteRecord> records;
  std::vector<std::string> notes;
  bool all_ok = true;
};

/// Curated instances: examples with known behaviour plus the (P^2, K) control.
std::vector<std::pair<Instance, bool>> curated_instances();

SuiteResult run_suite(const SuiteParams& p, const std::vector<Instance>& extra = {});
std::string suite_table(const SuiteResult& r);

}  // namespace kv
