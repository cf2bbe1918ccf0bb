#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "kv/verify.hpp"

namespace kv::io {

using json = nlohmann::ordered_json;

/// "p/q" or "p"; throws InputError ("denominator must be positive", ...).
Rat parse_rational(const std::string& s, const std::string& where);
std::string format_rational(const Rat& q);

json fan_to_json(const Fan& f);
/// Canonicalizes; rays must be nonzero and primitive.
Fan fan_from_json(const json& j, const std::string& where = "fan");

json coeffs_to_json(const Divisor& d);
Divisor coeffs_from_json(const json& j, std::size_t n, const std::string& where);

/// A fan given inline or as a path relative to base.
Fan resolve_fan(const json& ref, const std::filesystem::path& base, const std::string& where);

struct DivisorFile {
  json fan_ref;  ///< as written (path string or inline object)
  Fan fan;
  Divisor coeffs;
};
DivisorFile divisor_from_json(const json& j, const std::filesystem::path& base);
json divisor_to_json(const DivisorFile& d);

Instance instance_from_json(const json& j, const std::filesystem::path& base, const std::string& label);
json instance_to_json(const Instance& inst);

/// A file holding one instance, a list of instances, or {"instances": [...]}.
std::vector<Instance> load_instances(const std::filesystem::path& p);

json parse_file(const std::filesystem::path& p);
/// Two-space indented JSON with a trailing newline.
std::string dump(const json& j);

json field_dims_to_json(const FieldDims& d);
json report_to_json(const SuiteResult& r);
json verdict_to_json(const Verdict& v, const std::string& status);
json steps_to_json(const std::vector<StepRecord>& steps);
std::string field_key(Field f);

}  // namespace kv::io
