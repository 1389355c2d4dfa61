#include "vinolab/io.hpp"

#include <limits>

namespace vinolab {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw ConfigInvalid("spec: " + what); }

std::int64_t get_int(const json& j, const char* key) {
  if (!j.contains(key)) invalid(std::string("missing \"") + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_number_integer()) invalid(std::string("\"") + key + "\" must be an integer");
  return v.get<std::int64_t>();
}

}  // namespace

BigInt bigint_from_json(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    const std::size_t digits_from = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (s.size() == digits_from || s.find_first_not_of("0123456789", digits_from) != std::string::npos)
      invalid("\"" + s + "\" is not a decimal integer");
    return BigInt(s);
  }
  invalid("expected an integer or a decimal string");
}

json bigint_to_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();
}

json spec_to_json(const SystemSpec& spec) {
  json j;
  j["exponent_set"] = spec.exponents.values();
  j["blocks"] = json::array();
  for (const auto& b : spec.blocks) {
    json jb;
    jb["count"] = b.count;
    jb["interval"] = {{"start", b.interval.start}, {"length", b.interval.length}};
    jb["sign"] = b.sign;
    if (b.residue) jb["residue"] = {{"modulus", b.residue->modulus}, {"class", b.residue->residue}};
    if (b.distinct_mod) jb["distinct_mod"] = *b.distinct_mod;
    if (b.coefficients) jb["coefficients"] = *b.coefficients;
    j["blocks"].push_back(jb);
  }
  if (spec.target) {
    j["target"] = json::array();
    for (const auto& c : spec.target->components) j["target"].push_back(bigint_to_json(c));
  }
  return j;
}

SystemSpec spec_from_json(const json& j) {
  if (!j.is_object()) invalid("expected an object");
  SystemSpec spec;
  const char* ekey = j.contains("exponent_set") ? "exponent_set" : "E";
  if (!j.contains(ekey) || !j.at(ekey).is_array()) invalid("\"exponent_set\" must be an array");
  try {
    spec.exponents = ExponentSet(j.at(ekey).get<std::vector<int>>());
  } catch (const json::exception& e) {
    invalid(std::string("\"exponent_set\": ") + e.what());
  }
  if (!j.contains("blocks") || !j.at("blocks").is_array()) invalid("\"blocks\" must be an array");
  for (const auto& jb : j.at("blocks")) {
    if (!jb.is_object()) invalid("each block must be an object");
    VariableBlock b;
    b.count = static_cast<int>(get_int(jb, "count"));
    if (!jb.contains("interval") || !jb.at("interval").is_object()) invalid("block needs an \"interval\" object");
    b.interval = {get_int(jb.at("interval"), "start"), get_int(jb.at("interval"), "length")};
    if (jb.contains("sign")) b.sign = static_cast<int>(get_int(jb, "sign"));
    if (jb.contains("residue")) {
      const auto& r = jb.at("residue");
      if (!r.is_object()) invalid("\"residue\" must be an object");
      b.residue = ResidueClass{get_int(r, "modulus"), get_int(r, "class")};
    }
    if (jb.contains("distinct_mod")) b.distinct_mod = get_int(jb, "distinct_mod");
    if (jb.contains("coefficients")) {
      try {
        b.coefficients = jb.at("coefficients").get<std::vector<std::int64_t>>();
      } catch (const json::exception& e) {
        invalid(std::string("\"coefficients\": ") + e.what());
      }
    }
    spec.blocks.push_back(std::move(b));
  }
  if (j.contains("target")) {
    if (!j.at("target").is_array()) invalid("\"target\" must be an array");
    PowerSumVector t;
    for (const auto& c : j.at("target")) t.components.push_back(bigint_from_json(c));
    spec.target = std::move(t);
  }
  spec.validate();
  return spec;
}

SystemSpec spec_from_json_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    invalid(e.what());
  }
  return spec_from_json(j);
}

std::string count_csv_row(const std::string& spec_id, int s, int k, std::int64_t start, std::int64_t length,
                          const Count& count) {
  return spec_id + "," + std::to_string(s) + "," + std::to_string(k) + "," + std::to_string(start) + "," +
         std::to_string(length) + "," + count.str();
}

}  // namespace vinolab
