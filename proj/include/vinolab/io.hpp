#pragma once

// JSON form of SystemSpec and the CSV row format for counts.

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "vinolab/counting.hpp"

namespace vinolab {

/// {"exponent_set": [...], "blocks": [{"count", "interval": {"start",
/// "length"}, "sign", "residue": {"modulus", "class"}, "distinct_mod",
/// "coefficients"}], "target": [...]}. Optional members are omitted when
/// absent; target components beyond 64 bits are decimal strings.
nlohmann::json spec_to_json(const SystemSpec& spec);
/// Inverse of spec_to_json; also accepts "E" for "exponent_set" and
/// defaults sign to +1. Throws ConfigInvalid on malformed input and
/// InvalidArgument if the resulting spec fails validation.
SystemSpec spec_from_json(const nlohmann::json& j);
SystemSpec spec_from_json_text(std::string_view text);

inline constexpr const char* kCountCsvHeader = "spec_id,s,k,start,length,count";

/// One `spec_id,s,k,start,length,count` row (no newline).
std::string count_csv_row(const std::string& spec_id, int s, int k, std::int64_t start, std::int64_t length,
                          const Count& count);

/// Exact big integer from a JSON integer or decimal string.
BigInt bigint_from_json(const nlohmann::json& j);
nlohmann::json bigint_to_json(const BigInt& v);

}  // namespace vinolab
