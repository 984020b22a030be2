#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace pushlex {

using Int = std::int64_t;
using Real = double;
using IntVec = std::vector<Int>;

enum class ValueType { integer, real, boolean, string, int_vector };

// Runtime value carried on interpreter stacks, in training cases and in
// serialized genomes.
using Value = std::variant<Int, Real, bool, std::string, IntVec>;

ValueType type_of(const Value& v);
const char* type_name(ValueType t);
ValueType type_from_name(const std::string& name);

// Printable rendering. Reals use shortest round-trip formatting so that a
// printed value parses back to the identical double.
std::string render(const Value& v);
std::string render_real(Real x);

nlohmann::json value_to_json(const Value& v);

// Parses a JSON scalar/array as a value of the expected type. Throws
// Error(parse) when the JSON shape does not match.
Value value_from_json(const nlohmann::json& j, ValueType expected);

} // namespace pushlex
