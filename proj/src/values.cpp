#include "values.hpp"

#include <array>
#include <charconv>

#include "errors.hpp"

namespace pushlex {

ValueType type_of(const Value& v) {
    return static_cast<ValueType>(v.index());
}

const char* type_name(ValueType t) {
    switch (t) {
    case ValueType::integer: return "int";
    case ValueType::real: return "float";
    case ValueType::boolean: return "bool";
    case ValueType::string: return "string";
    case ValueType::int_vector: return "ints";
    }
    return "?";
}

ValueType type_from_name(const std::string& name) {
    for (ValueType t : {ValueType::integer, ValueType::real, ValueType::boolean,
                        ValueType::string, ValueType::int_vector}) {
        if (name == type_name(t)) return t;
    }
    fail(ErrorCode::parse, "unknown value type '" + name + "'");
}

std::string render_real(Real x) {
    std::array<char, 64> buf;
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), end);
}

std::string render(const Value& v) {
    switch (type_of(v)) {
    case ValueType::integer: return std::to_string(std::get<Int>(v));
    case ValueType::real: return render_real(std::get<Real>(v));
    case ValueType::boolean: return std::get<bool>(v) ? "true" : "false";
    case ValueType::string: return std::get<std::string>(v);
    case ValueType::int_vector: {
        const auto& xs = std::get<IntVec>(v);
        std::string out = "[";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) out += ' ';
            out += std::to_string(xs[i]);
        }
        out += ']';
        return out;
    }
    }
    return {};
}

nlohmann::json value_to_json(const Value& v) {
    switch (type_of(v)) {
    case ValueType::integer: return std::get<Int>(v);
    case ValueType::real: return std::get<Real>(v);
    case ValueType::boolean: return std::get<bool>(v);
    case ValueType::string: return std::get<std::string>(v);
    case ValueType::int_vector: return std::get<IntVec>(v);
    }
    return nullptr;
}

Value value_from_json(const nlohmann::json& j, ValueType expected) {
    switch (expected) {
    case ValueType::integer:
        if (!j.is_number_integer()) fail(ErrorCode::parse, "expected an integer");
        return j.get<Int>();
    case ValueType::real:
        if (!j.is_number()) fail(ErrorCode::parse, "expected a number");
        return j.get<Real>();
    case ValueType::boolean:
        if (!j.is_boolean()) fail(ErrorCode::parse, "expected a boolean");
        return j.get<bool>();
    case ValueType::string:
        if (!j.is_string()) fail(ErrorCode::parse, "expected a string");
        return j.get<std::string>();
    case ValueType::int_vector: {
        if (!j.is_array()) fail(ErrorCode::parse, "expected an array of integers");
        IntVec xs;
        xs.reserve(j.size());
        for (const auto& e : j) {
            if (!e.is_number_integer()) fail(ErrorCode::parse, "expected an array of integers");
            xs.push_back(e.get<Int>());
        }
        return xs;
    }
    }
    fail(ErrorCode::internal, "bad value type tag");
}

} // namespace pushlex
