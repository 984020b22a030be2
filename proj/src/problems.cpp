#include "problems.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "errors.hpp"

namespace pushlex {

namespace {

template <typename Seq>
double levenshtein(const Seq& a, const Seq& b) {
    const std::size_t n = a.size(), m = b.size();
    if (n == 0) return static_cast<double>(m);
    if (m == 0) return static_cast<double>(n);
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        prev.swap(cur);
    }
    return static_cast<double>(prev[m]);
}

std::optional<Int> parse_full_int(const std::string& s) {
    if (s.empty()) return std::nullopt;
    Int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

std::optional<Real> parse_full_real(const std::string& s) {
    if (s.empty()) return std::nullopt;
    Real value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

std::optional<Value> extract_output(const MachineState& st, const ProblemSpec& p) {
    switch (p.channel) {
    case OutputChannel::printed_int: {
        auto v = parse_full_int(st.printed());
        if (!v) return std::nullopt;
        return Value(*v);
    }
    case OutputChannel::printed_float: {
        auto v = parse_full_real(st.printed());
        if (!v) return std::nullopt;
        return Value(*v);
    }
    case OutputChannel::bool_top:
        if (st.bools.empty()) return std::nullopt;
        return Value(st.bools.back() != 0);
    case OutputChannel::int_vector_top:
        if (st.vecs.empty()) return std::nullopt;
        return Value(st.vecs.back());
    }
    return std::nullopt;
}

// --- genome/pool construction helpers -------------------------------------

Gene instr_gene(std::string_view name, std::uint32_t closes = 0) {
    return Gene{instr(name), closes};
}

Gene lit_gene(Value v, std::uint32_t closes = 0) {
    return Gene{std::move(v), closes};
}

std::vector<InstrId> instrs(std::initializer_list<std::string_view> names) {
    std::vector<InstrId> ids;
    for (auto n : names) ids.push_back(instr(n));
    return ids;
}

GenePool::LiteralGen int_erc(Int lo, Int hi) {
    std::ostringstream name;
    name << "int[" << lo << "," << hi << "]";
    return {name.str(), [lo, hi](Rng& rng) { return Value(uniform_int_in(rng, lo, hi)); }};
}

GenePool::LiteralGen float_erc(Real lo, Real hi) {
    std::ostringstream name;
    name << "float[" << lo << "," << hi << "]";
    return {name.str(), [lo, hi](Rng& rng) { return Value(uniform_real_in(rng, lo, hi)); }};
}

GenePool::LiteralGen bool_erc() {
    return {"bool", [](Rng& rng) { return Value(bernoulli(rng, 0.5)); }};
}

GenePool::LiteralGen empty_vec_lit() {
    return {"[]", [](Rng&) { return Value(IntVec{}); }};
}

std::string random_lowercase(Rng& rng, std::size_t len) {
    std::string s(len, 'a');
    for (auto& ch : s) ch = static_cast<char>('a' + uniform_index(rng, 26));
    return s;
}

IntVec random_int_vec(Rng& rng, std::size_t len, Int lo, Int hi) {
    IntVec v(len);
    for (auto& x : v) x = uniform_int_in(rng, lo, hi);
    return v;
}

ProblemSpec with_budget(ProblemSpec p) {
    p.default_test_size = p.default_train_size * 10;
    p.execution_limit = static_cast<std::uint64_t>(p.default_train_size) * 1000 * 300;
    return p;
}

// --- the six in-scope problems ---------------------------------------------

ProblemSpec make_number_io() {
    ProblemSpec p;
    p.name = "number_io";
    p.description = "Given an integer and a float, print their sum as a float.";
    p.input_types = {ValueType::integer, ValueType::real};
    p.output_type = ValueType::real;
    p.channel = OutputChannel::printed_float;
    p.default_train_size = 25;
    p.pool.instructions =
        instrs({"in1", "in2", "float_add", "float_from_int", "print_float", "float_dup",
                "float_pop"});
    p.pool.literals = {float_erc(-100.0, 100.0), int_erc(-100, 100)};
    p.solution.genes = {instr_gene("in1"), instr_gene("float_from_int"), instr_gene("in2"),
                        instr_gene("float_add"), instr_gene("print_float")};
    // Inputs: integer uniform in [-100, 100], float uniform in [-100, 100).
    p.generate_inputs = [](Rng& rng) {
        return std::vector<Value>{Value(uniform_int_in(rng, -100, 100)),
                                  Value(uniform_real_in(rng, -100.0, 100.0))};
    };
    p.reference = [](std::span<const Value> in) {
        Real sum = static_cast<Real>(std::get<Int>(in[0])) + std::get<Real>(in[1]);
        return std::vector<Value>{Value(sum)};
    };
    return with_budget(std::move(p));
}

ProblemSpec make_smallest() {
    ProblemSpec p;
    p.name = "smallest";
    p.description = "Given four integers, print the smallest.";
    p.input_types = {ValueType::integer, ValueType::integer, ValueType::integer,
                     ValueType::integer};
    p.output_type = ValueType::integer;
    p.channel = OutputChannel::printed_int;
    p.default_train_size = 100;
    p.pool.instructions = instrs({"in1", "in2", "in3", "in4", "int_min", "int_max", "int_dup",
                                  "int_swap", "int_pop", "print_int"});
    p.pool.literals = {int_erc(-100, 100)};
    p.solution.genes = {instr_gene("in1"), instr_gene("in2"), instr_gene("int_min"),
                        instr_gene("in3"), instr_gene("int_min"), instr_gene("in4"),
                        instr_gene("int_min"), instr_gene("print_int")};
    // Inputs: four integers uniform in [-100, 100].
    p.generate_inputs = [](Rng& rng) {
        std::vector<Value> in;
        for (int i = 0; i < 4; ++i) in.emplace_back(uniform_int_in(rng, -100, 100));
        return in;
    };
    p.reference = [](std::span<const Value> in) {
        Int best = std::get<Int>(in[0]);
        for (const Value& v : in) best = std::min(best, std::get<Int>(v));
        return std::vector<Value>{Value(best)};
    };
    return with_budget(std::move(p));
}

ProblemSpec make_median() {
    ProblemSpec p;
    p.name = "median";
    p.description = "Given three integers, print the median.";
    p.input_types = {ValueType::integer, ValueType::integer, ValueType::integer};
    p.output_type = ValueType::integer;
    p.channel = OutputChannel::printed_int;
    p.default_train_size = 100;
    p.pool.instructions = instrs({"in1", "in2", "in3", "int_min", "int_max", "int_lt", "int_dup",
                                  "int_swap", "int_rot", "int_pop", "print_int"});
    p.pool.literals = {int_erc(-100, 100)};
    p.solution.genes = {instr_gene("in1"), instr_gene("in2"), instr_gene("int_min"),
                        instr_gene("in1"), instr_gene("in2"), instr_gene("int_max"),
                        instr_gene("in3"), instr_gene("int_min"), instr_gene("int_max"),
                        instr_gene("print_int")};
    // Inputs: three integers uniform in [-100, 100].
    p.generate_inputs = [](Rng& rng) {
        std::vector<Value> in;
        for (int i = 0; i < 3; ++i) in.emplace_back(uniform_int_in(rng, -100, 100));
        return in;
    };
    p.reference = [](std::span<const Value> in) {
        std::array<Int, 3> xs{std::get<Int>(in[0]), std::get<Int>(in[1]), std::get<Int>(in[2])};
        std::sort(xs.begin(), xs.end());
        return std::vector<Value>{Value(xs[1])};
    };
    return with_budget(std::move(p));
}

ProblemSpec make_mirror_image() {
    ProblemSpec p;
    p.name = "mirror_image";
    p.description = "Given two integer vectors, answer whether the second is the reverse of the "
                    "first (boolean stack).";
    p.input_types = {ValueType::int_vector, ValueType::int_vector};
    p.output_type = ValueType::boolean;
    p.channel = OutputChannel::bool_top;
    p.default_train_size = 100;
    p.pool.instructions =
        instrs({"in1", "in2", "vec_reverse", "vec_eq", "vec_dup", "vec_pop", "bool_not"});
    p.pool.literals = {bool_erc()};
    p.solution.genes = {instr_gene("in1"), instr_gene("in2"), instr_gene("vec_reverse"),
                        instr_gene("vec_eq")};
    // Inputs: two vectors of equal length uniform in [0, 12], elements in
    // [-50, 50]; 40% mirrored pairs, 10% near misses, 50% independent pairs.
    p.generate_inputs = [](Rng& rng) {
        std::size_t len = uniform_index(rng, 13);
        IntVec a = random_int_vec(rng, len, -50, 50);
        double u = uniform_real_01(rng);
        IntVec b;
        if (u < 0.4 || (u < 0.5 && len == 0)) {
            b.assign(a.rbegin(), a.rend());
        } else if (u < 0.5) {
            b.assign(a.rbegin(), a.rend());
            std::size_t at = uniform_index(rng, len);
            b[at] += uniform_int_in(rng, 1, 10);
        } else {
            b = random_int_vec(rng, len, -50, 50);
        }
        return std::vector<Value>{Value(std::move(a)), Value(std::move(b))};
    };
    p.reference = [](std::span<const Value> in) {
        const auto& a = std::get<IntVec>(in[0]);
        IntVec rb = std::get<IntVec>(in[1]);
        std::reverse(rb.begin(), rb.end());
        return std::vector<Value>{Value(a == rb)};
    };
    return with_budget(std::move(p));
}

ProblemSpec make_negative_to_zero() {
    ProblemSpec p;
    p.name = "negative_to_zero";
    p.description = "Given an integer vector, produce it with every negative element replaced by "
                    "zero (integer-vector stack).";
    p.input_types = {ValueType::int_vector};
    p.output_type = ValueType::int_vector;
    p.channel = OutputChannel::int_vector_top;
    p.default_train_size = 200;
    p.pool.instructions = instrs({"in1", "exec_do_vector", "vec_conj", "vec_reverse", "vec_dup",
                                  "int_max", "int_min", "int_pop"});
    p.pool.literals = {int_erc(-100, 100), empty_vec_lit()};
    p.solution.genes = {lit_gene(Value(IntVec{})), instr_gene("in1"),
                        instr_gene("exec_do_vector"), lit_gene(Value(Int(0))),
                        instr_gene("int_max"), instr_gene("vec_conj", 1)};
    // Inputs: one vector of length uniform in [0, 12], elements in [-100, 100].
    p.generate_inputs = [](Rng& rng) {
        std::size_t len = uniform_index(rng, 13);
        return std::vector<Value>{Value(random_int_vec(rng, len, -100, 100))};
    };
    p.reference = [](std::span<const Value> in) {
        IntVec out = std::get<IntVec>(in[0]);
        for (Int& x : out) x = std::max<Int>(x, 0);
        return std::vector<Value>{Value(std::move(out))};
    };
    return with_budget(std::move(p));
}

ProblemSpec make_compare_string_lengths() {
    ProblemSpec p;
    p.name = "compare_string_lengths";
    p.description = "Given three strings, answer whether their lengths are strictly increasing "
                    "(boolean stack).";
    p.input_types = {ValueType::string, ValueType::string, ValueType::string};
    p.output_type = ValueType::boolean;
    p.channel = OutputChannel::bool_top;
    p.default_train_size = 100;
    p.pool.instructions = instrs({"in1", "in2", "in3", "str_length", "int_lt", "bool_and",
                                  "bool_or", "bool_not", "int_dup", "int_swap", "str_dup",
                                  "str_pop"});
    p.pool.literals = {bool_erc(), int_erc(-10, 10)};
    p.solution.genes = {instr_gene("in1"),       instr_gene("str_length"), instr_gene("in2"),
                        instr_gene("str_length"), instr_gene("int_lt"),     instr_gene("in2"),
                        instr_gene("str_length"), instr_gene("in3"),        instr_gene("str_length"),
                        instr_gene("int_lt"),     instr_gene("bool_and")};
    // Inputs: three lowercase strings; half the cases are built with strictly
    // increasing lengths so the two boolean classes stay balanced, the rest
    // draw lengths independently from [0, 10].
    p.generate_inputs = [](Rng& rng) {
        std::size_t l1, l2, l3;
        if (bernoulli(rng, 0.5)) {
            l1 = uniform_index(rng, 7);
            l2 = l1 + 1 + uniform_index(rng, 4);
            l3 = l2 + 1 + uniform_index(rng, 4);
        } else {
            l1 = uniform_index(rng, 11);
            l2 = uniform_index(rng, 11);
            l3 = uniform_index(rng, 11);
        }
        return std::vector<Value>{Value(random_lowercase(rng, l1)),
                                  Value(random_lowercase(rng, l2)),
                                  Value(random_lowercase(rng, l3))};
    };
    p.reference = [](std::span<const Value> in) {
        std::size_t l1 = std::get<std::string>(in[0]).size();
        std::size_t l2 = std::get<std::string>(in[1]).size();
        std::size_t l3 = std::get<std::string>(in[2]).size();
        return std::vector<Value>{Value(l1 < l2 && l2 < l3)};
    };
    return with_budget(std::move(p));
}

const std::vector<ProblemSpec>& registry() {
    static const std::vector<ProblemSpec> problems = [] {
        std::vector<ProblemSpec> ps;
        ps.push_back(make_number_io());
        ps.push_back(make_smallest());
        ps.push_back(make_median());
        ps.push_back(make_mirror_image());
        ps.push_back(make_negative_to_zero());
        ps.push_back(make_compare_string_lengths());
        return ps;
    }();
    return problems;
}

std::string inputs_key(const std::vector<Value>& inputs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Value& v : inputs) arr.push_back(value_to_json(v));
    return arr.dump();
}

} // namespace

std::vector<std::string> problem_names() {
    std::vector<std::string> names;
    for (const auto& p : registry()) names.push_back(p.name);
    return names;
}

const ProblemSpec& problem(const std::string& name) {
    for (const auto& p : registry())
        if (p.name == name) return p;
    fail(ErrorCode::unknown_name, "unknown problem '" + name + "'");
}

CaseSet make_cases(const ProblemSpec& p, std::size_t n, CaseRole role, Rng& rng) {
    if (n < 1) fail(ErrorCode::invalid_argument, "case count must be >= 1");
    CaseSet cs;
    cs.role = role;
    cs.cases.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        TrainingCase c;
        c.inputs = p.generate_inputs(rng);
        c.expected = p.reference(c.inputs);
        cs.cases.push_back(std::move(c));
    }
    return cs;
}

CaseSet make_test_avoiding(const ProblemSpec& p, std::size_t n_test, const CaseSet& avoid,
                           Rng& rng) {
    std::unordered_set<std::string> seen;
    for (const auto& c : avoid.cases) seen.insert(inputs_key(c.inputs));
    CaseSet test;
    test.role = CaseRole::test;
    std::size_t attempts = 0, max_attempts = 1000 * (n_test + 1);
    while (test.cases.size() < n_test) {
        if (++attempts > max_attempts)
            fail(ErrorCode::internal, "could not draw a test set disjoint from training inputs");
        TrainingCase c;
        c.inputs = p.generate_inputs(rng);
        if (seen.contains(inputs_key(c.inputs))) continue;
        c.expected = p.reference(c.inputs);
        test.cases.push_back(std::move(c));
    }
    return test;
}

std::pair<CaseSet, CaseSet> make_train_test(const ProblemSpec& p, std::size_t n_train,
                                            std::size_t n_test, Rng& rng) {
    CaseSet train = make_cases(p, n_train, CaseRole::train, rng);
    CaseSet test = make_test_avoiding(p, n_test, train, rng);
    return {std::move(train), std::move(test)};
}

double case_error(const Value* actual, const Value& expected, double penalty) {
    if (actual == nullptr) return penalty;
    if (type_of(*actual) != type_of(expected)) return penalty;
    switch (type_of(expected)) {
    case ValueType::integer: {
        double d = std::abs(static_cast<double>(std::get<Int>(*actual)) -
                            static_cast<double>(std::get<Int>(expected)));
        return std::min(d, penalty);
    }
    case ValueType::real: {
        double a = std::get<Real>(*actual);
        if (!std::isfinite(a)) return penalty;
        double d = std::abs(a - std::get<Real>(expected));
        if (std::isnan(d)) return penalty;
        return std::min(d, penalty);
    }
    case ValueType::boolean:
        return std::get<bool>(*actual) == std::get<bool>(expected) ? 0.0 : 1.0;
    case ValueType::string:
        return levenshtein(std::get<std::string>(*actual), std::get<std::string>(expected));
    case ValueType::int_vector:
        return levenshtein(std::get<IntVec>(*actual), std::get<IntVec>(expected));
    }
    return penalty;
}

double evaluate_with(Interpreter& interp, const Program& program, const TrainingCase& c,
                     const ProblemSpec& p, std::uint64_t step_limit) {
    const MachineState& st = interp.run(program, c.inputs, step_limit);
    std::optional<Value> out = extract_output(st, p);
    return case_error(out ? &*out : nullptr, c.expected[0]);
}

double evaluate(const Program& program, const TrainingCase& c, const ProblemSpec& p,
                std::uint64_t step_limit) {
    Interpreter interp;
    return evaluate_with(interp, program, c, p, step_limit);
}

namespace {

TrainingCase case_from_json(const nlohmann::json& j, const ProblemSpec& p, std::size_t case_no) {
    auto here = [&](const std::string& msg) {
        fail(ErrorCode::parse, "case " + std::to_string(case_no) + ": " + msg);
    };
    if (!j.is_object()) here("expected an object");
    for (const auto& [key, _] : j.items())
        if (key != "inputs" && key != "output") here("unknown key '" + key + "'");
    if (!j.contains("inputs") || !j.contains("output")) here("missing 'inputs' or 'output'");
    const auto& jin = j.at("inputs");
    const auto& jout = j.at("output");
    if (!jin.is_array() || jin.size() != p.input_types.size())
        here("expected " + std::to_string(p.input_types.size()) + " inputs");
    if (!jout.is_array() || jout.size() != 1) here("expected 1 output value");
    TrainingCase c;
    try {
        for (std::size_t i = 0; i < p.input_types.size(); ++i)
            c.inputs.push_back(value_from_json(jin[i], p.input_types[i]));
        c.expected.push_back(value_from_json(jout[0], p.output_type));
    } catch (const Error& e) {
        here(e.what());
    }
    return c;
}

} // namespace

CaseSet load_cases(const std::string& path, const ProblemSpec& p) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot open dataset file '" + path + "'");
    CaseSet cs;
    cs.role = CaseRole::train;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            fail(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": invalid JSON");
        cs.cases.push_back(case_from_json(j, p, cs.cases.size() + 1));
    }
    if (cs.cases.empty()) fail(ErrorCode::parse, path + ": dataset contains no cases");
    return cs;
}

std::string cases_to_jsonl(const CaseSet& cs) {
    std::string out;
    for (const auto& c : cs.cases) {
        nlohmann::json jin = nlohmann::json::array();
        for (const Value& v : c.inputs) jin.push_back(value_to_json(v));
        nlohmann::json jout = nlohmann::json::array();
        for (const Value& v : c.expected) jout.push_back(value_to_json(v));
        nlohmann::json j{{"inputs", std::move(jin)}, {"output", std::move(jout)}};
        out += j.dump();
        out += '\n';
    }
    return out;
}

void save_cases(const CaseSet& cs, std::ostream& out) { out << cases_to_jsonl(cs); }

} // namespace pushlex
