#include "vm.hpp"

#include <algorithm>
#include <array>

#include "errors.hpp"

namespace pushlex {

namespace {

enum Op : InstrId {
    op_exec_noop,
    op_exec_if,
    op_exec_dup,
    op_exec_pop,
    op_exec_y,
    op_exec_do_vector,

    op_int_add,
    op_int_sub,
    op_int_mult,
    op_int_div,
    op_int_mod,
    op_int_min,
    op_int_max,
    op_int_lt,
    op_int_dup,
    op_int_swap,
    op_int_rot,
    op_int_pop,

    op_float_add,
    op_float_sub,
    op_float_mult,
    op_float_div,
    op_float_lt,
    op_float_dup,
    op_float_pop,
    op_float_from_int,

    op_bool_and,
    op_bool_or,
    op_bool_not,
    op_bool_dup,
    op_bool_pop,

    op_str_length,
    op_str_concat,
    op_str_take,
    op_str_reverse,
    op_str_first,
    op_str_dup,
    op_str_pop,

    op_vec_length,
    op_vec_reverse,
    op_vec_conj,
    op_vec_eq,
    op_vec_dup,
    op_vec_pop,

    op_print_int,
    op_print_float,
    op_print_bool,
    op_print_str,

    op_in1,
    op_in2,
    op_in3,
    op_in4,

    op_count_,
};

constexpr std::array<InstructionInfo, op_count_> kTable{{
    {"exec_noop", 0, "", ""},
    {"exec_if", 2, "bool exec exec", "exec"},
    {"exec_dup", 1, "exec", "exec exec"},
    {"exec_pop", 1, "exec", ""},
    {"exec_y", 1, "exec", "exec exec"},
    {"exec_do_vector", 1, "ints exec", "exec"},

    {"int_add", 0, "int int", "int"},
    {"int_sub", 0, "int int", "int"},
    {"int_mult", 0, "int int", "int"},
    {"int_div", 0, "int int", "int"},
    {"int_mod", 0, "int int", "int"},
    {"int_min", 0, "int int", "int"},
    {"int_max", 0, "int int", "int"},
    {"int_lt", 0, "int int", "bool"},
    {"int_dup", 0, "int", "int int"},
    {"int_swap", 0, "int int", "int int"},
    {"int_rot", 0, "int int int", "int int int"},
    {"int_pop", 0, "int", ""},

    {"float_add", 0, "float float", "float"},
    {"float_sub", 0, "float float", "float"},
    {"float_mult", 0, "float float", "float"},
    {"float_div", 0, "float float", "float"},
    {"float_lt", 0, "float float", "bool"},
    {"float_dup", 0, "float", "float float"},
    {"float_pop", 0, "float", ""},
    {"float_from_int", 0, "int", "float"},

    {"bool_and", 0, "bool bool", "bool"},
    {"bool_or", 0, "bool bool", "bool"},
    {"bool_not", 0, "bool", "bool"},
    {"bool_dup", 0, "bool", "bool bool"},
    {"bool_pop", 0, "bool", ""},

    {"str_length", 0, "string", "int"},
    {"str_concat", 0, "string string", "string"},
    {"str_take", 0, "int string", "string"},
    {"str_reverse", 0, "string", "string"},
    {"str_first", 0, "string", "string"},
    {"str_dup", 0, "string", "string string"},
    {"str_pop", 0, "string", ""},

    {"vec_length", 0, "ints", "int"},
    {"vec_reverse", 0, "ints", "ints"},
    {"vec_conj", 0, "int ints", "ints"},
    {"vec_eq", 0, "ints ints", "bool"},
    {"vec_dup", 0, "ints", "ints ints"},
    {"vec_pop", 0, "ints", ""},

    {"print_int", 0, "int", ""},
    {"print_float", 0, "float", ""},
    {"print_bool", 0, "bool", ""},
    {"print_str", 0, "string", ""},

    {"in1", 0, "", "input 1"},
    {"in2", 0, "", "input 2"},
    {"in3", 0, "", "input 3"},
    {"in4", 0, "", "input 4"},
}};

// Growth caps keep degenerate evolved loops (dup+concat doubling) bounded.
constexpr std::size_t kMaxStringLen = 10000;
constexpr std::size_t kMaxOutputChars = 65536;

inline Int wrap_add(Int a, Int b) {
    return static_cast<Int>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
inline Int wrap_sub(Int a, Int b) {
    return static_cast<Int>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}
inline Int wrap_mul(Int a, Int b) {
    return static_cast<Int>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

struct ExecEntry {
    enum class Kind : std::uint8_t { instr, lit, list, y_cont, vec_iter };
    Kind kind;
    InstrId id = 0;
    const Value* lit = nullptr;
    const NodeList* list = nullptr;
    std::uint32_t slot = 0;
    std::uint32_t pos = 0;
};

ExecEntry entry_for(const Node& n) {
    ExecEntry e{ExecEntry::Kind::instr};
    switch (n.data.index()) {
    case 0:
        e.kind = ExecEntry::Kind::instr;
        e.id = std::get<InstrId>(n.data);
        break;
    case 1:
        e.kind = ExecEntry::Kind::lit;
        e.lit = &std::get<Value>(n.data);
        break;
    default:
        e.kind = ExecEntry::Kind::list;
        e.list = &std::get<NodeList>(n.data);
        break;
    }
    return e;
}

class Machine {
  public:
    Machine(MachineState& state, std::span<const Value> inputs) : s(state), inputs_(inputs) {}

    void load(const Program& program) {
        // Inputs are pre-pushed in order: the first input is deepest.
        for (const Value& v : inputs_) push_value(v);
        for (auto it = program.body.rbegin(); it != program.body.rend(); ++it)
            exec_.push_back(entry_for(*it));
    }

    void run(std::uint64_t step_limit) {
        while (!exec_.empty() && s.steps_taken < step_limit) {
            ExecEntry e = exec_.back();
            exec_.pop_back();
            ++s.steps_taken;
            step(e);
        }
        s.hit_step_limit = !exec_.empty();
    }

  private:
    MachineState& s;
    std::span<const Value> inputs_;
    std::vector<ExecEntry> exec_;
    std::vector<ExecEntry> y_arena_;
    std::vector<std::pair<ExecEntry, IntVec>> iter_arena_;
    std::size_t output_chars_ = 0;

    void push_value(const Value& v) {
        switch (type_of(v)) {
        case ValueType::integer: s.ints.push_back(std::get<Int>(v)); break;
        case ValueType::real: s.reals.push_back(std::get<Real>(v)); break;
        case ValueType::boolean: s.bools.push_back(std::get<bool>(v) ? 1 : 0); break;
        case ValueType::string: s.strings.push_back(std::get<std::string>(v)); break;
        case ValueType::int_vector: s.vecs.push_back(std::get<IntVec>(v)); break;
        }
    }

    void emit(std::string text) {
        if (output_chars_ + text.size() > kMaxOutputChars) return;
        output_chars_ += text.size();
        s.output.push_back(std::move(text));
    }

    void step(const ExecEntry& e) {
        switch (e.kind) {
        case ExecEntry::Kind::lit: push_value(*e.lit); return;
        case ExecEntry::Kind::list:
            for (auto it = e.list->rbegin(); it != e.list->rend(); ++it)
                exec_.push_back(entry_for(*it));
            return;
        case ExecEntry::Kind::y_cont:
            exec_.push_back(e);
            exec_.push_back(y_arena_[e.slot]);
            return;
        case ExecEntry::Kind::vec_iter: {
            const auto& [body, vec] = iter_arena_[e.slot];
            if (e.pos < vec.size()) {
                s.ints.push_back(vec[e.pos]);
                ExecEntry next = e;
                ++next.pos;
                exec_.push_back(next);
                exec_.push_back(body);
            }
            return;
        }
        case ExecEntry::Kind::instr: dispatch(e.id); return;
        }
    }

    // Every instruction is total: with insufficient arguments it leaves the
    // state unchanged.
    void dispatch(InstrId id) {
        auto& ints = s.ints;
        auto& reals = s.reals;
        auto& bools = s.bools;
        auto& strings = s.strings;
        auto& vecs = s.vecs;
        switch (static_cast<Op>(id)) {
        case op_exec_noop: return;
        case op_exec_if: {
            if (bools.empty() || exec_.size() < 2) return;
            bool b = bools.back() != 0;
            bools.pop_back();
            ExecEntry t = exec_.back();
            exec_.pop_back();
            ExecEntry f = exec_.back();
            exec_.pop_back();
            exec_.push_back(b ? t : f);
            return;
        }
        case op_exec_dup:
            if (!exec_.empty()) exec_.push_back(exec_.back());
            return;
        case op_exec_pop:
            if (!exec_.empty()) exec_.pop_back();
            return;
        case op_exec_y: {
            if (exec_.empty()) return;
            ExecEntry body = exec_.back();
            exec_.pop_back();
            ExecEntry cont{ExecEntry::Kind::y_cont};
            cont.slot = static_cast<std::uint32_t>(y_arena_.size());
            y_arena_.push_back(body);
            exec_.push_back(cont);
            exec_.push_back(body);
            return;
        }
        case op_exec_do_vector: {
            if (vecs.empty() || exec_.empty()) return;
            ExecEntry body = exec_.back();
            exec_.pop_back();
            IntVec v = std::move(vecs.back());
            vecs.pop_back();
            ExecEntry iter{ExecEntry::Kind::vec_iter};
            iter.slot = static_cast<std::uint32_t>(iter_arena_.size());
            iter_arena_.emplace_back(body, std::move(v));
            exec_.push_back(iter);
            return;
        }

        case op_int_add: binary_int([](Int a, Int b) { return wrap_add(a, b); }); return;
        case op_int_sub: binary_int([](Int a, Int b) { return wrap_sub(a, b); }); return;
        case op_int_mult: binary_int([](Int a, Int b) { return wrap_mul(a, b); }); return;
        case op_int_div:
            if (ints.size() >= 2 && ints.back() != 0) {
                Int b = take(ints), a = take(ints);
                // INT64_MIN / -1 would trap; wrap it instead.
                ints.push_back(b == -1 ? wrap_sub(0, a) : a / b);
            }
            return;
        case op_int_mod:
            if (ints.size() >= 2 && ints.back() != 0) {
                Int b = take(ints), a = take(ints);
                ints.push_back(b == -1 ? 0 : a % b);
            }
            return;
        case op_int_min: binary_int([](Int a, Int b) { return a < b ? a : b; }); return;
        case op_int_max: binary_int([](Int a, Int b) { return a > b ? a : b; }); return;
        case op_int_lt:
            if (ints.size() >= 2) {
                Int b = take(ints), a = take(ints);
                bools.push_back(a < b ? 1 : 0);
            }
            return;
        case op_int_dup:
            if (!ints.empty()) ints.push_back(ints.back());
            return;
        case op_int_swap:
            if (ints.size() >= 2) std::swap(ints[ints.size() - 1], ints[ints.size() - 2]);
            return;
        case op_int_rot:
            if (ints.size() >= 3) {
                Int third = ints[ints.size() - 3];
                ints.erase(ints.end() - 3);
                ints.push_back(third);
            }
            return;
        case op_int_pop:
            if (!ints.empty()) ints.pop_back();
            return;

        case op_float_add: binary_real([](Real a, Real b) { return a + b; }); return;
        case op_float_sub: binary_real([](Real a, Real b) { return a - b; }); return;
        case op_float_mult: binary_real([](Real a, Real b) { return a * b; }); return;
        case op_float_div:
            if (reals.size() >= 2 && reals.back() != 0.0) {
                Real b = take(reals), a = take(reals);
                reals.push_back(a / b);
            }
            return;
        case op_float_lt:
            if (reals.size() >= 2) {
                Real b = take(reals), a = take(reals);
                bools.push_back(a < b ? 1 : 0);
            }
            return;
        case op_float_dup:
            if (!reals.empty()) reals.push_back(reals.back());
            return;
        case op_float_pop:
            if (!reals.empty()) reals.pop_back();
            return;
        case op_float_from_int:
            if (!ints.empty()) {
                Int a = take(ints);
                reals.push_back(static_cast<Real>(a));
            }
            return;

        case op_bool_and:
            if (bools.size() >= 2) {
                auto b = take(bools), a = take(bools);
                bools.push_back((a && b) ? 1 : 0);
            }
            return;
        case op_bool_or:
            if (bools.size() >= 2) {
                auto b = take(bools), a = take(bools);
                bools.push_back((a || b) ? 1 : 0);
            }
            return;
        case op_bool_not:
            if (!bools.empty()) bools.back() = bools.back() ? 0 : 1;
            return;
        case op_bool_dup:
            if (!bools.empty()) bools.push_back(bools.back());
            return;
        case op_bool_pop:
            if (!bools.empty()) bools.pop_back();
            return;

        case op_str_length:
            if (!strings.empty()) {
                std::string a = take(strings);
                ints.push_back(static_cast<Int>(a.size()));
            }
            return;
        case op_str_concat:
            if (strings.size() >= 2) {
                const auto& b = strings[strings.size() - 1];
                const auto& a = strings[strings.size() - 2];
                if (a.size() + b.size() > kMaxStringLen) return;
                std::string joined = a + b;
                strings.pop_back();
                strings.pop_back();
                strings.push_back(std::move(joined));
            }
            return;
        case op_str_take:
            if (!ints.empty() && !strings.empty()) {
                Int n = take(ints);
                std::string a = take(strings);
                std::size_t keep = n < 0 ? 0 : std::min<std::size_t>(a.size(), static_cast<std::size_t>(n));
                strings.push_back(a.substr(0, keep));
            }
            return;
        case op_str_reverse:
            if (!strings.empty())
                std::reverse(strings.back().begin(), strings.back().end());
            return;
        case op_str_first:
            if (!strings.empty() && !strings.back().empty()) {
                std::string a = take(strings);
                strings.push_back(std::string(1, a[0]));
            }
            return;
        case op_str_dup:
            if (!strings.empty()) strings.push_back(strings.back());
            return;
        case op_str_pop:
            if (!strings.empty()) strings.pop_back();
            return;

        case op_vec_length:
            if (!vecs.empty()) {
                IntVec a = take(vecs);
                ints.push_back(static_cast<Int>(a.size()));
            }
            return;
        case op_vec_reverse:
            if (!vecs.empty()) std::reverse(vecs.back().begin(), vecs.back().end());
            return;
        case op_vec_conj:
            if (!ints.empty() && !vecs.empty()) {
                Int x = take(ints);
                vecs.back().push_back(x);
            }
            return;
        case op_vec_eq:
            if (vecs.size() >= 2) {
                IntVec b = take(vecs), a = take(vecs);
                bools.push_back(a == b ? 1 : 0);
            }
            return;
        case op_vec_dup:
            if (!vecs.empty()) vecs.push_back(vecs.back());
            return;
        case op_vec_pop:
            if (!vecs.empty()) vecs.pop_back();
            return;

        case op_print_int:
            if (!ints.empty()) emit(std::to_string(take(ints)));
            return;
        case op_print_float:
            if (!reals.empty()) emit(render_real(take(reals)));
            return;
        case op_print_bool:
            if (!bools.empty()) emit(take(bools) ? "true" : "false");
            return;
        case op_print_str:
            if (!strings.empty()) emit(take(strings));
            return;

        case op_in1: fetch_input(0); return;
        case op_in2: fetch_input(1); return;
        case op_in3: fetch_input(2); return;
        case op_in4: fetch_input(3); return;

        case op_count_: return;
        }
    }

    template <typename T>
    static T take(std::vector<T>& stack) {
        T v = std::move(stack.back());
        stack.pop_back();
        return v;
    }

    template <typename F>
    void binary_int(F f) {
        if (s.ints.size() >= 2) {
            Int b = take(s.ints), a = take(s.ints);
            s.ints.push_back(f(a, b));
        }
    }

    template <typename F>
    void binary_real(F f) {
        if (s.reals.size() >= 2) {
            Real b = take(s.reals), a = take(s.reals);
            s.reals.push_back(f(a, b));
        }
    }

    void fetch_input(std::size_t k) {
        if (k < inputs_.size()) push_value(inputs_[k]);
    }
};

void check_nodes(const NodeList& nodes, std::size_t depth, std::size_t max_depth) {
    if (depth > max_depth) fail(ErrorCode::invalid_argument, "program nests deeper than limit");
    for (const Node& n : nodes) {
        if (n.is_instr()) {
            if (std::get<InstrId>(n.data) >= op_count_)
                fail(ErrorCode::invalid_argument, "program references an unregistered instruction");
        } else if (n.is_list()) {
            check_nodes(std::get<NodeList>(n.data), depth + 1, max_depth);
        }
    }
}

void render_nodes(const NodeList& nodes, std::string& out) {
    out += '(';
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i) out += ' ';
        const Node& n = nodes[i];
        if (n.is_instr()) {
            out += instr_name(std::get<InstrId>(n.data));
        } else if (n.is_literal()) {
            const Value& v = std::get<Value>(n.data);
            if (type_of(v) == ValueType::string) {
                out += '"';
                out += std::get<std::string>(v);
                out += '"';
            } else {
                out += render(v);
            }
        } else {
            render_nodes(std::get<NodeList>(n.data), out);
        }
    }
    out += ')';
}

} // namespace

std::span<const InstructionInfo> instruction_table() { return kTable; }

std::optional<InstrId> find_instruction(std::string_view name) {
    for (InstrId i = 0; i < kTable.size(); ++i)
        if (kTable[i].name == name) return i;
    return std::nullopt;
}

InstrId instr(std::string_view name) {
    auto id = find_instruction(name);
    if (!id) fail(ErrorCode::unknown_name, "unknown instruction '" + std::string(name) + "'");
    return *id;
}

std::string_view instr_name(InstrId id) {
    return id < kTable.size() ? kTable[id].name : "?";
}

std::uint8_t instr_opens(InstrId id) {
    return id < kTable.size() ? kTable[id].opens : 0;
}

void validate_program(const Program& program, std::size_t max_depth) {
    check_nodes(program.body, 1, max_depth);
}

std::string MachineState::printed() const {
    std::string out;
    for (const auto& part : output) out += part;
    return out;
}

const MachineState& Interpreter::run(const Program& program, std::span<const Value> inputs,
                                     std::uint64_t step_limit) {
    if (step_limit < 1) fail(ErrorCode::invalid_argument, "step_limit must be >= 1");
    validate_program(program);
    state_.ints.clear();
    state_.reals.clear();
    state_.bools.clear();
    state_.strings.clear();
    state_.vecs.clear();
    state_.output.clear();
    state_.steps_taken = 0;
    state_.hit_step_limit = false;
    Machine m(state_, inputs);
    m.load(program);
    m.run(step_limit);
    return state_;
}

MachineState run_program(const Program& program, std::span<const Value> inputs,
                         std::uint64_t step_limit) {
    Interpreter interp;
    return interp.run(program, inputs, step_limit);
}

std::string render_program(const Program& program) {
    std::string out;
    render_nodes(program.body, out);
    return out;
}

} // namespace pushlex
