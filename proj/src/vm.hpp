#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "values.hpp"

namespace pushlex {

using InstrId = std::uint16_t;

// A program is a hierarchically nested list of instructions and literals.
struct Node;
using NodeList = std::vector<Node>;

struct Node {
    std::variant<InstrId, Value, NodeList> data;

    Node(InstrId id) : data(id) {}
    Node(Value v) : data(std::move(v)) {}
    Node(NodeList xs) : data(std::move(xs)) {}

    bool is_instr() const { return data.index() == 0; }
    bool is_literal() const { return data.index() == 1; }
    bool is_list() const { return data.index() == 2; }
};

struct Program {
    NodeList body;
};

struct InstructionInfo {
    std::string_view name;
    std::uint8_t opens;      // code blocks the genome translator groups after it
    std::string_view pops;   // arity summary, e.g. "int int"
    std::string_view pushes; // e.g. "int"
};

// The fixed instruction registry. Stable and identical across runs of the
// same build; indices are the InstrId values.
std::span<const InstructionInfo> instruction_table();
std::optional<InstrId> find_instruction(std::string_view name);
InstrId instr(std::string_view name); // throws Error(unknown_name)
std::string_view instr_name(InstrId id);
std::uint8_t instr_opens(InstrId id);

inline constexpr std::size_t kDefaultMaxDepth = 64;
inline constexpr std::uint64_t kDefaultStepLimit = 2000;

// Rejects programs that reference unregistered instructions or nest deeper
// than max_depth. Throws Error(invalid_argument).
void validate_program(const Program& program, std::size_t max_depth = kDefaultMaxDepth);

struct MachineState {
    std::vector<Int> ints;
    std::vector<Real> reals;
    std::vector<std::uint8_t> bools;
    std::vector<std::string> strings;
    std::vector<IntVec> vecs;
    std::vector<std::string> output;
    std::uint64_t steps_taken = 0;
    bool hit_step_limit = false;

    // Printed output in emission order.
    std::string printed() const;
};

// Executes a validated program against per-case inputs. Inputs are pushed to
// their typed stacks (first input deepest) and are also fetched on demand by
// the in1..in4 instructions. Pure: identical arguments yield identical
// states. step_limit must be >= 1.
MachineState run_program(const Program& program, std::span<const Value> inputs,
                         std::uint64_t step_limit = kDefaultStepLimit);

// Reusable interpreter that keeps stack capacity between executions.
class Interpreter {
  public:
    const MachineState& run(const Program& program, std::span<const Value> inputs,
                            std::uint64_t step_limit);

  private:
    MachineState state_;
};

// Lisp-style rendering used in logs and result files, e.g.
// "(in1 in2 int_min (exec_dup (1)) print_int)".
std::string render_program(const Program& program);

} // namespace pushlex
