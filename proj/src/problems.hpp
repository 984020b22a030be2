#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "genome.hpp"
#include "rng.hpp"
#include "values.hpp"
#include "vm.hpp"

namespace pushlex {

struct TrainingCase {
    std::vector<Value> inputs;
    std::vector<Value> expected;
    bool operator==(const TrainingCase&) const = default;
};

enum class CaseRole { train, test };

struct CaseSet {
    std::vector<TrainingCase> cases;
    CaseRole role = CaseRole::train;
    bool operator==(const CaseSet&) const = default;
};

// Where a program's answer is read from after execution.
enum class OutputChannel {
    printed_int,   // printed output parsed as one integer
    printed_float, // printed output parsed as one float
    bool_top,      // top of the boolean stack
    int_vector_top // top of the integer-vector stack
};

inline constexpr double kAbsentPenalty = 1e6;

struct ProblemSpec {
    std::string name;
    std::string description;
    std::vector<ValueType> input_types;
    ValueType output_type;
    OutputChannel channel;
    std::size_t default_train_size = 0;
    std::size_t default_test_size = 0;   // 10x the training size
    std::uint64_t execution_limit = 0;   // default_train_size * 1000 * 300
    GenePool pool;                       // per-problem atom generators
    Genome solution;                     // known solution genome (tests, seeding)
    std::function<std::vector<Value>(Rng&)> generate_inputs;
    std::function<std::vector<Value>(std::span<const Value>)> reference;
};

std::vector<std::string> problem_names();
const ProblemSpec& problem(const std::string& name); // throws Error(unknown_name)

// n cases from the problem's documented input distribution with expected
// outputs computed by the built-in reference solution. Deterministic in rng.
CaseSet make_cases(const ProblemSpec& p, std::size_t n, CaseRole role, Rng& rng);

// Train and test sets with disjoint inputs (test inputs colliding with a
// training input are redrawn).
std::pair<CaseSet, CaseSet> make_train_test(const ProblemSpec& p, std::size_t n_train,
                                            std::size_t n_test, Rng& rng);

// Test set generation that avoids an externally supplied training set.
CaseSet make_test_avoiding(const ProblemSpec& p, std::size_t n_test, const CaseSet& avoid,
                           Rng& rng);

// Distance between an actual output (nullptr = absent) and the expected
// value: exact match = 0; numeric = |difference| capped at `penalty`;
// string / integer-vector = Levenshtein distance; boolean = 0/1;
// absent or non-finite = penalty.
double case_error(const Value* actual, const Value& expected, double penalty = kAbsentPenalty);

// Runs the program on the case's inputs and scores the output read from the
// problem's channel. One call = one program execution.
double evaluate(const Program& program, const TrainingCase& c, const ProblemSpec& p,
                std::uint64_t step_limit = kDefaultStepLimit);

// Same, reusing an interpreter across calls.
double evaluate_with(Interpreter& interp, const Program& program, const TrainingCase& c,
                     const ProblemSpec& p, std::uint64_t step_limit = kDefaultStepLimit);

// JSON Lines dataset ingestion: one {"inputs": [...], "output": [...]} object
// per line, validated against the problem signature. Errors carry the
// offending line / case number.
CaseSet load_cases(const std::string& path, const ProblemSpec& p);
void save_cases(const CaseSet& cs, std::ostream& out);
std::string cases_to_jsonl(const CaseSet& cs);

} // namespace pushlex
