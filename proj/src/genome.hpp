#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rng.hpp"
#include "values.hpp"
#include "vm.hpp"

namespace pushlex {

// Linear genome: each gene is an instruction or literal plus a close count
// consumed by translation. Instructions carry their open counts in the
// instruction table.
struct Gene {
    std::variant<InstrId, Value> item;
    std::uint32_t closes = 0;

    bool is_instr() const { return item.index() == 0; }
    bool operator==(const Gene&) const = default;
};

struct Genome {
    std::vector<Gene> genes;
    bool operator==(const Genome&) const = default;
};

// Atom generators a problem draws from when creating or mutating genomes:
// plain instructions plus named literal makers (ephemeral random constants).
struct GenePool {
    struct LiteralGen {
        std::string name;
        std::function<Value(Rng&)> make;
    };
    std::vector<InstrId> instructions;
    std::vector<LiteralGen> literals;

    std::size_t size() const { return instructions.size() + literals.size(); }
};

Gene random_gene(const GenePool& pool, Rng& rng);

// Gene count uniform in [min_genes, max_genes]. Throws Error(invalid_argument)
// on an empty pool or an inverted range.
Genome random_genome(const GenePool& pool, std::size_t min_genes, std::size_t max_genes, Rng& rng);

struct UmadConfig {
    double addition_rate = 0.09;
    double deletion_rate = size_neutral_deletion_rate(0.09);

    // r = a / (1 + a): the exact rate at which deletions cancel the expected
    // growth of the addition pass.
    static double size_neutral_deletion_rate(double addition_rate) {
        return addition_rate / (1.0 + addition_rate);
    }
    static UmadConfig size_neutral(double addition_rate) {
        return {addition_rate, size_neutral_deletion_rate(addition_rate)};
    }
};

// Uniform mutation by addition and deletion. Pass 1 inserts a fresh random
// gene before each parent gene (and after the final one) with probability
// addition_rate; pass 2 deletes each gene of the grown genome independently
// with probability deletion_rate.
Genome umad(const Genome& parent, const UmadConfig& cfg, const GenePool& pool, Rng& rng);

// Plush-style translation. Total and deterministic: instruction open counts
// start blocks, gene close counts end them, unclosed blocks are closed at the
// end, surplus closes are ignored. Blocks that would nest beyond max_depth
// are not opened.
Program translate(const Genome& genome, std::size_t max_depth = kDefaultMaxDepth);

// Hill-climbing simplification: `steps` attempts, each deleting 1 or 2 random
// genes and keeping the deletion iff `still_passes` stays true. The input
// genome must satisfy still_passes; throws Error(precondition) otherwise.
Genome simplify(const Genome& genome, const std::function<bool(const Genome&)>& still_passes,
                std::size_t steps, Rng& rng);

// JSON form: array of {"item": ..., "closes": n}; instructions are name
// strings, literals are {"int"|"float"|"bool"|"str"|"ints": value} objects.
nlohmann::json genome_to_json(const Genome& genome);
Genome genome_from_json(const nlohmann::json& j);

} // namespace pushlex
