#include "genome.hpp"

#include "errors.hpp"

namespace pushlex {

namespace {

// Close-count distribution for freshly generated genes (heavily weighted
// toward zero, occasionally closing one or more blocks).
std::uint32_t random_closes(Rng& rng) {
    double u = uniform_real_01(rng);
    if (u < 0.772) return 0;
    if (u < 0.978) return 1;
    if (u < 0.999) return 2;
    return 3;
}

} // namespace

Gene random_gene(const GenePool& pool, Rng& rng) {
    if (pool.size() == 0) fail(ErrorCode::invalid_argument, "gene pool is empty");
    std::size_t pick = uniform_index(rng, pool.size());
    Gene g;
    if (pick < pool.instructions.size()) {
        g.item = pool.instructions[pick];
    } else {
        g.item = pool.literals[pick - pool.instructions.size()].make(rng);
    }
    g.closes = random_closes(rng);
    return g;
}

Genome random_genome(const GenePool& pool, std::size_t min_genes, std::size_t max_genes,
                     Rng& rng) {
    if (pool.size() == 0) fail(ErrorCode::invalid_argument, "gene pool is empty");
    if (min_genes < 1 || min_genes > max_genes)
        fail(ErrorCode::invalid_argument, "genome size range must satisfy 1 <= min <= max");
    std::size_t n = min_genes + uniform_index(rng, max_genes - min_genes + 1);
    Genome g;
    g.genes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) g.genes.push_back(random_gene(pool, rng));
    return g;
}

Genome umad(const Genome& parent, const UmadConfig& cfg, const GenePool& pool, Rng& rng) {
    Genome grown;
    grown.genes.reserve(parent.genes.size() + 4);
    for (const Gene& g : parent.genes) {
        if (bernoulli(rng, cfg.addition_rate)) grown.genes.push_back(random_gene(pool, rng));
        grown.genes.push_back(g);
    }
    // One extra insertion slot after the last gene, so empty genomes can grow.
    if (bernoulli(rng, cfg.addition_rate)) grown.genes.push_back(random_gene(pool, rng));

    Genome child;
    child.genes.reserve(grown.genes.size());
    for (Gene& g : grown.genes) {
        if (!bernoulli(rng, cfg.deletion_rate)) child.genes.push_back(std::move(g));
    }
    return child;
}

Program translate(const Genome& genome, std::size_t max_depth) {
    Program prog;
    // Open-block stack. Each frame's list pointer targets a node owned by the
    // frame below; only the innermost list is ever appended to, so pointers in
    // lower frames stay valid.
    struct Frame {
        NodeList* list;
        std::uint32_t siblings_left; // blocks still owed to this frame's opener
    };
    std::vector<Frame> open{{&prog.body, 0}};

    auto open_block = [&](std::uint32_t siblings_left) {
        NodeList* parent = open.back().list;
        parent->push_back(Node(NodeList{}));
        open.push_back({&std::get<NodeList>(parent->back().data), siblings_left});
    };
    auto close_block = [&] {
        Frame done = open.back();
        open.pop_back();
        // An instruction that groups several blocks gets the next sibling
        // block opened as soon as the previous one closes.
        if (done.siblings_left > 0) open_block(done.siblings_left - 1);
    };

    for (const Gene& gene : genome.genes) {
        if (gene.is_instr()) {
            InstrId id = std::get<InstrId>(gene.item);
            open.back().list->push_back(Node(id));
            std::uint32_t opens = instr_opens(id);
            if (opens > 0 && open.size() < max_depth) open_block(opens - 1);
        } else {
            open.back().list->push_back(Node(std::get<Value>(gene.item)));
        }
        for (std::uint32_t c = 0; c < gene.closes && open.size() > 1; ++c) close_block();
    }
    // Unclosed blocks (including still-owed siblings) are closed at the end.
    while (open.size() > 1) close_block();
    return prog;
}

Genome simplify(const Genome& genome, const std::function<bool(const Genome&)>& still_passes,
                std::size_t steps, Rng& rng) {
    if (!still_passes(genome))
        fail(ErrorCode::precondition, "simplify requires a genome that already passes its cases");
    Genome best = genome;
    for (std::size_t i = 0; i < steps; ++i) {
        if (best.genes.empty()) break;
        std::size_t remove = 1 + uniform_index(rng, 2);
        remove = std::min(remove, best.genes.size());
        Genome trial = best;
        for (std::size_t k = 0; k < remove; ++k) {
            std::size_t at = uniform_index(rng, trial.genes.size());
            trial.genes.erase(trial.genes.begin() + static_cast<std::ptrdiff_t>(at));
            if (trial.genes.empty()) break;
        }
        if (still_passes(trial)) best = std::move(trial);
    }
    return best;
}

nlohmann::json genome_to_json(const Genome& genome) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Gene& g : genome.genes) {
        nlohmann::json item;
        if (g.is_instr()) {
            item = std::string(instr_name(std::get<InstrId>(g.item)));
        } else {
            const Value& v = std::get<Value>(g.item);
            switch (type_of(v)) {
            case ValueType::integer: item = {{"int", std::get<Int>(v)}}; break;
            case ValueType::real: item = {{"float", std::get<Real>(v)}}; break;
            case ValueType::boolean: item = {{"bool", std::get<bool>(v)}}; break;
            case ValueType::string: item = {{"str", std::get<std::string>(v)}}; break;
            case ValueType::int_vector: item = {{"ints", std::get<IntVec>(v)}}; break;
            }
        }
        arr.push_back({{"item", std::move(item)}, {"closes", g.closes}});
    }
    return arr;
}

Genome genome_from_json(const nlohmann::json& j) {
    if (!j.is_array()) fail(ErrorCode::parse, "genome JSON must be an array of genes");
    Genome g;
    for (const auto& e : j) {
        if (!e.is_object() || !e.contains("item"))
            fail(ErrorCode::parse, "gene must be an object with an 'item' key");
        Gene gene;
        gene.closes = e.value("closes", 0u);
        const auto& item = e.at("item");
        if (item.is_string()) {
            gene.item = instr(item.get<std::string>());
        } else if (item.is_object() && item.size() == 1) {
            const std::string key = item.begin().key();
            const nlohmann::json& val = item.begin().value();
            if (key == "int")
                gene.item = value_from_json(val, ValueType::integer);
            else if (key == "float")
                gene.item = value_from_json(val, ValueType::real);
            else if (key == "bool")
                gene.item = value_from_json(val, ValueType::boolean);
            else if (key == "str")
                gene.item = value_from_json(val, ValueType::string);
            else if (key == "ints")
                gene.item = value_from_json(val, ValueType::int_vector);
            else
                fail(ErrorCode::parse, "unknown literal kind '" + key + "'");
        } else {
            fail(ErrorCode::parse, "gene item must be an instruction name or literal object");
        }
        g.genes.push_back(std::move(gene));
    }
    return g;
}

} // namespace pushlex
