#ifndef ASOS_CGP_HPP
#define ASOS_CGP_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "asos/errors.hpp"
#include "asos/operators.hpp"
#include "asos/rng.hpp"

namespace asos::sym {

// ---------------------------------------------------------------------------
// Cartesian genetic programming over the symbol operator library.
// Genomes are fixed grids of (operator, connection x3) genes plus output
// connection genes. Connection index space: [0, n_inputs) are program
// inputs, n_inputs + j is grid node j.
// ---------------------------------------------------------------------------

constexpr int kGenesPerNode = 4; // operator gene + 3 connection genes

struct CgpGenome {
    int n_inputs = 1;
    int n_outputs = 1;
    int rows = 1;
    int cols = 8;
    int levels_back = 8; // in columns; inputs are always connectable
    std::vector<int> node_genes;   // kGenesPerNode per node, column-major by node index
    std::vector<int> output_genes;

    int node_count() const { return rows * cols; }

    int op_gene(int node) const { return node_genes[static_cast<std::size_t>(node * kGenesPerNode)]; }
    int conn_gene(int node, int slot) const {
        return node_genes[static_cast<std::size_t>(node * kGenesPerNode + 1 + slot)];
    }

    /// Lowest connection index allowed for a node (levels-back window).
    int conn_low(int node) const {
        int col = node / rows;
        int first_col = std::max(0, col - levels_back);
        return n_inputs + first_col * rows;
    }
    /// One past the highest connection index allowed for a node.
    int conn_high(int node) const {
        int col = node / rows;
        return n_inputs + col * rows;
    }

    void check() const {
        if (n_inputs < 1 || n_outputs < 1 || rows < 1 || cols < 1 || levels_back < 1)
            throw ContractError("genome dimensions must be positive");
        if (node_genes.size() != static_cast<std::size_t>(node_count() * kGenesPerNode))
            throw ContractError("node gene count mismatch");
        if (output_genes.size() != static_cast<std::size_t>(n_outputs))
            throw ContractError("output gene count mismatch");
        int n_ops = static_cast<int>(operator_library().size());
        for (int j = 0; j < node_count(); ++j) {
            if (op_gene(j) < 0 || op_gene(j) >= n_ops) throw ContractError("operator gene out of range");
            for (int s = 0; s < 3; ++s) {
                int c = conn_gene(j, s);
                bool input_ok = c >= 0 && c < n_inputs;
                bool node_ok = c >= conn_low(j) && c < conn_high(j);
                if (!input_ok && !node_ok)
                    throw ContractError("connection gene violates feed-forward/levels-back range");
            }
        }
        for (int g : output_genes)
            if (g < 0 || g >= n_inputs + node_count()) throw ContractError("output gene out of range");
    }

    std::vector<long long> to_ints() const {
        std::vector<long long> out = {n_inputs, n_outputs, rows, cols, levels_back};
        for (int g : node_genes) out.push_back(g);
        for (int g : output_genes) out.push_back(g);
        return out;
    }

    static CgpGenome from_ints(const std::vector<long long>& v) {
        if (v.size() < 5) throw DecodeError("genome header truncated", v.size());
        CgpGenome g;
        g.n_inputs = static_cast<int>(v[0]);
        g.n_outputs = static_cast<int>(v[1]);
        g.rows = static_cast<int>(v[2]);
        g.cols = static_cast<int>(v[3]);
        g.levels_back = static_cast<int>(v[4]);
        if (g.n_inputs < 1 || g.n_outputs < 1 || g.rows < 1 || g.cols < 1)
            throw DecodeError("genome header out of range", 0);
        std::size_t need = 5 + static_cast<std::size_t>(g.node_count()) * kGenesPerNode +
                           static_cast<std::size_t>(g.n_outputs);
        if (v.size() != need) throw DecodeError("genome length mismatch", v.size());
        std::size_t i = 5;
        for (int k = 0; k < g.node_count() * kGenesPerNode; ++k)
            g.node_genes.push_back(static_cast<int>(v[i++]));
        for (int k = 0; k < g.n_outputs; ++k) g.output_genes.push_back(static_cast<int>(v[i++]));
        return g;
    }

    bool operator==(const CgpGenome&) const = default;
};

// ---------------------------------------------------------------------------
// Decoded program
// ---------------------------------------------------------------------------

struct ProgramNode {
    int node_index = -1;           // grid index
    OpKind op = OpKind::Add;
    std::vector<int> inputs;       // connection indices, arity-many
    int partner = -1;              // for While nodes: position of the paired node
};

struct Program {
    int n_inputs = 0;
    int n_outputs = 0;
    std::vector<ProgramNode> nodes;    // active nodes in execution order
    std::vector<int> output_sources;   // connection indices
};

namespace detail {

/// Textual While pairing over the whole grid, parenthesis style.
/// Throws DecodeError on an unbalanced genome.
inline std::map<int, int> pair_whiles(const CgpGenome& g) {
    std::map<int, int> partner; // node index <-> node index
    std::vector<int> stack;
    for (int j = 0; j < g.node_count(); ++j) {
        OpKind op = operator_library()[static_cast<std::size_t>(g.op_gene(j))].kind;
        if (op == OpKind::WhileStart) stack.push_back(j);
        else if (op == OpKind::WhileEnd) {
            if (stack.empty()) throw DecodeError("unbalanced While pair: end without start",
                                                 static_cast<std::size_t>(j));
            partner[stack.back()] = j;
            partner[j] = stack.back();
            stack.pop_back();
        }
    }
    if (!stack.empty())
        throw DecodeError("unbalanced While pair: start without end",
                          static_cast<std::size_t>(stack.back()));
    return partner;
}

} // namespace detail

/// Decodes a genome: active nodes are the reachability closure from the
/// output genes, extended so both halves of a While pair activate together.
inline Program decode_genome(const CgpGenome& g) {
    g.check();
    auto partner = detail::pair_whiles(g);

    std::set<int> active; // node indices
    std::vector<int> work;
    auto touch = [&](int conn) {
        if (conn >= g.n_inputs) {
            int node = conn - g.n_inputs;
            if (active.insert(node).second) work.push_back(node);
        }
    };
    for (int conn : g.output_genes) touch(conn);
    while (!work.empty()) {
        int node = work.back();
        work.pop_back();
        int arity = operator_library()[static_cast<std::size_t>(g.op_gene(node))].arity;
        for (int s = 0; s < arity; ++s) touch(g.conn_gene(node, s));
        auto it = partner.find(node);
        if (it != partner.end() && active.insert(it->second).second) work.push_back(it->second);
    }

    Program p;
    p.n_inputs = g.n_inputs;
    p.n_outputs = g.n_outputs;
    p.output_sources = g.output_genes;
    std::map<int, int> pos; // node index -> position
    for (int node : active) {
        ProgramNode pn;
        pn.node_index = node;
        pn.op = operator_library()[static_cast<std::size_t>(g.op_gene(node))].kind;
        int arity = operator_def(pn.op).arity;
        for (int s = 0; s < arity; ++s) pn.inputs.push_back(g.conn_gene(node, s));
        pos[node] = static_cast<int>(p.nodes.size());
        p.nodes.push_back(std::move(pn));
    }
    for (auto& pn : p.nodes) {
        auto it = partner.find(pn.node_index);
        if (it != partner.end()) pn.partner = pos.at(it->second);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Program runner
// ---------------------------------------------------------------------------

struct RunResult {
    std::vector<SymVal> outputs;
    bool capped = false;
    bool faulted = false;
};

/// Sequential evaluation with control flow.
/// If-else: a false condition skips the next node (a whole loop if the next
/// node opens one). While: the start node's register carries the loop state;
/// it is seeded from the operand, tested for truth, and re-written by the
/// end node's operand each iteration. A global budget of
/// loop_cap * active-node-count basic steps guarantees termination.
inline RunResult run_program(const Program& p, const std::vector<SymVal>& inputs,
                             const OperatorContext& ctx, int loop_cap = 1000) {
    if (static_cast<int>(inputs.size()) != p.n_inputs)
        throw ContractError("program expects " + std::to_string(p.n_inputs) + " inputs, got " +
                            std::to_string(inputs.size()));
    RunResult res;
    std::vector<SymVal> reg(static_cast<std::size_t>(p.n_inputs) + (p.nodes.empty()
                                ? 0u
                                : static_cast<std::size_t>(p.nodes.back().node_index) + 1u));
    for (int i = 0; i < p.n_inputs; ++i) reg[static_cast<std::size_t>(i)] = inputs[static_cast<std::size_t>(i)];

    auto reg_of = [&](int conn) -> SymVal& { return reg[static_cast<std::size_t>(conn)]; };
    auto node_reg = [&](const ProgramNode& n) -> SymVal& { return reg_of(p.n_inputs + n.node_index); };

    long long budget = static_cast<long long>(loop_cap) * std::max<long long>(1, static_cast<long long>(p.nodes.size()));
    std::vector<long long> iterations(p.nodes.size(), 0);

    std::size_t pc = 0;
    while (pc < p.nodes.size()) {
        if (budget-- <= 0) { res.capped = true; break; }
        const ProgramNode& n = p.nodes[pc];
        switch (n.op) {
            case OpKind::IfElse: {
                SymVal cond = reg_of(n.inputs[0]);
                node_reg(n) = cond;
                if (cond.truthy() || pc + 1 >= p.nodes.size()) { ++pc; break; }
                const ProgramNode& next = p.nodes[pc + 1];
                if (next.op == OpKind::WhileStart && next.partner >= 0)
                    pc = static_cast<std::size_t>(next.partner) + 1; // skip the whole loop
                else if (next.op == OpKind::WhileEnd)
                    ++pc; // loop closers cannot be skipped
                else
                    pc += 2;
                break;
            }
            case OpKind::WhileStart: {
                node_reg(n) = reg_of(n.inputs[0]); // seed loop state
                iterations[pc] = 0;
                if (n.partner < 0) { ++pc; break; } // unpaired start acts as pass-through
                if (node_reg(n).truthy()) ++pc;
                else pc = static_cast<std::size_t>(n.partner) + 1;
                break;
            }
            case OpKind::WhileEnd: {
                node_reg(n) = reg_of(n.inputs[0]);
                if (n.partner < 0) { ++pc; break; }
                const ProgramNode& start = p.nodes[static_cast<std::size_t>(n.partner)];
                node_reg(start) = node_reg(n); // loop-state update
                if (++iterations[static_cast<std::size_t>(n.partner)] >= loop_cap) {
                    res.capped = true;
                    ++pc;
                } else if (node_reg(start).truthy()) {
                    pc = static_cast<std::size_t>(n.partner) + 1; // next iteration
                } else {
                    ++pc;
                }
                break;
            }
            default: {
                std::vector<SymVal> args;
                args.reserve(n.inputs.size());
                for (int c : n.inputs) args.push_back(reg_of(c));
                bool fault = false;
                node_reg(n) = eval_operator(n.op, args, ctx, &fault);
                if (fault) res.faulted = true;
                ++pc;
                break;
            }
        }
    }

    for (int conn : p.output_sources) res.outputs.push_back(reg_of(conn));
    return res;
}

// ---------------------------------------------------------------------------
// Mutation and random genomes
// ---------------------------------------------------------------------------

namespace detail {

inline int random_non_while_op(RandomStream& rng) {
    const auto& lib = operator_library();
    for (;;) {
        int k = static_cast<int>(rng.below(lib.size()));
        OpKind op = lib[static_cast<std::size_t>(k)].kind;
        if (op != OpKind::WhileStart && op != OpKind::WhileEnd) return k;
    }
}

inline int random_conn(const CgpGenome& g, int node, RandomStream& rng) {
    int span = g.n_inputs + (g.conn_high(node) - g.conn_low(node));
    int pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(span)));
    return pick < g.n_inputs ? pick : g.conn_low(node) + (pick - g.n_inputs);
}

} // namespace detail

/// Point mutation: every gene independently resampled with probability
/// `rate` inside its valid range. While_start / While_end operator genes are
/// kept fixed so mutation preserves control balance and mutants always
/// decode.
inline CgpGenome mutate(const CgpGenome& g, double rate, RandomStream& rng) {
    if (rate < 0.0 || rate > 1.0) throw ContractError("mutation rate must be in [0,1]");
    CgpGenome out = g;
    for (int j = 0; j < g.node_count(); ++j) {
        OpKind cur = operator_library()[static_cast<std::size_t>(g.op_gene(j))].kind;
        bool is_while = cur == OpKind::WhileStart || cur == OpKind::WhileEnd;
        if (!is_while && rng.uniform01() < rate)
            out.node_genes[static_cast<std::size_t>(j * kGenesPerNode)] = detail::random_non_while_op(rng);
        for (int s = 0; s < 3; ++s)
            if (rng.uniform01() < rate)
                out.node_genes[static_cast<std::size_t>(j * kGenesPerNode + 1 + s)] =
                    detail::random_conn(out, j, rng);
    }
    for (int k = 0; k < g.n_outputs; ++k)
        if (rng.uniform01() < rate)
            out.output_genes[static_cast<std::size_t>(k)] =
                static_cast<int>(rng.below(static_cast<std::uint64_t>(g.n_inputs + g.node_count())));
    return out;
}

struct GenomeShape {
    int n_inputs = 2;
    int n_outputs = 1;
    int rows = 1;
    int cols = 10;
    int levels_back = 10;
};

inline CgpGenome random_genome(const GenomeShape& shape, RandomStream& rng) {
    CgpGenome g;
    g.n_inputs = shape.n_inputs;
    g.n_outputs = shape.n_outputs;
    g.rows = shape.rows;
    g.cols = shape.cols;
    g.levels_back = shape.levels_back;
    g.node_genes.resize(static_cast<std::size_t>(g.node_count()) * kGenesPerNode);
    for (int j = 0; j < g.node_count(); ++j) {
        g.node_genes[static_cast<std::size_t>(j * kGenesPerNode)] = detail::random_non_while_op(rng);
        for (int s = 0; s < 3; ++s)
            g.node_genes[static_cast<std::size_t>(j * kGenesPerNode + 1 + s)] = detail::random_conn(g, j, rng);
    }
    for (int k = 0; k < g.n_outputs; ++k)
        g.output_genes.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(g.n_inputs + g.node_count()))));
    return g;
}

/// Installs a balanced While pair at node positions a < b. Used by seeds and
/// tests; plain random genomes stay loop-free.
inline void insert_while_pair(CgpGenome& g, int a, int b) {
    if (a < 0 || b <= a || b >= g.node_count()) throw ContractError("bad while pair positions");
    auto op_index = [](OpKind k) {
        const auto& lib = operator_library();
        for (std::size_t i = 0; i < lib.size(); ++i)
            if (lib[i].kind == k) return static_cast<int>(i);
        return 0;
    };
    g.node_genes[static_cast<std::size_t>(a * kGenesPerNode)] = op_index(OpKind::WhileStart);
    g.node_genes[static_cast<std::size_t>(b * kGenesPerNode)] = op_index(OpKind::WhileEnd);
}

// ---------------------------------------------------------------------------
// mu + lambda evolution
// ---------------------------------------------------------------------------

struct EvolutionConfig {
    int mu = 4;
    int lambda = 16;
    double mutation_rate = 0.05;
    int max_generations = 100;
    int loop_cap = 1000;
    std::uint64_t seed = 0;
    std::optional<double> stop_at; // early exit once best fitness <= stop_at

    void check() const {
        if (mu < 1 || lambda < 0) throw ContractError("mu >= 1 and lambda >= 0 required");
        if (mutation_rate < 0.0 || mutation_rate > 1.0) throw ContractError("mutation rate in [0,1]");
    }
};

template <typename Candidate>
struct EvolutionResult {
    Candidate best;
    double best_fitness = 0.0;
    std::vector<double> history; // per-generation best, non-increasing
};

namespace detail {

/// Elitist mu+lambda selection shared by genome and bitmask evolution.
/// Fitness is minimized; parents keep their slot unless strictly beaten.
template <typename Candidate, typename MutateFn>
EvolutionResult<Candidate> evolve_loop(std::vector<Candidate> parents, std::vector<double> parent_fit,
                                       const EvolutionConfig& cfg,
                                       const std::function<double(const Candidate&)>& fitness,
                                       MutateFn&& make_offspring, RandomStream& rng) {
    struct Scored {
        Candidate cand;
        double fit;
        bool is_parent;
    };
    EvolutionResult<Candidate> res;
    auto record = [&]() {
        std::size_t bi = 0;
        for (std::size_t i = 1; i < parents.size(); ++i)
            if (parent_fit[i] < parent_fit[bi]) bi = i;
        res.best = parents[bi];
        res.best_fitness = parent_fit[bi];
        res.history.push_back(parent_fit[bi]);
    };
    record();
    for (int gen = 0; gen < cfg.max_generations; ++gen) {
        if (cfg.stop_at && res.best_fitness <= *cfg.stop_at) break;
        std::vector<Scored> pool;
        pool.reserve(parents.size() + static_cast<std::size_t>(cfg.lambda));
        for (std::size_t i = 0; i < parents.size(); ++i)
            pool.push_back({parents[i], parent_fit[i], true});
        for (int k = 0; k < cfg.lambda; ++k) {
            Candidate child = make_offspring(parents[static_cast<std::size_t>(k) % parents.size()], rng);
            double f = fitness(child);
            pool.push_back({std::move(child), f, false});
        }
        std::stable_sort(pool.begin(), pool.end(), [](const Scored& a, const Scored& b) {
            if (a.fit != b.fit) return a.fit < b.fit;
            return a.is_parent && !b.is_parent; // parents survive ties
        });
        parents.clear();
        parent_fit.clear();
        for (std::size_t i = 0; i < static_cast<std::size_t>(cfg.mu) && i < pool.size(); ++i) {
            parents.push_back(std::move(pool[i].cand));
            parent_fit.push_back(pool[i].fit);
        }
        record();
    }
    return res;
}

} // namespace detail

/// mu+lambda CGP evolution; fitness is minimized (maximization objectives
/// are negated at the boundary). Returns the best genome and the
/// per-generation best-fitness history.
inline EvolutionResult<CgpGenome> evolve(const EvolutionConfig& cfg, const GenomeShape& shape,
                                         const std::function<double(const CgpGenome&)>& fitness,
                                         const std::optional<CgpGenome>& initial = std::nullopt) {
    cfg.check();
    RandomStream rng(cfg.seed);
    std::vector<CgpGenome> parents;
    for (int i = 0; i < cfg.mu; ++i) {
        if (initial) parents.push_back(i == 0 ? *initial : mutate(*initial, cfg.mutation_rate, rng));
        else parents.push_back(random_genome(shape, rng));
    }
    std::vector<double> fit;
    for (const auto& p : parents) fit.push_back(fitness(p));
    return detail::evolve_loop<CgpGenome>(
        std::move(parents), std::move(fit), cfg, fitness,
        [&cfg](const CgpGenome& p, RandomStream& r) { return mutate(p, cfg.mutation_rate, r); }, rng);
}

/// mu+lambda over binary activation masks. The initial population always
/// contains the all-ones mask, so an already-matching scenario scores first.
inline EvolutionResult<std::vector<std::uint8_t>> evolve_bitmask(
    const EvolutionConfig& cfg, std::size_t length,
    const std::function<double(const std::vector<std::uint8_t>&)>& fitness) {
    cfg.check();
    RandomStream rng(cfg.seed);
    auto flip_some = [&cfg](const std::vector<std::uint8_t>& m, RandomStream& r) {
        std::vector<std::uint8_t> out = m;
        bool flipped = false;
        for (auto& bit : out)
            if (r.uniform01() < cfg.mutation_rate) { bit ^= 1; flipped = true; }
        if (!flipped && !out.empty()) {
            std::size_t i = static_cast<std::size_t>(r.below(out.size()));
            out[i] ^= 1;
        }
        return out;
    };
    std::vector<std::vector<std::uint8_t>> parents;
    parents.push_back(std::vector<std::uint8_t>(length, 1));
    for (int i = 1; i < cfg.mu; ++i) parents.push_back(flip_some(parents.front(), rng));
    std::vector<double> fit;
    for (const auto& p : parents) fit.push_back(fitness(p));
    return detail::evolve_loop<std::vector<std::uint8_t>>(std::move(parents), std::move(fit), cfg,
                                                          fitness, flip_some, rng);
}

// ---------------------------------------------------------------------------
// Structural complexity (node count x average out-degree) and printing
// ---------------------------------------------------------------------------

/// c_s = n_node * OD_avg over active nodes; out-degree counts edges into
/// active consumers (with multiplicity) and output genes.
inline double structural_complexity(const Program& p) {
    if (p.nodes.empty()) return 0.0;
    std::map<int, int> outdeg; // node index -> edge count
    for (const auto& n : p.nodes)
        for (int c : n.inputs)
            if (c >= p.n_inputs) ++outdeg[c - p.n_inputs];
    for (int c : p.output_sources)
        if (c >= p.n_inputs) ++outdeg[c - p.n_inputs];
    long long edges = 0;
    for (const auto& [node, d] : outdeg) edges += d;
    double n_node = static_cast<double>(p.nodes.size());
    double od_avg = static_cast<double>(edges) / n_node;
    return n_node * od_avg;
}

inline std::string to_expression(const Program& p) {
    std::map<int, const ProgramNode*> by_index;
    for (const auto& n : p.nodes) by_index[n.node_index] = &n;
    std::function<std::string(int, int)> expr = [&](int conn, int depth) -> std::string {
        if (conn < p.n_inputs) return "x" + std::to_string(conn);
        if (depth > 64) return "...";
        const ProgramNode* n = by_index.at(conn - p.n_inputs);
        std::string s = operator_def(n->op).name;
        s += "(";
        for (std::size_t i = 0; i < n->inputs.size(); ++i) {
            if (i) s += ", ";
            s += expr(n->inputs[i], depth + 1);
        }
        s += ")";
        return s;
    };
    std::string out;
    for (std::size_t k = 0; k < p.output_sources.size(); ++k) {
        if (k) out += "; ";
        out += "y" + std::to_string(k) + " = " + expr(p.output_sources[k], 0);
    }
    return out;
}

} // namespace asos::sym

#endif
