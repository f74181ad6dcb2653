#include <catch2/catch_amalgamated.hpp>

#include <tuple>

#include "asos/cgp.hpp"

using namespace asos::sym;
using asos::RandomStream;

namespace {

int op_index(OpKind k) { return static_cast<int>(k); }

/// Single-row genome from an explicit node list; unused connection genes
/// point at input 0.
CgpGenome make_genome(int n_in, std::vector<std::tuple<OpKind, int, int, int>> nodes,
                      std::vector<int> outs) {
    CgpGenome g;
    g.n_inputs = n_in;
    g.n_outputs = static_cast<int>(outs.size());
    g.rows = 1;
    g.cols = static_cast<int>(nodes.size());
    g.levels_back = g.cols;
    for (auto& [op, a, b, c] : nodes) {
        g.node_genes.push_back(op_index(op));
        g.node_genes.push_back(a);
        g.node_genes.push_back(b);
        g.node_genes.push_back(c);
    }
    g.output_genes = std::move(outs);
    return g;
}

// independent oracle: fixpoint closure over a boolean activity array
std::set<int> reachability_oracle(const CgpGenome& g) {
    std::vector<bool> active(static_cast<std::size_t>(g.node_count()), false);
    // genome-level textual while pairing
    std::map<int, int> partner;
    {
        std::vector<int> stack;
        for (int j = 0; j < g.node_count(); ++j) {
            OpKind op = operator_library()[static_cast<std::size_t>(g.op_gene(j))].kind;
            if (op == OpKind::WhileStart) stack.push_back(j);
            else if (op == OpKind::WhileEnd && !stack.empty()) {
                partner[stack.back()] = j;
                partner[j] = stack.back();
                stack.pop_back();
            }
        }
    }
    bool changed = true;
    auto mark = [&](int conn) {
        if (conn >= g.n_inputs && !active[static_cast<std::size_t>(conn - g.n_inputs)]) {
            active[static_cast<std::size_t>(conn - g.n_inputs)] = true;
            return true;
        }
        return false;
    };
    for (int c : g.output_genes) mark(c);
    while (changed) {
        changed = false;
        for (int j = 0; j < g.node_count(); ++j) {
            if (!active[static_cast<std::size_t>(j)]) continue;
            int arity = operator_library()[static_cast<std::size_t>(g.op_gene(j))].arity;
            for (int s = 0; s < arity; ++s) changed = mark(g.conn_gene(j, s)) || changed;
            auto it = partner.find(j);
            if (it != partner.end() && !active[static_cast<std::size_t>(it->second)]) {
                active[static_cast<std::size_t>(it->second)] = true;
                changed = true;
            }
        }
    }
    std::set<int> out;
    for (int j = 0; j < g.node_count(); ++j)
        if (active[static_cast<std::size_t>(j)]) out.insert(j);
    return out;
}

} // namespace

TEST_CASE("output gene at an input decodes to a passthrough program") {
    auto g = make_genome(2, {{OpKind::Add, 0, 1, 0}}, {0});
    auto p = decode_genome(g);
    CHECK(p.nodes.empty());
    auto res = run_program(p, {SymVal(7.0), SymVal(1.0)}, {});
    CHECK(res.outputs[0].scalar() == 7.0);
    CHECK(structural_complexity(p) == 0.0);
}

TEST_CASE("single Add node computes x plus y") {
    auto g = make_genome(2, {{OpKind::Add, 0, 1, 0}}, {2});
    auto p = decode_genome(g);
    REQUIRE(p.nodes.size() == 1);
    auto res = run_program(p, {SymVal(2.0), SymVal(40.0)}, {});
    CHECK(res.outputs[0].scalar() == 42.0);
}

TEST_CASE("nested arithmetic evaluates sequentially") {
    // Add(Mul(a,b), c) on (2,3,4) -> 10
    auto g = make_genome(3, {{OpKind::Mul, 0, 1, 0}, {OpKind::Add, 3, 2, 0}}, {4});
    auto p = decode_genome(g);
    auto res = run_program(p, {SymVal(2.0), SymVal(3.0), SymVal(4.0)}, {});
    CHECK(res.outputs[0].scalar() == 10.0);
    CHECK_FALSE(res.capped);
    CHECK_FALSE(res.faulted);
}

TEST_CASE("active node set equals the reachability closure on random genomes") {
    RandomStream rng(21);
    GenomeShape shape;
    shape.n_inputs = 3;
    shape.n_outputs = 2;
    shape.cols = 12;
    shape.levels_back = 12;
    for (int i = 0; i < 1000; ++i) {
        CgpGenome g = random_genome(shape, rng);
        if (i % 3 == 0) insert_while_pair(g, 2, 9);
        auto p = decode_genome(g);
        std::set<int> got;
        for (const auto& n : p.nodes) got.insert(n.node_index);
        CHECK(got == reachability_oracle(g));
    }
}

TEST_CASE("while loop with a false condition never executes its body") {
    auto g = make_genome(2,
                         {{OpKind::Const1, 0, 0, 0},      // node 0 -> conn 2
                          {OpKind::WhileStart, 0, 0, 0},  // node 1 -> conn 3, seeds from x0
                          {OpKind::Add, 3, 2, 0},         // node 2 -> conn 4, body observable
                          {OpKind::Sub, 3, 2, 0},         // node 3 -> conn 5, loop update
                          {OpKind::WhileEnd, 5, 0, 0}},   // node 4 -> conn 6
                         {6, 4});
    auto p = decode_genome(g);
    REQUIRE(p.nodes.size() == 5);

    SECTION("false condition: body registers stay at their defaults") {
        auto res = run_program(p, {SymVal(0.0), SymVal(0.0)}, {});
        CHECK(res.outputs[0].scalar() == 0.0);
        CHECK(res.outputs[1].scalar() == 0.0); // Add never ran
        CHECK_FALSE(res.capped);
    }
    SECTION("countdown loop terminates with the updated state") {
        auto res = run_program(p, {SymVal(3.0), SymVal(0.0)}, {});
        // iterations carry ws = 3, 2, 1; the final body pass sees ws = 1
        CHECK(res.outputs[0].scalar() == 0.0); // last Sub: 1 - 1
        CHECK(res.outputs[1].scalar() == 2.0); // last Add: 1 + 1
        CHECK_FALSE(res.capped);
    }
}

TEST_CASE("non-terminating loop stops at loop_cap with the capped flag") {
    auto g = make_genome(1,
                         {{OpKind::WhileStart, 0, 0, 0},  // node 0 -> conn 1
                          {OpKind::WhileEnd, 1, 0, 0}},   // node 1 -> conn 2, re-feeds the state
                         {2});
    auto p = decode_genome(g);
    auto res = run_program(p, {SymVal(1.0)}, {}, 1000);
    CHECK(res.capped);
}

TEST_CASE("unbalanced While pairs fail to decode") {
    auto lone_start = make_genome(1, {{OpKind::WhileStart, 0, 0, 0}}, {1});
    CHECK_THROWS_AS(decode_genome(lone_start), asos::DecodeError);
    auto lone_end = make_genome(1, {{OpKind::WhileEnd, 0, 0, 0}}, {1});
    CHECK_THROWS_AS(decode_genome(lone_end), asos::DecodeError);
}

TEST_CASE("runtime domain errors propagate the fault flag") {
    auto g = make_genome(1, {{OpKind::Inv, 0, 0, 0}}, {1});
    auto p = decode_genome(g);
    auto res = run_program(p, {SymVal(0.0)}, {});
    CHECK(res.faulted);
    CHECK(res.outputs[0].scalar() == kFaultValue);
}

TEST_CASE("mutation respects rate bounds and gene ranges") {
    RandomStream rng(31);
    GenomeShape shape;
    shape.n_inputs = 2;
    shape.cols = 10;
    shape.levels_back = 4;
    CgpGenome g = random_genome(shape, rng);

    SECTION("rate 0 leaves the genome identical") {
        CHECK(mutate(g, 0.0, rng) == g);
    }
    SECTION("rate 1 keeps every gene in its valid range") {
        auto m = mutate(g, 1.0, rng);
        CHECK_NOTHROW(m.check());
    }
    SECTION("mutants always decode") {
        CgpGenome with_loop = g;
        insert_while_pair(with_loop, 3, 7);
        CgpGenome cur = with_loop;
        for (int i = 0; i < 10000; ++i) {
            cur = mutate(i % 2 ? cur : with_loop, 0.2, rng);
            CHECK_NOTHROW(decode_genome(cur));
        }
    }
}

TEST_CASE("genome integer serialization round-trips") {
    RandomStream rng(41);
    GenomeShape shape;
    shape.n_inputs = 4;
    shape.n_outputs = 3;
    shape.cols = 7;
    for (int i = 0; i < 100; ++i) {
        CgpGenome g = random_genome(shape, rng);
        CHECK(CgpGenome::from_ints(g.to_ints()) == g);
    }
    CHECK_THROWS_AS(CgpGenome::from_ints({1, 1, 1}), asos::DecodeError);
}

TEST_CASE("evolution is elitist") {
    GenomeShape shape;
    shape.n_inputs = 2;
    shape.cols = 8;
    shape.levels_back = 8;
    // minimize |f(3,5) - 8|
    auto fitness = [](const CgpGenome& g) {
        auto p = decode_genome(g);
        auto r = run_program(p, {SymVal(3.0), SymVal(5.0)}, {});
        double y = r.outputs[0].scalar();
        if (!std::isfinite(y)) return 1e18;
        return std::fabs(y - 8.0);
    };

    SECTION("lambda 0 returns the best of the initial population") {
        EvolutionConfig cfg;
        cfg.mu = 5;
        cfg.lambda = 0;
        cfg.max_generations = 20;
        cfg.seed = 3;
        auto res = evolve(cfg, shape, fitness);
        for (double h : res.history) CHECK(h == res.history.front());
    }
    SECTION("history is non-increasing on every run") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            EvolutionConfig cfg;
            cfg.max_generations = 40;
            cfg.seed = seed;
            auto res = evolve(cfg, shape, fitness);
            for (std::size_t i = 1; i < res.history.size(); ++i)
                CHECK(res.history[i] <= res.history[i - 1]);
        }
    }
}

TEST_CASE("bitmask evolution matches brute force on a single bit") {
    auto fitness = [](const std::vector<std::uint8_t>& m) { return m[0] ? 3.0 : 1.0; };
    EvolutionConfig cfg;
    cfg.mu = 2;
    cfg.lambda = 4;
    cfg.max_generations = 10;
    cfg.seed = 1;
    auto res = evolve_bitmask(cfg, 1, fitness);
    // oracle: both masks evaluated exhaustively
    double best = std::min(fitness({0}), fitness({1}));
    CHECK(res.best_fitness == best);
    CHECK(res.best == std::vector<std::uint8_t>{0});
    for (std::size_t i = 1; i < res.history.size(); ++i)
        CHECK(res.history[i] <= res.history[i - 1]);
}

TEST_CASE("structural complexity multiplies node count by average out-degree") {
    SECTION("chain of two unary nodes scores 2") {
        auto g = make_genome(1, {{OpKind::Neg, 0, 0, 0}, {OpKind::Abs, 1, 0, 0}}, {2});
        CHECK(structural_complexity(decode_genome(g)) == 2.0);
    }
    SECTION("fan-out counts every consuming edge") {
        // one node feeding both inputs of a consumer plus the output gene:
        // nodes = 2, edges = Neg->Add (x2) + Add->output + Neg->output
        auto g = make_genome(1, {{OpKind::Neg, 0, 0, 0}, {OpKind::Add, 1, 1, 0}}, {2, 1});
        // out-degrees: Neg = 3, Add = 1 -> avg 2, c_s = 4
        CHECK(structural_complexity(decode_genome(g)) == 4.0);
    }
}

TEST_CASE("expression printing names operators and inputs") {
    auto g = make_genome(2, {{OpKind::Mul, 0, 1, 0}, {OpKind::Add, 2, 1, 0}}, {3});
    auto p = decode_genome(g);
    CHECK(to_expression(p) == "y0 = Add(Mul(x0, x1), x1)");
}
