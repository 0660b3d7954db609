#include <functional>

#include "doctest.h"
#include "oracles.hpp"
#include "stretch/errors.hpp"
#include "stretch/lower_game.hpp"
#include "stretch/upper_game.hpp"

using namespace stretch;

namespace {

SolveOptions opts(bool prune, int threads) {
    SolveOptions o;
    o.prune = prune;
    o.threads = threads;
    return o;
}

UpperState state_of(std::vector<int> loads, std::vector<int> sent) {
    return {canonicalize(std::move(loads)), ItemMultiset::from_items(sent)};
}

}  // namespace

TEST_CASE("legal_moves_upper examples") {
    CHECK(legal_moves_upper(UpperState::initial({2, 1}), {2, 1}) == std::vector<UpperMove>{{0, {1}}});
    CHECK(legal_moves_upper(UpperState::initial({1, 2}), {1, 2}) == std::vector<UpperMove>{{0, {1}}, {1, {0}}});
    // Load classes already sum to m*g - 1.
    CHECK(legal_moves_upper(state_of({3, 2}, {1, 1}), {2, 3}).empty());
    CHECK(legal_moves_upper(state_of({2}, {1}), {1, 3}).empty());
}

TEST_CASE("strict overflow legality drops classes with a single legal bit") {
    CHECK(legal_moves_upper(UpperState::initial({1, 2}), {1, 2}, OverflowLegality::BothBits) ==
          std::vector<UpperMove>{{0, {1}}});
    CHECK(legal_overflow_bits(0, 0, {2, 2}, OverflowLegality::AnyCompletion) == std::vector<int>{1});
    // m = 2, g = 2: load classes may sum to at most 3.
    CHECK(legal_overflow_bits(1, 1, {2, 2}, OverflowLegality::AnyCompletion) == std::vector<int>{0, 1});
    CHECK(legal_overflow_bits(1, 1, {2, 2}, OverflowLegality::BothBits) == std::vector<int>{0, 1});
    CHECK(legal_overflow_bits(1, 2, {2, 2}, OverflowLegality::AnyCompletion) == std::vector<int>{0});
    CHECK(legal_overflow_bits(1, 2, {2, 2}, OverflowLegality::BothBits).empty());
    CHECK(legal_overflow_bits(1, 3, {2, 2}, OverflowLegality::AnyCompletion).empty());
    CHECK(legal_overflow_bits(0, 3, {2, 2}, OverflowLegality::AnyCompletion).empty());
}

TEST_CASE("upper values on hand examples") {
    CHECK(solve_upper({2, 1}) == Score(2, 1));
    CHECK(solve_upper({1, 2}) == Score(1, 1));
    CHECK(solve_upper({2, 2}) >= Score(4, 3));
}

TEST_CASE("upper values match the brute-force oracle") {
    struct Row { int m, g, num; };
    const Row rows[] = {{1, 2, 2}, {1, 5, 5}, {2, 1, 2}, {2, 2, 3}, {2, 3, 4}, {2, 4, 6}, {3, 2, 4}};
    for (const Row& r : rows) {
        CAPTURE(r.m);
        CAPTURE(r.g);
        CHECK(solve_upper({r.m, r.g}) == Score(r.num, r.g));
        if (r.g <= 3) CHECK(oracle::upper_value(r.m, r.g) == r.num);
    }
}

TEST_CASE("upper values lie in [1, 2] and above every lower value") {
    for (int g = 1; g <= 4; ++g) {
        const Score u = solve_upper({2, g});
        CHECK(u >= Score(1, 1));
        CHECK(u <= Score(2, 1));
        CHECK(u >= Score(4, 3));
        for (int g2 = 1; g2 <= 4; ++g2) CHECK(solve_lower({2, g2}) <= u);
    }
}

TEST_CASE("upper value is independent of pruning and thread count") {
    for (auto [m, g] : {std::pair{1, 4}, {2, 2}, {2, 3}, {3, 2}}) {
        const Score base = solve_upper({m, g});
        CHECK(solve_upper({m, g}, opts(false, 1)) == base);
        CHECK(solve_upper({m, g}, opts(true, 4)) == base);
        CHECK(solve_upper({m, g}, opts(false, 4)) == base);
    }
}

TEST_CASE("strict legality never raises the value") {
    for (auto [m, g] : {std::pair{1, 3}, {2, 2}, {2, 3}, {3, 2}}) {
        const Score any = solve_upper({m, g});
        const Score both = solve_upper({m, g}, {}, OverflowLegality::BothBits);
        CAPTURE(m);
        CAPTURE(g);
        CHECK(both <= any);
        CHECK(solve_upper({m, g}, opts(false, 2), OverflowLegality::BothBits) == both);
    }
}

TEST_CASE("extracted algorithm tree is complete and realises the value") {
    for (auto [m, g] : {std::pair{2, 1}, {1, 2}, {2, 2}, {2, 3}}) {
        UpperSolver solver({m, g});
        const Score v = solver.solve();
        const UpperNode tree = solver.extract_strategy();
        // Walk every adversary choice, checking each legal class is answered.
        std::function<int(const UpperNode&, const ItemMultiset&)> worst = [&](const UpperNode& node,
                                                                            const ItemMultiset& sent) {
            const auto moves = legal_moves_upper({node.loads, sent}, {m, g});
            REQUIRE(moves.size() == node.decisions.size());
            if (moves.empty()) return max_load(node.loads) + 1;
            int w = 0;
            for (size_t i = 0; i < moves.size(); ++i) {
                const UpperDecision& d = node.decisions[i];
                REQUIRE(d.item_class == moves[i].item_class);
                REQUIRE(d.outcomes.size() == moves[i].overflow_bits.size());
                for (const UpperOutcome& o : d.outcomes) {
                    REQUIRE(o.node.loads == place(node.loads, d.bin, d.item_class + o.overflow));
                    w = std::max(w, worst(o.node, sent.with(d.item_class)));
                }
            }
            return w;
        };
        CAPTURE(m);
        CAPTURE(g);
        CHECK(Score(worst(tree, ItemMultiset{}), g) == v);
    }
}

TEST_CASE("upper node budget raises ResourceLimitError") {
    SolveOptions o;
    o.max_nodes = 5;
    CHECK_THROWS_AS(solve_upper({2, 4}, o), ResourceLimitError);
}
