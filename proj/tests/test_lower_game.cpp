#include <algorithm>
#include <functional>

#include "doctest.h"
#include "oracles.hpp"
#include "stretch/errors.hpp"
#include "stretch/lower_game.hpp"

using namespace stretch;

namespace {

LowerState state_of(std::vector<int> loads, std::vector<int> sent) {
    return {canonicalize(std::move(loads)), ItemMultiset::from_items(sent)};
}

SolveOptions opts(bool prune, int threads) {
    SolveOptions o;
    o.prune = prune;
    o.threads = threads;
    return o;
}

// Plays the extracted adversary tree against `policy` and returns the max
// load at the node where the tree stops. Bins stay physical on the policy
// side; the tree is followed through the canonical representative.
int play_tree(const LowerNode& root, LowerPolicy& policy, int m) {
    std::vector<int> physical(static_cast<size_t>(m), 0);
    ItemMultiset placed;
    const LowerNode* node = &root;
    while (node->item) {
        const int item = *node->item;
        const int bin = policy.choose(physical, placed, item);
        const int load = physical[static_cast<size_t>(bin)];
        physical[static_cast<size_t>(bin)] += item;
        placed.add(item);
        const auto rep = static_cast<int>(std::find(node->loads.begin(), node->loads.end(), load) - node->loads.begin());
        auto it = std::find_if(node->children.begin(), node->children.end(),
                               [&](const LowerEdge& e) { return e.bin == rep; });
        REQUIRE(it != node->children.end());
        node = &it->node;
        REQUIRE(canonicalize(physical) == node->loads);
    }
    return max_load(node->loads);
}

}  // namespace

TEST_CASE("legal_items_lower examples") {
    const Config c{2, 3};
    CHECK(legal_items_lower(LowerState::initial(c), c) == std::vector<int>{1, 2, 3});
    CHECK(legal_items_lower(state_of({3, 3}, {3, 3}), c).empty());
    CHECK(legal_items_lower(state_of({4, 0}, {2, 2}), c) == std::vector<int>{1});
}

TEST_CASE("lower values on hand examples") {
    CHECK(solve_lower({2, 3}) == Score(4, 3));
    CHECK(solve_lower({1, 5}) == Score(1, 1));
    const Score v22 = solve_lower({2, 2});
    CHECK(v22 >= Score(1, 1));
    CHECK(v22 <= Score(4, 3));
}

TEST_CASE("lower values match the brute-force oracle") {
    // Frozen oracle numerators, recomputed below for the quick cases.
    struct Row { int m, g, num; };
    const Row rows[] = {{1, 2, 2}, {1, 5, 5}, {2, 1, 1}, {2, 2, 2}, {2, 3, 4}, {2, 4, 5}, {3, 2, 2}};
    for (const Row& r : rows) {
        CAPTURE(r.m);
        CAPTURE(r.g);
        CHECK(solve_lower({r.m, r.g}) == Score(r.num, r.g));
        CHECK(oracle::lower_value(r.m, r.g) == r.num);
    }
}

TEST_CASE("voluntary stopping does not change the lower value") {
    for (auto [m, g] : {std::pair{1, 3}, {2, 2}, {2, 3}, {3, 2}})
        CHECK(oracle::lower_value(m, g, true) == oracle::lower_value(m, g, false));
}

TEST_CASE("refinement never lowers the lower value") {
    for (int g = 1; g <= 3; ++g)
        for (int k = 2; k <= 3; ++k) {
            if (g * k > 6) continue;
            CAPTURE(g);
            CAPTURE(k);
            CHECK(solve_lower({2, g * k}) >= solve_lower({2, g}));
        }
}

TEST_CASE("lower value is independent of pruning and thread count") {
    for (auto [m, g] : {std::pair{1, 4}, {2, 3}, {2, 4}, {3, 2}, {3, 3}}) {
        const Score base = solve_lower({m, g}, opts(true, 1));
        CHECK(solve_lower({m, g}, opts(false, 1)) == base);
        CHECK(solve_lower({m, g}, opts(true, 4)) == base);
        CHECK(solve_lower({m, g}, opts(false, 4)) == base);
    }
}

TEST_CASE("value() agrees with the oracle on interior positions") {
    LowerSolver solver({2, 3});
    solver.solve();
    // After items 1 and 1 went to different bins, the oracle restarts from there.
    std::vector<int> loads{1, 1}, sent{1, 1};
    CHECK(solver.value(state_of(loads, sent)) == oracle::lower_value(2, 3, loads, sent, false));
    loads = {2, 0};
    CHECK(solver.value(state_of(loads, sent)) == oracle::lower_value(2, 3, loads, sent, false));
}

TEST_CASE("extracted adversary tree for two bins, g = 3") {
    LowerSolver solver({2, 3});
    REQUIRE(solver.solve() == Score(4, 3));
    const LowerNode tree = solver.extract_strategy();
    REQUIRE(tree.item);
    CHECK(*tree.item == 1);

    LowerPolicy policy({2, 3});
    CHECK(play_tree(tree, policy, 2) == 4);
}

TEST_CASE("extracted adversary tree for one bin is a chain to load g") {
    const LowerNode tree = extract_adversary_strategy({1, 2});
    const LowerNode* node = &tree;
    while (node->item) {
        REQUIRE(node->children.size() == 1);
        node = &node->children.front().node;
    }
    CHECK(node->loads == LoadVector{2});
}

TEST_CASE("policy playouts never exceed the guarantee") {
    for (auto [m, g] : {std::pair{2, 2}, {2, 3}, {2, 4}, {3, 2}}) {
        LowerPolicy policy({m, g});
        const Score guarantee = policy.guarantee();
        CHECK(guarantee == solve_lower({m, g}));
        // Depth-first over every legal item sequence; the policy answers each.
        int worst = 0;
        std::function<void(std::vector<int>&, ItemMultiset&)> walk = [&](std::vector<int>& loads,
                                                                         ItemMultiset& placed) {
            worst = std::max(worst, *std::max_element(loads.begin(), loads.end()));
            for (int y = 1; y <= g; ++y) {
                ItemMultiset next = placed.with(y);
                if (!fits(next, m, g)) continue;
                const int bin = policy.choose(loads, placed, y);
                loads[static_cast<size_t>(bin)] += y;
                walk(loads, next);
                loads[static_cast<size_t>(bin)] -= y;
            }
        };
        std::vector<int> loads(static_cast<size_t>(m), 0);
        ItemMultiset placed;
        walk(loads, placed);
        CAPTURE(m);
        CAPTURE(g);
        CHECK(Score(worst, g) == guarantee);
    }
}

TEST_CASE("policy sequence interface") {
    LowerPolicy two({2, 3});
    CHECK(two(std::vector<int>{1}) == 0);
    LowerPolicy one({1, 4});
    CHECK(one(std::vector<int>{1, 2, 1}) == 0);
    CHECK_THROWS_AS(two(std::vector<int>{3, 3, 1}), IllegalSequenceError);
}

TEST_CASE("node budget raises ResourceLimitError") {
    SolveOptions o;
    o.max_nodes = 10;
    CHECK_THROWS_AS(solve_lower({2, 6}, o), ResourceLimitError);
}
