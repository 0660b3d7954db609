#pragma once

#include <optional>
#include <vector>

#include "stretch/core.hpp"

namespace stretch {

// Lower game: adversary strategy. Every internal node names the next item;
// children answer each distinct-load bin the algorithm may choose, keyed by
// the representative index in the node's canonical loads.

struct LowerEdge;

struct LowerNode {
    LoadVector loads;
    std::optional<int> item;
    std::vector<LowerEdge> children;

    bool is_leaf() const { return !item.has_value() && children.empty(); }
    size_t node_count() const;
};

struct LowerEdge {
    int bin = 0;
    LowerNode node;
};

// Upper game: algorithm decision tree. For every legal item class the node
// stores the chosen bin (canonical representative index) and one subtree per
// legal overflow outcome.

struct UpperDecision;

struct UpperNode {
    LoadVector loads;
    std::vector<UpperDecision> decisions;

    bool is_leaf() const { return decisions.empty(); }
    size_t node_count() const;
};

struct UpperOutcome;

struct UpperDecision {
    int item_class = 0;
    int bin = 0;
    std::vector<UpperOutcome> outcomes;  // keyed by overflow bit, ascending
};

struct UpperOutcome {
    int overflow = 0;
    UpperNode node;
};

inline size_t LowerNode::node_count() const {
    size_t n = 1;
    for (const auto& e : children) n += e.node.node_count();
    return n;
}

inline size_t UpperNode::node_count() const {
    size_t n = 1;
    for (const auto& d : decisions)
        for (const auto& o : d.outcomes) n += o.node.node_count();
    return n;
}

}  // namespace stretch
