#pragma once

// Single-field mutations of a proof document, for checking that the verifier
// notices every one of them.

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "stretch/errors.hpp"
#include "stretch/proofs.hpp"

namespace mutations {

using json = nlohmann::json;

// Calls `visit` with every node object of the tree under `node`.
inline void for_each_node(json& node, const std::function<void(json&)>& visit) {
    visit(node);
    if (node.contains("children"))
        for (auto& [key, child] : node["children"].items()) for_each_node(child, visit);
    if (node.contains("moves"))
        for (auto& [key, move] : node["moves"].items())
            for (const char* branch : {"on_no_overflow", "on_overflow"})
                if (move.contains(branch)) for_each_node(move[branch], visit);
}

inline size_t count_nodes(const json& root) {
    json copy = root;
    size_t n = 0;
    for_each_node(copy, [&](json&) { ++n; });
    return n;
}

// Applies `edit` to the k-th node (pre-order) of a copy of `doc` and returns
// the copy.
inline json edit_node(const json& doc, size_t k, const std::function<void(json&)>& edit) {
    json out = doc;
    size_t i = 0;
    for_each_node(out["root"], [&](json& node) {
        if (i++ == k) edit(node);
    });
    return out;
}

inline void rename_key(json& object, const std::string& from, const std::string& to) {
    json value = object[from];
    object.erase(from);
    object[to] = std::move(value);
}

/// Every single-field mutation: item sizes, bin keys and bin choices, class
/// and overflow keys, deleted children and moves, and the header integers.
inline std::vector<std::string> all(const std::string& text) {
    const json doc = json::parse(text);
    const int m = doc["m"].get<int>();
    const int g = doc["g"].get<int>();
    std::vector<std::string> out;
    auto emit = [&](const json& j) { out.push_back(j.dump(2)); };

    for (const char* field : {"m", "g", "value_num"})
        for (int d : {-1, 1}) {
            json j = doc;
            j[field] = j[field].get<long>() + d;
            emit(j);
        }

    const size_t nodes = count_nodes(doc["root"]);
    for (size_t k = 0; k < nodes; ++k) {
        json node = doc["root"];
        {
            size_t i = 0;
            json copy = doc["root"];
            for_each_node(copy, [&](json& n) {
                if (i++ == k) node = n;
            });
        }
        if (node.contains("item")) {
            const int item = node["item"].get<int>();
            for (int y = 0; y <= g + 1; ++y)
                if (y != item) emit(edit_node(doc, k, [y](json& n) { n["item"] = y; }));
        }
        if (node.contains("children")) {
            for (auto& [key, child] : node["children"].items()) {
                const std::string from = key;
                emit(edit_node(doc, k, [from](json& n) { n["children"].erase(from); }));
                for (int b = 0; b <= m; ++b) {
                    const std::string to = std::to_string(b);
                    if (node["children"].contains(to)) continue;
                    emit(edit_node(doc, k, [from, to](json& n) { rename_key(n["children"], from, to); }));
                }
            }
        }
        if (node.contains("moves")) {
            for (auto& [key, move] : node["moves"].items()) {
                const std::string cls = key;
                emit(edit_node(doc, k, [cls](json& n) { n["moves"].erase(cls); }));
                for (int c = 0; c <= g; ++c) {
                    const std::string to = std::to_string(c);
                    if (node["moves"].contains(to)) continue;
                    emit(edit_node(doc, k, [cls, to](json& n) { rename_key(n["moves"], cls, to); }));
                }
                const int bin = move["bin"].get<int>();
                for (int b = 0; b <= m; ++b)
                    if (b != bin) emit(edit_node(doc, k, [cls, b](json& n) { n["moves"][cls]["bin"] = b; }));
                for (const char* branch : {"on_no_overflow", "on_overflow"}) {
                    if (!move.contains(branch)) continue;
                    const std::string from = branch;
                    const std::string to = from == "on_overflow" ? "on_no_overflow" : "on_overflow";
                    emit(edit_node(doc, k, [cls, from](json& n) { n["moves"][cls].erase(from); }));
                    if (!move.contains(to))
                        emit(edit_node(doc, k, [cls, from, to](json& n) { rename_key(n["moves"][cls], from, to); }));
                }
            }
        }
    }
    return out;
}

/// True when the mutated document is rejected or proves something else.
inline bool rejected(const std::string& mutated, const stretch::Score& original) {
    try {
        const stretch::VerifyResult r = stretch::verify(stretch::deserialize(mutated));
        return !r.claim_matches || !(r.value == original);
    } catch (const stretch::Error&) {
        return true;
    }
}

}  // namespace mutations
