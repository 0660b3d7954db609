#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "stretch/core.hpp"
#include "stretch/strategy.hpp"

namespace stretch {

enum class GameKind { Lower, Upper };

std::string to_string(GameKind kind);

struct ProofMeta {
    std::string tool = "stretch";
    std::string version;
    std::string created;  // ISO 8601, UTC
    /// Upper game only: "any" (default) or "both", see OverflowLegality.
    std::string overflow_legality = "any";

    friend bool operator==(const ProofMeta&, const ProofMeta&) = default;
};

/// A strategy tree together with the bound it claims. Lower documents hold an
/// adversary strategy, upper documents an algorithm decision tree.
struct ProofDocument {
    std::string schema_version = "1";
    GameKind game = GameKind::Lower;
    int m = 1;
    int g = 1;
    std::int64_t value_num = 0;  // claimed value is value_num / g
    std::variant<LowerNode, UpperNode> root;
    ProofMeta meta;
};

ProofDocument make_lower_proof(const Config& config, LowerNode root, std::int64_t value_num);
ProofDocument make_upper_proof(const Config& config, UpperNode root, std::int64_t value_num,
                               std::string overflow_legality = "any");

/// Canonical JSON: sorted keys, unquoted integers, two-space indent, trailing
/// newline. Equal documents serialize to identical bytes.
std::string serialize(const ProofDocument& doc);

/// Throws ParseError (with line and column) on invalid JSON and
/// MalformedTreeError when the JSON does not follow the proof schema.
ProofDocument deserialize(std::string_view text);

ProofDocument read_proof_file(const std::filesystem::path& path);
void write_proof_file(const std::filesystem::path& path, const ProofDocument& doc);

/// Re-derives the lower bound proved by an adversary strategy. Every item is
/// checked against the packing constraint, every distinct-load reply must
/// have exactly one child, and loads are recomputed along each branch. The
/// result is the least maximum load over all leaves.
Score verify_lower(const ProofDocument& doc);

/// Re-derives the upper bound of an algorithm decision tree by replaying
/// every legal adversary class and overflow bit. Leaves must be terminal.
Score verify_upper(const ProofDocument& doc);

struct VerifyResult {
    Score value;
    bool claim_matches;
};

VerifyResult verify(const ProofDocument& doc);

}  // namespace stretch
