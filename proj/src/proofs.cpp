#include "stretch/proofs.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "stretch/errors.hpp"
#include "stretch/feasibility.hpp"
#include "stretch/version.hpp"

// The verifiers below depend on core and feasibility only. They re-implement
// the game rules instead of calling into the solvers.

namespace stretch {

using json = nlohmann::json;

std::string to_string(GameKind kind) { return kind == GameKind::Lower ? "lower" : "upper"; }

namespace {

std::string utc_now() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ProofMeta fresh_meta() {
    ProofMeta meta;
    meta.version = kVersion;
    meta.created = utc_now();
    return meta;
}

// ---- serialization -------------------------------------------------------

json lower_to_json(const LowerNode& node) {
    json j;
    j["loads"] = node.loads;
    if (node.item) j["item"] = *node.item;
    if (!node.children.empty()) {
        json children = json::object();
        for (const auto& e : node.children) children[std::to_string(e.bin)] = lower_to_json(e.node);
        j["children"] = std::move(children);
    }
    return j;
}

json upper_to_json(const UpperNode& node) {
    json j;
    j["loads"] = node.loads;
    if (!node.decisions.empty()) {
        json moves = json::object();
        for (const auto& d : node.decisions) {
            json entry;
            entry["bin"] = d.bin;
            for (const auto& o : d.outcomes)
                entry[o.overflow ? "on_overflow" : "on_no_overflow"] = upper_to_json(o.node);
            moves[std::to_string(d.item_class)] = std::move(entry);
        }
        j["moves"] = std::move(moves);
    }
    return j;
}

// ---- deserialization -----------------------------------------------------

[[noreturn]] void schema_error(const std::string& what) { throw MalformedTreeError("proof schema: " + what); }

int as_int(const json& j, const char* what) {
    if (!j.is_number_integer()) schema_error(std::string(what) + " must be an integer");
    auto v = j.get<std::int64_t>();
    if (v < INT_MIN || v > INT_MAX) schema_error(std::string(what) + " out of range");
    return static_cast<int>(v);
}

int key_to_int(const std::string& key, const char* what) {
    if (key.empty() || key.size() > 9 || !std::all_of(key.begin(), key.end(), [](char c) { return c >= '0' && c <= '9'; }))
        schema_error(std::string(what) + " key '" + key + "' is not a non-negative integer");
    if (key.size() > 1 && key[0] == '0') schema_error(std::string(what) + " key '" + key + "' has a leading zero");
    return std::stoi(key);
}

void only_keys(const json& j, std::initializer_list<const char*> allowed, const char* what) {
    if (!j.is_object()) schema_error(std::string(what) + " must be an object");
    for (const auto& [k, _] : j.items())
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
            schema_error(std::string("unexpected field '") + k + "' in " + what);
}

LoadVector loads_from(const json& j) {
    if (!j.contains("loads") || !j["loads"].is_array()) schema_error("node without a loads array");
    LoadVector loads;
    for (const auto& v : j["loads"]) loads.push_back(as_int(v, "load"));
    return loads;
}

LowerNode lower_from_json(const json& j) {
    only_keys(j, {"loads", "item", "children"}, "lower node");
    LowerNode node;
    node.loads = loads_from(j);
    if (j.contains("item")) node.item = as_int(j["item"], "item");
    if (j.contains("children")) {
        if (!j["children"].is_object()) schema_error("children must be an object");
        for (const auto& [k, v] : j["children"].items())
            node.children.push_back({key_to_int(k, "child"), lower_from_json(v)});
    }
    return node;
}

UpperNode upper_from_json(const json& j) {
    only_keys(j, {"loads", "moves"}, "upper node");
    UpperNode node;
    node.loads = loads_from(j);
    if (j.contains("moves")) {
        if (!j["moves"].is_object()) schema_error("moves must be an object");
        for (const auto& [k, v] : j["moves"].items()) {
            only_keys(v, {"bin", "on_overflow", "on_no_overflow"}, "move");
            if (!v.contains("bin")) schema_error("move without bin");
            UpperDecision d{key_to_int(k, "move"), as_int(v["bin"], "bin"), {}};
            if (v.contains("on_no_overflow")) d.outcomes.push_back({0, upper_from_json(v["on_no_overflow"])});
            if (v.contains("on_overflow")) d.outcomes.push_back({1, upper_from_json(v["on_overflow"])});
            node.decisions.push_back(std::move(d));
        }
    }
    return node;
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
    int line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

// ---- verification --------------------------------------------------------

void check_config(const ProofDocument& doc) {
    if (doc.schema_version != "1") throw MalformedTreeError("unsupported schema_version '" + doc.schema_version + "'");
    if (doc.m < 1 || doc.g < 1) throw MalformedTreeError("m and g must be >= 1");
}

void expect_loads(const LoadVector& stated, const LoadVector& expected) {
    if (stated != expected)
        throw MalformedTreeError("node loads " + render_loads(stated) + " do not match recomputed " +
                                 render_loads(expected));
}

class LowerVerifier {
  public:
    explicit LowerVerifier(const ProofDocument& doc) : m_(doc.m), g_(doc.g) {}

    int walk(const LowerNode& node, const LoadVector& loads, const ItemMultiset& sent) {
        expect_loads(node.loads, loads);
        if (!node.item) {
            if (!node.children.empty()) throw MalformedTreeError("node at " + render_loads(loads) + " has children but no item");
            return max_load(loads);
        }
        const int y = *node.item;
        if (y < 1 || y > g_) throw InfeasibleItemError("item " + std::to_string(y) + " outside 1..g");
        const ItemMultiset next_sent = sent.with(y);
        if (!fits(next_sent, m_, g_))
            throw InfeasibleItemError("item " + std::to_string(y) + " at " + render_loads(loads) +
                                      " makes the items sent impossible to pack into m bins of size g");

        std::vector<int> replies = distinct_bin_moves(loads);
        if (node.children.size() != replies.size())
            throw MalformedTreeError("node at " + render_loads(loads) + " answers " +
                                     std::to_string(node.children.size()) + " replies, expected " +
                                     std::to_string(replies.size()));
        int least = INT_MAX;
        for (int bin : replies) {
            auto child = std::find_if(node.children.begin(), node.children.end(),
                                      [&](const LowerEdge& e) { return e.bin == bin; });
            if (child == node.children.end())
                throw MalformedTreeError("node at " + render_loads(loads) + " lacks a child for bin " + std::to_string(bin));
            least = std::min(least, walk(child->node, place(loads, bin, y), next_sent));
        }
        return least;
    }

  private:
    int m_;
    int g_;
};

class UpperVerifier {
  public:
    explicit UpperVerifier(const ProofDocument& doc)
        : m_(doc.m), g_(doc.g), both_bits_(doc.meta.overflow_legality == "both") {
        if (doc.meta.overflow_legality != "any" && doc.meta.overflow_legality != "both")
            throw MalformedTreeError("unknown overflow_legality '" + doc.meta.overflow_legality + "'");
    }

    int walk(const UpperNode& node, const LoadVector& loads, const ItemMultiset& sent) {
        expect_loads(node.loads, loads);
        const std::int64_t sum = total_load(loads);

        std::vector<std::pair<int, std::vector<int>>> legal;
        for (int c = 0; c <= g_ - 1; ++c) {
            if (!fits(sent.with(c), m_, g_ - 1)) continue;
            auto bits = overflow_bits(c, sum);
            if (!bits.empty()) legal.emplace_back(c, std::move(bits));
        }

        for (const auto& d : node.decisions)
            if (std::none_of(legal.begin(), legal.end(), [&](const auto& l) { return l.first == d.item_class; }))
                throw MalformedTreeError("decision for class " + std::to_string(d.item_class) + " at " +
                                         render_loads(loads) + " which the adversary cannot send");
        if (legal.empty()) return max_load(loads) + 1;

        const std::vector<int> reps = distinct_bin_moves(loads);
        int worst = 0;
        for (const auto& [c, bits] : legal) {
            auto matching = std::count_if(node.decisions.begin(), node.decisions.end(),
                                          [&](const UpperDecision& d) { return d.item_class == c; });
            if (matching == 0)
                throw IncompleteStrategyError("no decision for class " + std::to_string(c) + " at " + render_loads(loads));
            if (matching > 1) throw MalformedTreeError("duplicate decision for class " + std::to_string(c));
            const UpperDecision& d = *std::find_if(node.decisions.begin(), node.decisions.end(),
                                                   [&](const UpperDecision& x) { return x.item_class == c; });
            if (std::find(reps.begin(), reps.end(), d.bin) == reps.end())
                throw MalformedTreeError("bin " + std::to_string(d.bin) + " at " + render_loads(loads) +
                                         " is not a representative bin index");
            for (const auto& o : d.outcomes)
                if (std::find(bits.begin(), bits.end(), o.overflow) == bits.end())
                    throw MalformedTreeError("branch for an overflow bit the adversary cannot choose");
            const ItemMultiset next_sent = sent.with(c);
            for (int bit : bits) {
                auto n = std::count_if(d.outcomes.begin(), d.outcomes.end(),
                                       [&](const UpperOutcome& o) { return o.overflow == bit; });
                if (n == 0)
                    throw IncompleteStrategyError("class " + std::to_string(c) + " at " + render_loads(loads) +
                                                  " has no branch for overflow " + std::to_string(bit));
                if (n > 1) throw MalformedTreeError("duplicate overflow branch");
                const UpperOutcome& o = *std::find_if(d.outcomes.begin(), d.outcomes.end(),
                                                      [&](const UpperOutcome& x) { return x.overflow == bit; });
                worst = std::max(worst, walk(o.node, place(loads, d.bin, c + bit), next_sent));
            }
        }
        return worst;
    }

  private:
    std::vector<int> overflow_bits(int c, std::int64_t sum) const {
        const std::int64_t limit = static_cast<std::int64_t>(m_) * g_ - 1;
        std::vector<int> bits;
        if (c == 0) {
            if (sum + 1 <= limit) bits.push_back(1);
        } else if (both_bits_) {
            if (sum + c + 1 <= limit) bits = {0, 1};
        } else {
            if (sum + c <= limit) bits.push_back(0);
            if (sum + c + 1 <= limit) bits.push_back(1);
        }
        return bits;
    }

    int m_;
    int g_;
    bool both_bits_;
};

}  // namespace

ProofDocument make_lower_proof(const Config& config, LowerNode root, std::int64_t value_num) {
    ProofDocument doc;
    doc.game = GameKind::Lower;
    doc.m = config.m;
    doc.g = config.g;
    doc.value_num = value_num;
    doc.root = std::move(root);
    doc.meta = fresh_meta();
    return doc;
}

ProofDocument make_upper_proof(const Config& config, UpperNode root, std::int64_t value_num,
                               std::string overflow_legality) {
    ProofDocument doc;
    doc.game = GameKind::Upper;
    doc.m = config.m;
    doc.g = config.g;
    doc.value_num = value_num;
    doc.root = std::move(root);
    doc.meta = fresh_meta();
    doc.meta.overflow_legality = std::move(overflow_legality);
    return doc;
}

std::string serialize(const ProofDocument& doc) {
    json j;
    j["schema_version"] = doc.schema_version;
    j["game"] = to_string(doc.game);
    j["m"] = doc.m;
    j["g"] = doc.g;
    j["value_num"] = doc.value_num;
    if (doc.game == GameKind::Lower)
        j["root"] = lower_to_json(std::get<LowerNode>(doc.root));
    else
        j["root"] = upper_to_json(std::get<UpperNode>(doc.root));
    json meta;
    meta["tool"] = doc.meta.tool;
    meta["version"] = doc.meta.version;
    meta["created"] = doc.meta.created;
    if (doc.game == GameKind::Upper) meta["overflow_legality"] = doc.meta.overflow_legality;
    j["meta"] = std::move(meta);
    return j.dump(2) + "\n";
}

ProofDocument deserialize(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        auto [line, column] = line_column(text, e.byte);
        throw ParseError("parse error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                             e.what(),
                         line, column);
    }
    only_keys(j, {"schema_version", "game", "m", "g", "value_num", "root", "meta"}, "document");
    for (const char* field : {"schema_version", "game", "m", "g", "value_num", "root"})
        if (!j.contains(field)) schema_error(std::string("missing field '") + field + "'");

    ProofDocument doc;
    if (!j["schema_version"].is_string()) schema_error("schema_version must be a string");
    doc.schema_version = j["schema_version"].get<std::string>();
    if (!j["game"].is_string()) schema_error("game must be a string");
    const std::string game = j["game"].get<std::string>();
    if (game == "lower")
        doc.game = GameKind::Lower;
    else if (game == "upper")
        doc.game = GameKind::Upper;
    else
        schema_error("game must be 'lower' or 'upper'");
    doc.m = as_int(j["m"], "m");
    doc.g = as_int(j["g"], "g");
    if (!j["value_num"].is_number_integer()) schema_error("value_num must be an integer");
    doc.value_num = j["value_num"].get<std::int64_t>();
    if (doc.game == GameKind::Lower)
        doc.root = lower_from_json(j["root"]);
    else
        doc.root = upper_from_json(j["root"]);

    if (j.contains("meta")) {
        const json& meta = j["meta"];
        only_keys(meta, {"tool", "version", "created", "overflow_legality"}, "meta");
        auto text_field = [&](const char* k, std::string& out) {
            if (!meta.contains(k)) return;
            if (!meta[k].is_string()) schema_error(std::string("meta.") + k + " must be a string");
            out = meta[k].get<std::string>();
        };
        text_field("tool", doc.meta.tool);
        text_field("version", doc.meta.version);
        text_field("created", doc.meta.created);
        text_field("overflow_legality", doc.meta.overflow_legality);
    }
    return doc;
}

ProofDocument read_proof_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open proof file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize(buf.str());
}

void write_proof_file(const std::filesystem::path& path, const ProofDocument& doc) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write proof file " + path.string());
    out << serialize(doc);
    if (!out) throw Error("failed writing proof file " + path.string());
}

Score verify_lower(const ProofDocument& doc) {
    if (doc.game != GameKind::Lower) throw PreconditionError("verify_lower: not a lower-game document");
    check_config(doc);
    LowerVerifier v(doc);
    const LoadVector start(static_cast<size_t>(doc.m), 0);
    return Score(v.walk(std::get<LowerNode>(doc.root), start, ItemMultiset{}), doc.g);
}

Score verify_upper(const ProofDocument& doc) {
    if (doc.game != GameKind::Upper) throw PreconditionError("verify_upper: not an upper-game document");
    check_config(doc);
    UpperVerifier v(doc);
    const LoadVector start(static_cast<size_t>(doc.m), 0);
    return Score(v.walk(std::get<UpperNode>(doc.root), start, ItemMultiset{}), doc.g);
}

VerifyResult verify(const ProofDocument& doc) {
    Score value = doc.game == GameKind::Lower ? verify_lower(doc) : verify_upper(doc);
    return {value, value.num() == doc.value_num};
}

}  // namespace stretch
