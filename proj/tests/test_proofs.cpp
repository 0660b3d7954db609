#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "mutations.hpp"
#include "stretch/errors.hpp"
#include "stretch/lower_game.hpp"
#include "stretch/proofs.hpp"
#include "stretch/upper_game.hpp"

using namespace stretch;
namespace fs = std::filesystem;

namespace {

const fs::path kData = STRETCH_TEST_DATA;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

ProofDocument lower_doc(int m, int g) {
    LowerSolver solver({m, g});
    const Score v = solver.solve();
    return make_lower_proof({m, g}, solver.extract_strategy(), v.num());
}

ProofDocument upper_doc(int m, int g, OverflowLegality legality = OverflowLegality::AnyCompletion) {
    UpperSolver solver({m, g}, {}, legality);
    const Score v = solver.solve();
    return make_upper_proof({m, g}, solver.extract_strategy(), v.num(),
                            legality == OverflowLegality::BothBits ? "both" : "any");
}

}  // namespace

TEST_CASE("hand-transcribed two-bin tree proves 4/3") {
    const ProofDocument doc = read_proof_file(kData / "two_bins_g3.obsproof.json");
    CHECK(doc.game == GameKind::Lower);
    const VerifyResult r = verify(doc);
    CHECK(r.value == Score(4, 3));
    CHECK(r.claim_matches);
}

TEST_CASE("wrong claim is detected but the tree still verifies") {
    const VerifyResult r = verify(read_proof_file(kData / "two_bins_g3_wrong_claim.obsproof.json"));
    CHECK(r.value == Score(4, 3));
    CHECK_FALSE(r.claim_matches);
}

TEST_CASE("a node with children but no item is malformed") {
    CHECK_THROWS_AS(verify(read_proof_file(kData / "two_bins_g3_missing_item.obsproof.json")), MalformedTreeError);
}

TEST_CASE("truncated input is a parse error with a position") {
    try {
        read_proof_file(kData / "truncated.obsproof.json");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line > 1);
        CHECK(e.column >= 1);
    }
    CHECK_THROWS_AS(deserialize(""), ParseError);
    CHECK_THROWS_AS(deserialize("{\"m\": 2,"), ParseError);
}

TEST_CASE("schema violations are malformed trees") {
    CHECK_THROWS_AS(deserialize("[]"), MalformedTreeError);
    CHECK_THROWS_AS(deserialize("{}"), MalformedTreeError);
    std::string text = slurp(kData / "two_bins_g3.obsproof.json");
    auto j = nlohmann::json::parse(text);
    j["extra"] = 1;
    CHECK_THROWS_AS(deserialize(j.dump()), MalformedTreeError);
    j = nlohmann::json::parse(text);
    j["root"]["children"]["01"] = j["root"]["children"]["0"];
    j["root"]["children"].erase("0");
    CHECK_THROWS_AS(deserialize(j.dump()), MalformedTreeError);
    j = nlohmann::json::parse(text);
    j["game"] = "middle";
    CHECK_THROWS_AS(deserialize(j.dump()), MalformedTreeError);
    j = nlohmann::json::parse(text);
    j["schema_version"] = "2";
    CHECK_THROWS_AS(verify(deserialize(j.dump())), MalformedTreeError);
}

TEST_CASE("items that break the packing constraint are rejected") {
    auto j = nlohmann::json::parse(slurp(kData / "two_bins_g3.obsproof.json"));
    // Second item 1 -> 3 at loads [1,0]: {1,3} still fits, but child loads no longer match.
    auto k = j;
    k["root"]["children"]["0"]["item"] = 3;
    CHECK_THROWS_AS(verify(deserialize(k.dump())), MalformedTreeError);
    // An item larger than g.
    k = j;
    k["root"]["item"] = 4;
    CHECK_THROWS_AS(verify(deserialize(k.dump())), InfeasibleItemError);
}

TEST_CASE("serialization is deterministic and lossless") {
    const std::string text = slurp(kData / "two_bins_g3.obsproof.json");
    const ProofDocument doc = deserialize(text);
    const std::string once = serialize(doc);
    CHECK(serialize(doc) == once);
    CHECK(serialize(deserialize(once)) == once);
    CHECK(once.back() == '\n');
    CHECK(verify(deserialize(once)).value == Score(4, 3));

    const ProofDocument up = upper_doc(2, 2);
    const std::string u = serialize(up);
    CHECK(serialize(deserialize(u)) == u);
}

TEST_CASE("extracted lower strategies verify to the solved value") {
    for (auto [m, g] : {std::pair{1, 2}, {1, 5}, {2, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}}) {
        const ProofDocument doc = lower_doc(m, g);
        const VerifyResult r = verify(deserialize(serialize(doc)));
        CAPTURE(m);
        CAPTURE(g);
        CHECK(r.value == solve_lower({m, g}));
        CHECK(r.claim_matches);
    }
}

TEST_CASE("extracted upper strategies verify to the solved value") {
    for (auto [m, g] : {std::pair{1, 2}, {1, 4}, {2, 1}, {2, 2}, {2, 3}, {3, 2}}) {
        const ProofDocument doc = upper_doc(m, g);
        const VerifyResult r = verify(deserialize(serialize(doc)));
        CAPTURE(m);
        CAPTURE(g);
        CHECK(r.value == solve_upper({m, g}));
        CHECK(r.claim_matches);
    }
    const ProofDocument strict = upper_doc(2, 2, OverflowLegality::BothBits);
    const VerifyResult r = verify(deserialize(serialize(strict)));
    CHECK(r.value == solve_upper({2, 2}, {}, OverflowLegality::BothBits));
    CHECK(r.claim_matches);
}

TEST_CASE("upper tree without the class-1 branch is incomplete") {
    auto j = nlohmann::json::parse(serialize(upper_doc(1, 2)));
    REQUIRE(j["root"]["moves"].contains("1"));
    j["root"]["moves"].erase("1");
    CHECK_THROWS_AS(verify(deserialize(j.dump())), IncompleteStrategyError);
}

TEST_CASE("upper tree for two bins, g = 1") {
    const ProofDocument doc = upper_doc(2, 1);
    CHECK(verify(doc).value == Score(2, 1));
    const auto& root = std::get<UpperNode>(doc.root);
    REQUIRE(root.decisions.size() == 1);
    CHECK(root.decisions[0].item_class == 0);
}

TEST_CASE("every single-field mutation is rejected") {
    std::vector<std::pair<std::string, Score>> docs;
    docs.emplace_back(slurp(kData / "two_bins_g3.obsproof.json"), Score(4, 3));
    for (auto [m, g] : {std::pair{2, 2}, {2, 3}, {3, 2}})
        docs.emplace_back(serialize(lower_doc(m, g)), solve_lower({m, g}));
    for (auto [m, g] : {std::pair{1, 2}, {2, 1}, {2, 2}, {1, 3}})
        docs.emplace_back(serialize(upper_doc(m, g)), solve_upper({m, g}));

    size_t total = 0;
    for (const auto& [text, value] : docs) {
        for (const std::string& mutated : mutations::all(text)) {
            ++total;
            INFO(mutated);
            CHECK(mutations::rejected(mutated, value));
        }
    }
    CHECK(total > 200);
}

TEST_CASE("verify_lower and verify_upper refuse the other game") {
    CHECK_THROWS_AS(verify_upper(lower_doc(2, 2)), PreconditionError);
    CHECK_THROWS_AS(verify_lower(upper_doc(2, 2)), PreconditionError);
}

TEST_CASE("proof files round trip on disk") {
    const fs::path p = fs::temp_directory_path() / "stretch_test_roundtrip.obsproof.json";
    const ProofDocument doc = lower_doc(2, 3);
    write_proof_file(p, doc);
    CHECK(slurp(p) == serialize(doc));
    CHECK(verify(read_proof_file(p)).value == Score(4, 3));
    fs::remove(p);
    CHECK_THROWS_AS(read_proof_file(p), Error);
}
