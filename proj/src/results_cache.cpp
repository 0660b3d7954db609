#include "stretch/results_cache.hpp"

#include <cstdlib>
#include <fstream>

#include "json.hpp"
#include "stretch/core.hpp"
#include "stretch/errors.hpp"

namespace stretch {

using json = nlohmann::json;

std::string to_json_line(const CacheRecord& r) {
    json j;
    j["game"] = r.game;
    j["m"] = r.m;
    j["g"] = r.g;
    j["value_num"] = r.value_num;
    j["millis"] = r.millis;
    j["proof_path"] = r.proof_path;
    return j.dump();
}

CacheRecord parse_json_line(const std::string& line) {
    try {
        json j = json::parse(line);
        CacheRecord r;
        r.game = j.at("game").get<std::string>();
        r.m = j.at("m").get<int>();
        r.g = j.at("g").get<int>();
        r.value_num = j.at("value_num").get<std::int64_t>();
        r.millis = j.value("millis", std::int64_t{0});
        r.proof_path = j.value("proof_path", std::string{});
        return r;
    } catch (const json::exception& e) {
        throw Error(std::string("bad cache record: ") + e.what());
    }
}

ResultsCache::ResultsCache(std::filesystem::path path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            records_.push_back(parse_json_line(line));
        } catch (const Error& e) {
            throw Error(path_.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

std::filesystem::path ResultsCache::default_path() {
    if (const char* env = std::getenv("STRETCH_CACHE"); env && *env) return env;
    return "stretch-cache.jsonl";
}

std::optional<CacheRecord> ResultsCache::find(const std::string& game, int m, int g) const {
    for (auto it = records_.rbegin(); it != records_.rend(); ++it)
        if (it->game == game && it->m == m && it->g == g) return *it;
    return std::nullopt;
}

void ResultsCache::append(const CacheRecord& record) {
    std::ofstream out(path_, std::ios::app);
    if (!out) throw Error("cannot open cache file " + path_.string());
    out << to_json_line(record) << '\n';
    out.flush();
    if (!out) throw Error("failed writing cache file " + path_.string());
    records_.push_back(record);
}

std::string csv_row(const CacheRecord& r) {
    std::string path = r.proof_path;
    if (path.find_first_of(",\"\n") != std::string::npos) {
        std::string quoted = "\"";
        for (char c : path) {
            if (c == '"') quoted += '"';
            quoted += c;
        }
        path = quoted + "\"";
    }
    return std::to_string(r.m) + "," + std::to_string(r.g) + "," + r.game + "," + std::to_string(r.value_num) + "," +
           Score(r.value_num, r.g).to_decimal(4) + "," + std::to_string(r.millis) + "," + path;
}

}  // namespace stretch
