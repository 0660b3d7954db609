#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace stretch {

struct CacheRecord {
    std::string game;  // "lower", "upper" or "upper-both"
    int m = 0;
    int g = 0;
    std::int64_t value_num = 0;
    std::int64_t millis = 0;
    std::string proof_path;

    friend bool operator==(const CacheRecord&, const CacheRecord&) = default;
};

/// Append-only JSON-lines file of solved configurations.
class ResultsCache {
  public:
    explicit ResultsCache(std::filesystem::path path);

    /// $STRETCH_CACHE, or ./stretch-cache.jsonl when unset.
    static std::filesystem::path default_path();

    /// Most recent record for (game, m, g).
    std::optional<CacheRecord> find(const std::string& game, int m, int g) const;

    /// Appends one line and flushes it before returning.
    void append(const CacheRecord& record);

    const std::vector<CacheRecord>& records() const { return records_; }
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
    std::vector<CacheRecord> records_;
};

std::string to_json_line(const CacheRecord& record);
CacheRecord parse_json_line(const std::string& line);

inline constexpr const char* kCsvHeader = "m,g,game,value_num,value_dec,millis,proof_path";
std::string csv_row(const CacheRecord& record);

}  // namespace stretch
