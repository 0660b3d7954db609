#pragma once

#include <array>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

namespace stretch {

/// Hash map split into independently locked shards. Inserts are merged with
/// a caller-supplied function so concurrent writers of the same key converge.
template <typename Value, size_t Shards = 64>
class ShardedTable {
  public:
    std::optional<Value> find(const std::string& key) const {
        const Shard& s = shard_for(key);
        std::lock_guard lock(s.mutex);
        auto it = s.map.find(key);
        if (it == s.map.end()) return std::nullopt;
        return it->second;
    }

    template <typename Merge>
    Value upsert(const std::string& key, const Value& value, Merge merge) {
        Shard& s = shard_for(key);
        std::lock_guard lock(s.mutex);
        auto [it, inserted] = s.map.try_emplace(key, value);
        if (!inserted) it->second = merge(it->second, value);
        return it->second;
    }

    void insert(const std::string& key, const Value& value) {
        upsert(key, value, [](const Value&, const Value& v) { return v; });
    }

    size_t size() const {
        size_t n = 0;
        for (const Shard& s : shards_) {
            std::lock_guard lock(s.mutex);
            n += s.map.size();
        }
        return n;
    }

  private:
    struct Shard {
        mutable std::mutex mutex;
        std::unordered_map<std::string, Value> map;
    };

    Shard& shard_for(const std::string& key) { return shards_[std::hash<std::string>{}(key) % Shards]; }
    const Shard& shard_for(const std::string& key) const {
        return shards_[std::hash<std::string>{}(key) % Shards];
    }

    std::array<Shard, Shards> shards_;
};

}  // namespace stretch
