#include "stretch/feasibility.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "stretch/errors.hpp"

namespace stretch {

std::vector<int> Packing::loads() const {
    std::vector<int> out;
    out.reserve(bins.size());
    for (const auto& b : bins) out.push_back(std::accumulate(b.begin(), b.end(), 0));
    return out;
}

ItemMultiset Packing::items() const {
    ItemMultiset s;
    for (const auto& b : bins)
        for (int y : b) s.add(y);
    return s;
}

namespace {

// Depth-first assignment of items (non-increasing) to bins. Failed
// (position, sorted loads) pairs are remembered; bins with equal load are
// interchangeable so only the first of each load value is tried.
class PackingSearch {
  public:
    PackingSearch(std::vector<int> items, int m, int capacity)
        : items_(std::move(items)), capacity_(capacity), loads_(static_cast<size_t>(m), 0),
          bins_(static_cast<size_t>(m)) {
        suffix_.assign(items_.size() + 1, 0);
        for (size_t i = items_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + items_[i];
    }

    bool run() { return place(0); }

    Packing packing() const { return Packing{bins_}; }

  private:
    bool place(size_t idx) {
        if (idx == items_.size()) return true;
        std::int64_t free_space = 0;
        for (int l : loads_) free_space += capacity_ - l;
        if (free_space < suffix_[idx]) return false;

        std::string key = memo_key(idx);
        if (failed_.contains(key)) return false;

        const int item = items_[idx];
        std::vector<int> tried;
        for (size_t b = 0; b < loads_.size(); ++b) {
            if (loads_[b] + item > capacity_) continue;
            if (std::find(tried.begin(), tried.end(), loads_[b]) != tried.end()) continue;
            tried.push_back(loads_[b]);
            loads_[b] += item;
            bins_[b].push_back(item);
            if (place(idx + 1)) return true;
            bins_[b].pop_back();
            loads_[b] -= item;
        }
        failed_.insert(std::move(key));
        return false;
    }

    std::string memo_key(size_t idx) const {
        std::vector<int> sorted = loads_;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        std::string key;
        key.push_back(static_cast<char>(idx & 0xff));
        key.push_back(static_cast<char>((idx >> 8) & 0xff));
        append_key(key, sorted);
        return key;
    }

    std::vector<int> items_;
    int capacity_;
    std::vector<std::int64_t> suffix_;
    std::vector<int> loads_;
    std::vector<std::vector<int>> bins_;
    std::unordered_set<std::string> failed_;
};

std::vector<int> positive_items(const ItemMultiset& items) {
    std::vector<int> out = items.sorted_desc();
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

bool trivially_infeasible(const ItemMultiset& items, int m, int capacity) {
    if (m < 1 || capacity < 0) return true;
    if (items.mass() > static_cast<std::int64_t>(m) * capacity) return true;
    return items.max_value() > capacity;
}

}  // namespace

bool fits(const ItemMultiset& items, int m, int capacity) {
    if (trivially_infeasible(items, m, capacity)) return false;
    if (m == 1) return true;  // mass bound already checked
    PackingSearch search(positive_items(items), m, capacity);
    return search.run();
}

std::optional<Packing> find_packing(const ItemMultiset& items, int m, int capacity) {
    if (trivially_infeasible(items, m, capacity)) return std::nullopt;
    PackingSearch search(positive_items(items), m, capacity);
    if (!search.run()) return std::nullopt;
    Packing p = search.packing();
    // Zero-size items go anywhere.
    for (int i = 0; i < items.count(0); ++i) p.bins[0].push_back(0);
    return p;
}

bool FeasibilityCache::fits(const ItemMultiset& items) {
    std::string key;
    items.append_key(key);
    if (auto hit = table_.find(key)) return *hit;
    bool ok = stretch::fits(items, m_, capacity_);
    table_.insert(key, ok);
    return ok;
}

bool is_critical_load(int load, int h) { return gt_sqrt(load - h, h); }

bool is_safe_load(int load, int h) { return load < h; }

bool is_movable_size(int size, int h) { return le_sqrt(size - 1, h); }

Packing repack_incremented(const Packing& packing, int h, int m) {
    if (h < 1) throw PreconditionError("repack_incremented: h must be positive");
    if (packing.bin_count() != m) throw PreconditionError("repack_incremented: packing must have exactly m bins");
    std::int64_t n = 0, mass = 0;
    for (const auto& bin : packing.bins) {
        std::int64_t load = 0;
        for (int y : bin) {
            if (y < 0) throw PreconditionError("repack_incremented: negative item size");
            load += y;
        }
        if (load > h) throw PreconditionError("repack_incremented: condition 1 violated (bin load exceeds h)");
        n += static_cast<std::int64_t>(bin.size());
        mass += load;
    }
    if (n + mass >= static_cast<std::int64_t>(m) * h)
        throw PreconditionError("repack_incremented: condition 2 violated (n + sum >= m*h)");

    Packing out = packing;
    for (auto& bin : out.bins)
        for (int& y : bin) y += 1;

    auto critical_items = [&](const std::vector<int>& loads) {
        std::int64_t c = 0;
        for (size_t b = 0; b < loads.size(); ++b)
            if (is_critical_load(loads[b], h)) c += static_cast<std::int64_t>(out.bins[b].size());
        return c;
    };

    std::vector<int> loads = out.loads();
    std::int64_t measure = critical_items(loads);
    while (measure > 0) {
        auto crit = std::find_if(loads.begin(), loads.end(), [&](int l) { return is_critical_load(l, h); });
        auto safe = std::find_if(loads.begin(), loads.end(), [&](int l) { return is_safe_load(l, h); });
        if (safe == loads.end()) throw InternalError("repack_incremented: no safe bin available");
        auto& src = out.bins[static_cast<size_t>(crit - loads.begin())];
        auto& dst = out.bins[static_cast<size_t>(safe - loads.begin())];

        auto pick = src.end();
        for (auto it = src.begin(); it != src.end(); ++it)
            if (is_movable_size(*it, h) && (pick == src.end() || *it < *pick)) pick = it;
        if (pick == src.end()) throw InternalError("repack_incremented: critical bin holds no movable item");

        int item = *pick;
        src.erase(pick);
        dst.push_back(item);
        *crit -= item;
        *safe += item;

        std::int64_t next = critical_items(loads);
        if (next >= measure) throw InternalError("repack_incremented: repair did not make progress");
        measure = next;
    }
    return out;
}

}  // namespace stretch
