#include "stretch/core.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "stretch/errors.hpp"

namespace stretch {

void Config::validate() const {
    if (m < 1) throw PreconditionError("bin count m must be >= 1");
    if (g < 1) throw PreconditionError("granularity g must be >= 1");
}

Score::Score(std::int64_t num, std::int64_t denom) : num_(num), denom_(denom) {
    if (denom <= 0) throw PreconditionError("score denominator must be positive");
    if (num < 0) throw PreconditionError("score numerator must be non-negative");
}

std::string Score::to_fraction() const {
    std::int64_t d = std::gcd(num_, denom_);
    if (d == 0) d = 1;
    std::int64_t p = num_ / d, q = denom_ / d;
    return std::to_string(p) + "/" + std::to_string(q);
}

std::string Score::to_decimal(int places) const {
    std::int64_t scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    __int128 scaled = static_cast<__int128>(num_) * scale;
    __int128 q = scaled / denom_;
    __int128 r = scaled % denom_;
    // Half-even: compare 2r with the denominator.
    __int128 twice = 2 * r;
    if (twice > denom_ || (twice == denom_ && (q % 2) == 1)) ++q;
    auto whole = static_cast<std::int64_t>(q / scale);
    auto frac = static_cast<std::int64_t>(q % scale);
    std::string out = std::to_string(whole);
    if (places > 0) {
        std::string f = std::to_string(frac);
        out += "." + std::string(static_cast<size_t>(places) - f.size(), '0') + f;
    }
    return out;
}

bool operator==(const Score& a, const Score& b) {
    return static_cast<__int128>(a.num_) * b.denom_ == static_cast<__int128>(b.num_) * a.denom_;
}

std::strong_ordering operator<=>(const Score& a, const Score& b) {
    __int128 l = static_cast<__int128>(a.num_) * b.denom_;
    __int128 r = static_cast<__int128>(b.num_) * a.denom_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

ItemMultiset ItemMultiset::from_items(std::span<const int> items) {
    ItemMultiset s;
    for (int v : items) s.add(v);
    return s;
}

void ItemMultiset::add(int value, int count) {
    if (value < 0) throw PreconditionError("item values must be non-negative");
    if (count < 0) throw PreconditionError("item count must be non-negative");
    if (count == 0) return;
    if (static_cast<size_t>(value) >= counts_.size()) counts_.resize(static_cast<size_t>(value) + 1, 0);
    counts_[static_cast<size_t>(value)] += count;
    size_ += count;
    mass_ += static_cast<std::int64_t>(value) * count;
}

void ItemMultiset::remove(int value) {
    if (count(value) == 0) throw PreconditionError("removing an absent item");
    counts_[static_cast<size_t>(value)] -= 1;
    size_ -= 1;
    mass_ -= value;
    while (!counts_.empty() && counts_.back() == 0) counts_.pop_back();
}

ItemMultiset ItemMultiset::with(int value) const {
    ItemMultiset s = *this;
    s.add(value);
    return s;
}

int ItemMultiset::count(int value) const {
    if (value < 0 || static_cast<size_t>(value) >= counts_.size()) return 0;
    return counts_[static_cast<size_t>(value)];
}

int ItemMultiset::max_value() const {
    for (int v = static_cast<int>(counts_.size()) - 1; v >= 0; --v)
        if (counts_[static_cast<size_t>(v)] > 0) return v;
    return -1;
}

std::vector<int> ItemMultiset::sorted_desc() const {
    std::vector<int> out;
    out.reserve(static_cast<size_t>(size_));
    for (int v = static_cast<int>(counts_.size()) - 1; v >= 0; --v)
        out.insert(out.end(), static_cast<size_t>(counts_[static_cast<size_t>(v)]), v);
    return out;
}

void ItemMultiset::append_key(std::string& out) const {
    int top = max_value();
    out.push_back('|');
    for (int v = 0; v <= top; ++v) {
        int c = counts_[static_cast<size_t>(v)];
        out.push_back(static_cast<char>(c & 0xff));
        out.push_back(static_cast<char>((c >> 8) & 0xff));
    }
}

bool operator==(const ItemMultiset& a, const ItemMultiset& b) {
    int top = std::max(a.max_value(), b.max_value());
    for (int v = 0; v <= top; ++v)
        if (a.count(v) != b.count(v)) return false;
    return true;
}

LoadVector canonicalize(LoadVector loads) {
    std::sort(loads.begin(), loads.end(), std::greater<>());
    return loads;
}

bool is_canonical(std::span<const int> loads) {
    return std::is_sorted(loads.begin(), loads.end(), std::greater<>());
}

std::vector<int> distinct_bin_moves(std::span<const int> loads) {
    std::vector<int> out;
    for (size_t i = 0; i < loads.size(); ++i)
        if (i == 0 || loads[i] != loads[i - 1]) out.push_back(static_cast<int>(i));
    return out;
}

LoadVector place(std::span<const int> loads, int bin, int amount) {
    LoadVector next(loads.begin(), loads.end());
    next.at(static_cast<size_t>(bin)) += amount;
    // Only one entry moved up; bubble it towards the front.
    auto i = static_cast<size_t>(bin);
    while (i > 0 && next[i] > next[i - 1]) {
        std::swap(next[i], next[i - 1]);
        --i;
    }
    return next;
}

int max_load(std::span<const int> loads) {
    int best = 0;
    for (int l : loads) best = std::max(best, l);
    return best;
}

std::int64_t total_load(std::span<const int> loads) {
    return std::accumulate(loads.begin(), loads.end(), std::int64_t{0});
}

void append_key(std::string& out, std::span<const int> loads) {
    for (int l : loads) {
        out.push_back(static_cast<char>(l & 0xff));
        out.push_back(static_cast<char>((l >> 8) & 0xff));
    }
}

bool le_sqrt(std::int64_t x, std::int64_t n) {
    if (x <= 0) return true;
    return static_cast<__int128>(x) * x <= n;
}

bool ge_sqrt(std::int64_t x, std::int64_t n) {
    if (x < 0) return false;
    return static_cast<__int128>(x) * x >= n;
}

bool gt_sqrt(std::int64_t x, std::int64_t n) {
    if (x <= 0) return false;
    return static_cast<__int128>(x) * x > n;
}

std::string render_loads(std::span<const int> loads) {
    std::ostringstream os;
    os << '(';
    for (size_t i = 0; i < loads.size(); ++i) os << (i ? "," : "") << loads[i];
    os << ')';
    return os.str();
}

}  // namespace stretch
