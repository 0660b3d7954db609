#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace stretch {

/// Instance parameters: number of bins and granularity.
struct Config {
    int m = 1;
    int g = 1;

    void validate() const;
    friend bool operator==(const Config&, const Config&) = default;
};

/// Exact game value num/denom. Comparisons cross-multiply, never divide.
class Score {
  public:
    Score(std::int64_t num, std::int64_t denom);

    std::int64_t num() const { return num_; }
    std::int64_t denom() const { return denom_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(denom_); }

    /// "p/q" in lowest terms; q is printed even when it is 1.
    std::string to_fraction() const;
    /// Decimal with `places` digits, rounded half-even, computed exactly.
    std::string to_decimal(int places = 4) const;

    friend bool operator==(const Score& a, const Score& b);
    friend std::strong_ordering operator<=>(const Score& a, const Score& b);

  private:
    std::int64_t num_;
    std::int64_t denom_;
};

/// Bin loads, kept sorted non-increasing.
using LoadVector = std::vector<int>;

/// Multiset of non-negative integer sizes (or classes), stored as counts
/// indexed by value.
class ItemMultiset {
  public:
    ItemMultiset() = default;
    static ItemMultiset from_items(std::span<const int> items);

    void add(int value, int count = 1);
    /// Removes one copy; throws if none present.
    void remove(int value);
    ItemMultiset with(int value) const;

    int count(int value) const;
    int size() const { return size_; }
    std::int64_t mass() const { return mass_; }
    int max_value() const;
    bool empty() const { return size_ == 0; }

    /// Items in non-increasing order.
    std::vector<int> sorted_desc() const;
    const std::vector<int>& counts() const { return counts_; }

    /// Compact byte key usable in hash tables.
    void append_key(std::string& out) const;

    friend bool operator==(const ItemMultiset& a, const ItemMultiset& b);

  private:
    std::vector<int> counts_;
    int size_ = 0;
    std::int64_t mass_ = 0;
};

LoadVector canonicalize(LoadVector loads);
bool is_canonical(std::span<const int> loads);

/// One representative bin index per distinct load value (the lowest index
/// holding that load), ascending. Expects canonical loads.
std::vector<int> distinct_bin_moves(std::span<const int> loads);

/// Canonical successor after adding `amount` to bin `bin`.
LoadVector place(std::span<const int> loads, int bin, int amount);

int max_load(std::span<const int> loads);
std::int64_t total_load(std::span<const int> loads);

/// Appends a load vector to a hash key.
void append_key(std::string& out, std::span<const int> loads);

/// Exact integer tests against square roots of non-negative integers.
bool le_sqrt(std::int64_t x, std::int64_t n);   // x <= sqrt(n)
bool ge_sqrt(std::int64_t x, std::int64_t n);   // x >= sqrt(n)
bool gt_sqrt(std::int64_t x, std::int64_t n);   // x >  sqrt(n)

std::string render_loads(std::span<const int> loads);

}  // namespace stretch
