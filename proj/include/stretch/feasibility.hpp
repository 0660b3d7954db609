#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "stretch/core.hpp"
#include "stretch/table.hpp"

namespace stretch {

/// Assignment of items to bins. Bin order is significant.
struct Packing {
    std::vector<std::vector<int>> bins;

    int bin_count() const { return static_cast<int>(bins.size()); }
    std::vector<int> loads() const;
    ItemMultiset items() const;
};

/// Exact decision: can every item be assigned to one of m bins of the given
/// capacity? Zero-size items are always placeable.
bool fits(const ItemMultiset& items, int m, int capacity);

/// Witness-producing variant of fits.
std::optional<Packing> find_packing(const ItemMultiset& items, int m, int capacity);

/// Memo of fits() answers for fixed (m, capacity), safe to share between
/// threads of one solve.
class FeasibilityCache {
  public:
    FeasibilityCache(int m, int capacity) : m_(m), capacity_(capacity) {}

    bool fits(const ItemMultiset& items);

    int m() const { return m_; }
    int capacity() const { return capacity_; }
    size_t size() const { return table_.size(); }

  private:
    int m_;
    int capacity_;
    ShardedTable<bool> table_;
};

/// Takes a packing of items y_i into m bins of load <= h with
/// n + sum(y_i) < m*h, increments every item by one and repairs the packing
/// so that no bin exceeds h + sqrt(h).
///
/// Repair moves the smallest item of size <= sqrt(h) + 1 out of the
/// lowest-index critical bin (load > h + sqrt(h)) into the lowest-index safe
/// bin (load < h), until no critical bin remains.
///
/// Throws PreconditionError when the input packing violates either condition.
Packing repack_incremented(const Packing& packing, int h, int m);

/// Threshold predicates of repack_incremented, exact.
bool is_critical_load(int load, int h);
bool is_safe_load(int load, int h);
bool is_movable_size(int size, int h);

}  // namespace stretch
