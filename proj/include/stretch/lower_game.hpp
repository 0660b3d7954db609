#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

#include "stretch/core.hpp"
#include "stretch/feasibility.hpp"
#include "stretch/strategy.hpp"
#include "stretch/table.hpp"

namespace stretch {

struct SolveOptions {
    bool prune = true;
    int threads = 1;
    /// Abort with ResourceLimitError after this many visited nodes (0 = unlimited).
    std::uint64_t max_nodes = 0;
};

/// Lower game position: canonical loads plus every item sent so far.
struct LowerState {
    LoadVector loads;
    ItemMultiset sent;

    static LowerState initial(const Config& config);
};

/// Item sizes 1..g the adversary may send next, ascending.
std::vector<int> legal_items_lower(const LowerState& state, const Config& config);

/// Interval of what is known about a position's value.
struct ValueBounds {
    int lo;
    int hi;
};

/// Min-max solver for the lower bound game. Item sizes are integers 1..g,
/// the sent multiset must fit m bins of size g, and the game ends when no
/// further item fits. The score is the final maximum load.
///
/// The transposition table is keyed by (canonical loads, sent multiset) and
/// stores value bounds, so pruned and exhaustive searches can share it.
class LowerSolver {
  public:
    explicit LowerSolver(Config config, SolveOptions options = {});

    /// Root value as num/g.
    Score solve();

    /// Exact value (scaled by g) of an arbitrary legal position.
    int value(const LowerState& state);

    std::vector<int> legal_items(const ItemMultiset& sent);

    /// Adversary strategy realising the root value. Branches stop as soon
    /// as the maximum load already reaches the root value.
    LowerNode extract_strategy();

    const Config& config() const { return config_; }
    std::uint64_t nodes_visited() const { return nodes_.load(); }

  private:
    int search(const LoadVector& loads, const ItemMultiset& sent, int alpha, int beta);
    int solve_parallel();
    LowerNode extract(const LoadVector& loads, const ItemMultiset& sent, int target);
    void count_node();

    Config config_;
    SolveOptions options_;
    FeasibilityCache feasible_;
    ShardedTable<ValueBounds> table_;
    std::atomic<std::uint64_t> nodes_{0};
};

Score solve_lower(const Config& config, const SolveOptions& options = {});
LowerNode extract_adversary_strategy(const Config& config, const SolveOptions& options = {});

/// Algorithm side of the solved lower game: places each item so that the
/// resulting position has the least value. Bins are physical (not sorted);
/// ties go to the lowest index.
class LowerPolicy {
  public:
    explicit LowerPolicy(Config config, SolveOptions options = {});
    explicit LowerPolicy(std::shared_ptr<LowerSolver> solver);

    /// Bin for `item` given the current physical loads and the items placed
    /// so far. Throws IllegalSequenceError if placed+item does not fit.
    int choose(std::span<const int> loads, const ItemMultiset& placed, int item);

    /// Replays the whole sequence and returns the bin of its last item.
    int operator()(std::span<const int> sequence);

    /// Max load the policy never exceeds, as num/g.
    Score guarantee();

    const Config& config() const { return solver_->config(); }

  private:
    std::shared_ptr<LowerSolver> solver_;
};

}  // namespace stretch
