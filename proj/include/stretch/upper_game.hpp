#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "stretch/core.hpp"
#include "stretch/feasibility.hpp"
#include "stretch/lower_game.hpp"
#include "stretch/strategy.hpp"
#include "stretch/table.hpp"

namespace stretch {

/// Upper game position: canonical bin load classes plus the item classes
/// sent so far. The overflow count is sum(load_classes) - sum(sent).
struct UpperState {
    LoadVector load_classes;
    ItemMultiset sent_classes;

    static UpperState initial(const Config& config);
};

/// How the adversary's overflow choice interacts with item legality.
enum class OverflowLegality {
    /// A class may be sent if at least one overflow bit keeps the load-class
    /// sum within m*g - 1; the later choice is restricted to such bits.
    AnyCompletion,
    /// A nonzero class may be sent only if both bits are within the sum
    /// bound (class 0 always needs its forced overflow to be within it).
    BothBits,
};

struct UpperMove {
    int item_class;
    std::vector<int> overflow_bits;  // ascending, non-empty

    friend bool operator==(const UpperMove&, const UpperMove&) = default;
};

/// Adversary moves in ascending class order. A class is listed when the
/// classes sent so far plus it fit m bins of size g - 1 and some overflow bit
/// is allowed; class 0 always overflows.
std::vector<UpperMove> legal_moves_upper(const UpperState& state, const Config& config,
                                         OverflowLegality legality = OverflowLegality::AnyCompletion);

/// Overflow bits allowed for `item_class` when the load classes sum to `load_sum`.
std::vector<int> legal_overflow_bits(int item_class, std::int64_t load_sum, const Config& config,
                                     OverflowLegality legality);

/// Min-max solver for the upper bound game: the adversary picks a class, the
/// algorithm a bin, then the adversary the overflow bit. The score is the
/// highest load class plus one.
class UpperSolver {
  public:
    explicit UpperSolver(Config config, SolveOptions options = {},
                         OverflowLegality legality = OverflowLegality::AnyCompletion);

    Score solve();
    int value(const UpperState& state);
    std::vector<UpperMove> legal_moves(const LoadVector& loads, const ItemMultiset& sent);

    /// Complete algorithm decision tree realising the root value.
    UpperNode extract_strategy();

    const Config& config() const { return config_; }
    OverflowLegality legality() const { return legality_; }
    std::uint64_t nodes_visited() const { return nodes_.load(); }

  private:
    int search(const LoadVector& loads, const ItemMultiset& sent, int alpha, int beta);
    int solve_parallel();
    UpperNode extract(const LoadVector& loads, const ItemMultiset& sent);
    void count_node();

    Config config_;
    SolveOptions options_;
    OverflowLegality legality_;
    FeasibilityCache feasible_;
    ShardedTable<ValueBounds> table_;
    std::atomic<std::uint64_t> nodes_{0};
};

Score solve_upper(const Config& config, const SolveOptions& options = {},
                  OverflowLegality legality = OverflowLegality::AnyCompletion);
UpperNode extract_algorithm_strategy(const Config& config, const SolveOptions& options = {},
                                     OverflowLegality legality = OverflowLegality::AnyCompletion);

}  // namespace stretch
