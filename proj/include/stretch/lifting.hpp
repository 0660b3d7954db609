#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stretch/core.hpp"
#include "stretch/upper_game.hpp"

namespace stretch {

/// Smallest integer >= g_prime_real(g, m). The ceiling is settled with exact
/// integer arithmetic, not floating point.
int compute_g_prime_int(int g, int m);

/// An online algorithm for offline bin size g'. It must decide from the
/// current physical loads, the items it has placed so far and the new item.
using InnerPolicy = std::function<int(std::span<const int> loads, const ItemMultiset& placed, int item)>;

enum class LiftCase {
    Large = 1,       // class >= sqrt(g): follow the inner algorithm on class + 1
    SmallNoGap = 2,  // small class, no negative gap: follow the inner algorithm
    BridgeGap = 3,   // small class, fill the lowest-index bin with negative gap
};

/// Upper-game strategy at granularity g built from an inner algorithm for bin
/// size g'. Bins keep fixed indices. `delta()[j]` is this strategy's load
/// class of bin j minus the inner algorithm's load of bin j.
class LiftedAlgorithm {
  public:
    LiftedAlgorithm(Config config, int g_prime, InnerPolicy inner);

    /// Chooses the bin for an item of class `item_class`.
    int step(int item_class);
    /// Applies the adversary's overflow bit for the item just placed.
    void observe_overflow(int bin, int overflow);

    const Config& config() const { return config_; }
    int g_prime() const { return g_prime_; }
    const std::vector<int>& delta() const { return delta_; }
    const std::vector<int>& memory() const { return memory_; }
    const std::vector<int>& inner_loads() const { return inner_loads_; }
    const std::vector<int>& own_load_classes() const { return own_; }
    const ItemMultiset& sent_classes() const { return sent_; }
    std::optional<LiftCase> last_case() const { return last_case_; }

    /// -m sqrt(g) - 1 <= delta_j <= sqrt(g) for every bin, exactly.
    bool delta_bound_holds() const;

    std::string memo_key() const;

  private:
    struct Pending {
        int bin;
        int item_class;
        LiftCase kind;
    };

    Config config_;
    int g_prime_;
    InnerPolicy inner_;
    std::vector<int> delta_;
    std::vector<int> memory_;
    ItemMultiset memory_set_;
    std::vector<int> inner_loads_;
    std::vector<int> own_;
    ItemMultiset sent_;
    std::optional<Pending> pending_;
    std::optional<LiftCase> last_case_;
};

bool delta_within_bound(int delta, int m, int g);

struct PlayoutRecord {
    std::vector<std::pair<int, int>> inputs;  // (class, overflow bit)
    std::vector<int> decisions;
    std::vector<LiftCase> cases;
    Score score{0, 1};
};

/// Plays a fixed input sequence against a fresh lifted strategy.
PlayoutRecord run_playout(const Config& config, int g_prime, const InnerPolicy& inner,
                          std::span<const std::pair<int, int>> inputs);

struct LiftEvaluation {
    Score score{0, 1};  // worst case over all adversary playouts, as num/g
    int min_delta = 0;
    int max_delta = 0;
    std::uint64_t states = 0;
    PlayoutRecord worst;  // one playout attaining the score
};

/// Worst case of the lifted strategy over every adversary playout of the
/// upper game at (m, g). Throws InternalError if the delta bound is ever
/// violated and InnerInfeasibilityError if the inner algorithm would be fed
/// items that no longer fit m bins of size g'.
LiftEvaluation evaluate_lifted(const InnerPolicy& inner, const Config& config, int g_prime);
LiftEvaluation evaluate_lifted(const InnerPolicy& inner, const Config& config);

/// Exact check of r(A^g) g <= r(A) g' + m sqrt(g) + 2 where `lifted_num` is
/// r(A^g) g and `inner_num` is r(A) g'.
bool performance_bound_holds(std::int64_t lifted_num, std::int64_t inner_num, int m, int g);

}  // namespace stretch
