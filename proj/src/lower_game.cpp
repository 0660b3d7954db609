#include "stretch/lower_game.hpp"

#include <algorithm>
#include <string>

#include "parallel.hpp"
#include "search_util.hpp"
#include "stretch/errors.hpp"

namespace stretch {

namespace {

using detail::kMinusInf;
using detail::kPlusInf;
using detail::merge_bounds;
using detail::state_key;

// Distinct-load bins that can take `item` without exceeding 2g. The lightest
// bin always qualifies, and from there greedy play stays within 2g, so the
// dropped moves can never be the algorithm's best reply.
std::vector<int> capped_moves(const LoadVector& loads, int item, int g) {
    std::vector<int> out;
    for (int bin : distinct_bin_moves(loads))
        if (loads[static_cast<size_t>(bin)] + item <= 2 * g) out.push_back(bin);
    return out;
}

}  // namespace

LowerState LowerState::initial(const Config& config) {
    return {LoadVector(static_cast<size_t>(config.m), 0), ItemMultiset{}};
}

std::vector<int> legal_items_lower(const LowerState& state, const Config& config) {
    std::vector<int> out;
    for (int y = 1; y <= config.g; ++y)
        if (fits(state.sent.with(y), config.m, config.g)) out.push_back(y);
    return out;
}

LowerSolver::LowerSolver(Config config, SolveOptions options)
    : config_(config), options_(options), feasible_(config.m, config.g) {
    config_.validate();
}

void LowerSolver::count_node() {
    auto n = nodes_.fetch_add(1, std::memory_order_relaxed) + 1;
    if (options_.max_nodes != 0 && n > options_.max_nodes)
        throw ResourceLimitError("lower game: node budget of " + std::to_string(options_.max_nodes) +
                                 " exhausted");
}

std::vector<int> LowerSolver::legal_items(const ItemMultiset& sent) {
    // If size y fits then every smaller size does too, so one downward scan
    // to the first feasible size settles the whole list.
    for (int y = config_.g; y >= 1; --y) {
        if (feasible_.fits(sent.with(y))) {
            std::vector<int> out(static_cast<size_t>(y));
            for (int i = 0; i < y; ++i) out[static_cast<size_t>(i)] = i + 1;
            return out;
        }
    }
    return {};
}

int LowerSolver::search(const LoadVector& loads, const ItemMultiset& sent, int alpha, int beta) {
    count_node();
    const bool prune = options_.prune;
    const int here = loads.front();
    if (here > 2 * config_.g) throw InternalError("lower game: load exceeds 2g");
    if (prune && here >= beta) return here;

    const std::string key = state_key(loads, sent);
    if (auto known = table_.find(key)) {
        if (known->lo == known->hi) return known->lo;
        if (prune) {
            if (known->lo >= beta) return known->lo;
            if (known->hi <= alpha) return known->hi;
            alpha = std::max(alpha, known->lo);
            beta = std::min(beta, known->hi);
        }
    }

    const std::vector<int> items = legal_items(sent);
    if (items.empty()) {
        table_.insert(key, {here, here});
        return here;
    }

    int best = kMinusInf;
    int a = alpha;
    for (auto y = items.rbegin(); y != items.rend(); ++y) {
        const ItemMultiset next_sent = sent.with(*y);
        const std::vector<int> bins = capped_moves(loads, *y, config_.g);
        int worst = kPlusInf;
        int b = beta;
        // Lighter bins first: canonical order is non-increasing.
        for (auto bin = bins.rbegin(); bin != bins.rend(); ++bin) {
            int v = search(place(loads, *bin, *y), next_sent, a, b);
            worst = std::min(worst, v);
            if (prune && worst <= a) break;
            b = std::min(b, worst);
        }
        best = std::max(best, worst);
        if (prune && best >= beta) break;
        a = std::max(a, best);
    }

    ValueBounds found{best, best};
    if (prune) {
        if (best <= alpha)
            found = {here, best};
        else if (best >= beta)
            found = {best, kPlusInf};
    }
    table_.upsert(key, found, merge_bounds);
    return best;
}

int LowerSolver::solve_parallel() {
    // Root loads are all zero, so each item has a single reply.
    const LowerState root = LowerState::initial(config_);
    const std::vector<int> items = legal_items(root.sent);
    std::vector<int> values(items.size(), kMinusInf);
    detail::parallel_for(items.size(), options_.threads, [&](size_t i) {
        values[i] = search(place(root.loads, 0, items[i]), root.sent.with(items[i]), kMinusInf, kPlusInf);
    });
    int best = root.loads.front();
    for (int v : values) best = std::max(best, v);
    return best;
}

Score LowerSolver::solve() {
    int v = options_.threads > 1 ? solve_parallel() : value(LowerState::initial(config_));
    return Score(v, config_.g);
}

int LowerSolver::value(const LowerState& state) {
    LoadVector loads = canonicalize(state.loads);
    if (static_cast<int>(loads.size()) != config_.m) throw PreconditionError("lower game: wrong bin count");
    return search(loads, state.sent, kMinusInf, kPlusInf);
}

LowerNode LowerSolver::extract(const LoadVector& loads, const ItemMultiset& sent, int target) {
    LowerNode node{loads, std::nullopt, {}};
    if (loads.front() >= target) return node;
    const std::vector<int> items = legal_items(sent);
    if (items.empty()) return node;

    int best_item = -1;
    int best_value = kMinusInf;
    for (auto y = items.rbegin(); y != items.rend(); ++y) {
        int worst = kPlusInf;
        for (int bin : capped_moves(loads, *y, config_.g))
            worst = std::min(worst, search(place(loads, bin, *y), sent.with(*y), kMinusInf, kPlusInf));
        if (worst > best_value) {
            best_value = worst;
            best_item = *y;
        }
    }
    if (best_value < target) throw InternalError("lower game: strategy extraction lost the root value");

    node.item = best_item;
    const ItemMultiset next_sent = sent.with(best_item);
    for (int bin : distinct_bin_moves(loads))
        node.children.push_back({bin, extract(place(loads, bin, best_item), next_sent, target)});
    return node;
}

LowerNode LowerSolver::extract_strategy() {
    const int target = static_cast<int>(solve().num());
    const LowerState root = LowerState::initial(config_);
    return extract(root.loads, root.sent, target);
}

Score solve_lower(const Config& config, const SolveOptions& options) {
    LowerSolver solver(config, options);
    return solver.solve();
}

LowerNode extract_adversary_strategy(const Config& config, const SolveOptions& options) {
    LowerSolver solver(config, options);
    return solver.extract_strategy();
}

LowerPolicy::LowerPolicy(Config config, SolveOptions options)
    : solver_(std::make_shared<LowerSolver>(config, options)) {}

LowerPolicy::LowerPolicy(std::shared_ptr<LowerSolver> solver) : solver_(std::move(solver)) {}

int LowerPolicy::choose(std::span<const int> loads, const ItemMultiset& placed, int item) {
    const Config& cfg = solver_->config();
    if (static_cast<int>(loads.size()) != cfg.m) throw PreconditionError("policy: wrong bin count");
    if (item < 1 || item > cfg.g) throw IllegalSequenceError("policy: item size outside 1..g");
    const ItemMultiset next = placed.with(item);
    if (!fits(next, cfg.m, cfg.g)) throw IllegalSequenceError("policy: item sequence does not fit m bins of size g");

    const LoadVector canon = canonicalize(LoadVector(loads.begin(), loads.end()));
    int best_bin = -1;
    int best_value = kPlusInf;
    for (int bin : capped_moves(canon, item, cfg.g)) {
        int v = solver_->value({place(canon, bin, item), next});
        if (v < best_value) {
            best_value = v;
            best_bin = bin;
        }
    }
    const int target_load = canon[static_cast<size_t>(best_bin)];
    for (size_t j = 0; j < loads.size(); ++j)
        if (loads[j] == target_load) return static_cast<int>(j);
    throw InternalError("policy: canonical bin has no physical counterpart");
}

int LowerPolicy::operator()(std::span<const int> sequence) {
    const Config& cfg = solver_->config();
    if (sequence.empty()) throw IllegalSequenceError("policy: empty item sequence");
    if (!fits(ItemMultiset::from_items(sequence), cfg.m, cfg.g))
        throw IllegalSequenceError("policy: item sequence does not fit m bins of size g");
    std::vector<int> loads(static_cast<size_t>(cfg.m), 0);
    ItemMultiset placed;
    int bin = 0;
    for (int item : sequence) {
        bin = choose(loads, placed, item);
        loads[static_cast<size_t>(bin)] += item;
        placed.add(item);
    }
    return bin;
}

Score LowerPolicy::guarantee() { return solver_->solve(); }

}  // namespace stretch
