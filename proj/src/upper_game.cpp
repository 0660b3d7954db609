#include "stretch/upper_game.hpp"

#include <algorithm>
#include <string>

#include "parallel.hpp"
#include "search_util.hpp"
#include "stretch/errors.hpp"

namespace stretch {

using detail::kMinusInf;
using detail::kPlusInf;
using detail::merge_bounds;
using detail::state_key;

UpperState UpperState::initial(const Config& config) {
    return {LoadVector(static_cast<size_t>(config.m), 0), ItemMultiset{}};
}

std::vector<int> legal_overflow_bits(int item_class, std::int64_t load_sum, const Config& config,
                                     OverflowLegality legality) {
    const std::int64_t limit = static_cast<std::int64_t>(config.m) * config.g - 1;
    if (item_class == 0) {
        if (load_sum + 1 <= limit) return {1};
        return {};
    }
    if (legality == OverflowLegality::BothBits) {
        if (load_sum + item_class + 1 <= limit) return {0, 1};
        return {};
    }
    std::vector<int> bits;
    for (int o : {0, 1})
        if (load_sum + item_class + o <= limit) bits.push_back(o);
    return bits;
}

std::vector<UpperMove> legal_moves_upper(const UpperState& state, const Config& config,
                                         OverflowLegality legality) {
    std::vector<UpperMove> out;
    const std::int64_t sum = total_load(state.load_classes);
    for (int c = 0; c <= config.g - 1; ++c) {
        if (!fits(state.sent_classes.with(c), config.m, config.g - 1)) continue;
        auto bits = legal_overflow_bits(c, sum, config, legality);
        if (!bits.empty()) out.push_back({c, std::move(bits)});
    }
    return out;
}

UpperSolver::UpperSolver(Config config, SolveOptions options, OverflowLegality legality)
    : config_(config), options_(options), legality_(legality), feasible_(config.m, config.g - 1) {
    config_.validate();
}

void UpperSolver::count_node() {
    auto n = nodes_.fetch_add(1, std::memory_order_relaxed) + 1;
    if (options_.max_nodes != 0 && n > options_.max_nodes)
        throw ResourceLimitError("upper game: node budget of " + std::to_string(options_.max_nodes) +
                                 " exhausted");
}

std::vector<UpperMove> UpperSolver::legal_moves(const LoadVector& loads, const ItemMultiset& sent) {
    const std::int64_t sum = total_load(loads);
    // Feasibility is monotone in the class, so find the largest class that
    // fits and keep everything below it.
    int top = -1;
    for (int c = config_.g - 1; c >= 0; --c) {
        if (feasible_.fits(sent.with(c))) {
            top = c;
            break;
        }
    }
    std::vector<UpperMove> out;
    for (int c = 0; c <= top; ++c) {
        auto bits = legal_overflow_bits(c, sum, config_, legality_);
        if (!bits.empty()) out.push_back({c, std::move(bits)});
    }
    return out;
}

int UpperSolver::search(const LoadVector& loads, const ItemMultiset& sent, int alpha, int beta) {
    count_node();
    const bool prune = options_.prune;
    // Loads never shrink, so the current top class bounds the value below.
    const int here = loads.front() + 1;
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

    const std::vector<UpperMove> moves = legal_moves(loads, sent);
    if (moves.empty()) {
        table_.insert(key, {here, here});
        return here;
    }

    const std::vector<int> bins = distinct_bin_moves(loads);
    int best = kMinusInf;
    int a = alpha;
    for (auto move = moves.rbegin(); move != moves.rend(); ++move) {
        const ItemMultiset next_sent = sent.with(move->item_class);
        int worst = kPlusInf;
        int b = beta;
        for (auto bin = bins.rbegin(); bin != bins.rend(); ++bin) {
            int outcome = kMinusInf;
            int a2 = a;
            for (auto o = move->overflow_bits.rbegin(); o != move->overflow_bits.rend(); ++o) {
                int v = search(place(loads, *bin, move->item_class + *o), next_sent, a2, b);
                outcome = std::max(outcome, v);
                if (prune && outcome >= b) break;
                a2 = std::max(a2, outcome);
            }
            worst = std::min(worst, outcome);
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

int UpperSolver::solve_parallel() {
    // All root bins are empty: one reply per class, then the overflow bit.
    const UpperState root = UpperState::initial(config_);
    struct Task {
        size_t move;
        int overflow;
    };
    const std::vector<UpperMove> moves = legal_moves(root.load_classes, root.sent_classes);
    std::vector<Task> tasks;
    for (size_t i = 0; i < moves.size(); ++i)
        for (int o : moves[i].overflow_bits) tasks.push_back({i, o});
    std::vector<int> values(tasks.size(), kMinusInf);
    detail::parallel_for(tasks.size(), options_.threads, [&](size_t t) {
        const UpperMove& mv = moves[tasks[t].move];
        values[t] = search(place(root.load_classes, 0, mv.item_class + tasks[t].overflow),
                           root.sent_classes.with(mv.item_class), kMinusInf, kPlusInf);
    });
    int best = root.load_classes.front() + 1;
    for (int v : values) best = std::max(best, v);
    return best;
}

Score UpperSolver::solve() {
    int v = options_.threads > 1 ? solve_parallel() : value(UpperState::initial(config_));
    return Score(v, config_.g);
}

int UpperSolver::value(const UpperState& state) {
    LoadVector loads = canonicalize(state.load_classes);
    if (static_cast<int>(loads.size()) != config_.m) throw PreconditionError("upper game: wrong bin count");
    return search(loads, state.sent_classes, kMinusInf, kPlusInf);
}

UpperNode UpperSolver::extract(const LoadVector& loads, const ItemMultiset& sent) {
    UpperNode node{loads, {}};
    const std::vector<int> bins = distinct_bin_moves(loads);
    for (const UpperMove& mv : legal_moves(loads, sent)) {
        const ItemMultiset next_sent = sent.with(mv.item_class);
        int best_bin = -1;
        int best_value = kPlusInf;
        for (auto bin = bins.rbegin(); bin != bins.rend(); ++bin) {
            int outcome = kMinusInf;
            for (int o : mv.overflow_bits)
                outcome = std::max(outcome, search(place(loads, *bin, mv.item_class + o), next_sent,
                                                   kMinusInf, kPlusInf));
            if (outcome < best_value) {
                best_value = outcome;
                best_bin = *bin;
            }
        }
        UpperDecision decision{mv.item_class, best_bin, {}};
        for (int o : mv.overflow_bits)
            decision.outcomes.push_back({o, extract(place(loads, best_bin, mv.item_class + o), next_sent)});
        node.decisions.push_back(std::move(decision));
    }
    return node;
}

UpperNode UpperSolver::extract_strategy() {
    const UpperState root = UpperState::initial(config_);
    return extract(root.load_classes, root.sent_classes);
}

Score solve_upper(const Config& config, const SolveOptions& options, OverflowLegality legality) {
    UpperSolver solver(config, options, legality);
    return solver.solve();
}

UpperNode extract_algorithm_strategy(const Config& config, const SolveOptions& options,
                                     OverflowLegality legality) {
    UpperSolver solver(config, options, legality);
    return solver.extract_strategy();
}

}  // namespace stretch
