#include "stretch/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "stretch/bounds.hpp"
#include "stretch/errors.hpp"
#include "stretch/feasibility.hpp"

namespace stretch {

namespace {

using i128 = __int128;

// N >= g + 1 + m sqrt(g) + sqrt(g + 1 + m sqrt(g)), decided exactly.
// With A = N - g - 1 this is A >= m sqrt(g) together with
// (A - m sqrt(g))^2 >= g + 1 + m sqrt(g), and the latter rearranges to
// A^2 + m^2 g - g - 1 >= m (2A + 1) sqrt(g).
bool g_prime_candidate_ok(std::int64_t n, std::int64_t g, std::int64_t m) {
    const i128 a = n - g - 1;
    if (a < 0 || a * a < static_cast<i128>(m) * m * g) return false;
    const i128 lhs = a * a + static_cast<i128>(m) * m * g - g - 1;
    const i128 coeff = static_cast<i128>(m) * (2 * a + 1);
    return lhs >= 0 && lhs * lhs >= coeff * coeff * g;
}

}  // namespace

int compute_g_prime_int(int g, int m) {
    if (g < 1 || m < 1) throw PreconditionError("compute_g_prime_int: g and m must be >= 1");
    auto n = static_cast<std::int64_t>(std::floor(g_prime_real(g, m))) - 2;
    n = std::max<std::int64_t>(n, 0);
    while (g_prime_candidate_ok(n, g, m)) --n;
    while (!g_prime_candidate_ok(n, g, m)) ++n;
    return static_cast<int>(n);
}

bool delta_within_bound(int delta, int m, int g) {
    return le_sqrt(delta, g) && le_sqrt(-static_cast<std::int64_t>(delta) - 1, static_cast<std::int64_t>(m) * m * g);
}

bool performance_bound_holds(std::int64_t lifted_num, std::int64_t inner_num, int m, int g) {
    return le_sqrt(lifted_num - inner_num - 2, static_cast<std::int64_t>(m) * m * g);
}

LiftedAlgorithm::LiftedAlgorithm(Config config, int g_prime, InnerPolicy inner)
    : config_(config), g_prime_(g_prime), inner_(std::move(inner)) {
    config_.validate();
    if (g_prime < 1) throw PreconditionError("lifting: g' must be positive");
    const auto m = static_cast<size_t>(config_.m);
    delta_.assign(m, 0);
    inner_loads_.assign(m, 0);
    own_.assign(m, 0);
}

int LiftedAlgorithm::step(int item_class) {
    if (pending_) throw PreconditionError("lifting: previous item still awaits its overflow bit");
    if (item_class < 0 || item_class > config_.g - 1) throw PreconditionError("lifting: item class outside 0..g-1");

    const bool large = ge_sqrt(item_class, config_.g);
    const bool no_gap = std::all_of(delta_.begin(), delta_.end(), [](int d) { return d >= 0; });
    int bin;
    LiftCase kind;
    if (large || no_gap) {
        kind = large ? LiftCase::Large : LiftCase::SmallNoGap;
        const int item = item_class + 1;
        if (!fits(memory_set_.with(item), config_.m, g_prime_))
            throw InnerInfeasibilityError("lifting: items fed to the inner algorithm no longer fit m bins of size g'");
        bin = inner_(inner_loads_, memory_set_, item);
        if (bin < 0 || bin >= config_.m) throw InternalError("lifting: inner algorithm returned an invalid bin");
    } else {
        kind = LiftCase::BridgeGap;
        bin = static_cast<int>(std::find_if(delta_.begin(), delta_.end(), [](int d) { return d < 0; }) - delta_.begin());
    }
    pending_ = Pending{bin, item_class, kind};
    last_case_ = kind;
    return bin;
}

void LiftedAlgorithm::observe_overflow(int bin, int overflow) {
    if (!pending_ || pending_->bin != bin)
        throw PreconditionError("lifting: overflow reported for a bin that was not just chosen");
    if (overflow != 0 && overflow != 1) throw PreconditionError("lifting: overflow bit must be 0 or 1");
    const Pending p = *pending_;
    pending_.reset();
    const auto j = static_cast<size_t>(bin);

    own_[j] += p.item_class + overflow;
    sent_.add(p.item_class);
    if (p.kind == LiftCase::BridgeGap) {
        delta_[j] += p.item_class + overflow;
    } else {
        const int item = p.item_class + 1;
        memory_.push_back(item);
        memory_set_.add(item);
        inner_loads_[j] += item;
        if (overflow == 0) delta_[j] -= 1;
    }
    if (delta_[j] != own_[j] - inner_loads_[j]) throw InternalError("lifting: gap bookkeeping diverged");
}

bool LiftedAlgorithm::delta_bound_holds() const {
    return std::all_of(delta_.begin(), delta_.end(), [&](int d) { return delta_within_bound(d, config_.m, config_.g); });
}

std::string LiftedAlgorithm::memo_key() const {
    std::string key;
    append_key(key, own_);
    append_key(key, inner_loads_);
    sent_.append_key(key);
    memory_set_.append_key(key);
    return key;
}

PlayoutRecord run_playout(const Config& config, int g_prime, const InnerPolicy& inner,
                          std::span<const std::pair<int, int>> inputs) {
    LiftedAlgorithm lifted(config, g_prime, inner);
    PlayoutRecord rec;
    for (auto [cls, o] : inputs) {
        int bin = lifted.step(cls);
        rec.cases.push_back(*lifted.last_case());
        lifted.observe_overflow(bin, o);
        rec.inputs.emplace_back(cls, o);
        rec.decisions.push_back(bin);
    }
    rec.score = Score(max_load(lifted.own_load_classes()) + 1, config.g);
    return rec;
}

namespace {

class LiftWalker {
  public:
    LiftWalker(const Config& config) : config_(config), classes_fit_(config.m, config.g - 1) {}

    // Worst final score (max class + 1) reachable from `state`.
    int walk(const LiftedAlgorithm& state) {
        ++states_;
        for (int d : state.delta()) {
            min_delta_ = std::min(min_delta_, d);
            max_delta_ = std::max(max_delta_, d);
        }
        if (!state.delta_bound_holds()) throw InternalError("lifting: gap bound violated");

        const std::string key = state.memo_key();
        if (auto it = memo_.find(key); it != memo_.end()) return it->second.value;

        const std::int64_t sum = total_load(state.own_load_classes());
        Entry best{max_load(state.own_load_classes()) + 1, -1, -1, -1};
        bool terminal = true;
        for (int c = 0; c <= config_.g - 1; ++c) {
            if (!classes_fit_.fits(state.sent_classes().with(c))) break;
            for (int o : legal_overflow_bits(c, sum, config_, OverflowLegality::AnyCompletion)) {
                if (terminal) best.value = -1;
                terminal = false;
                LiftedAlgorithm next = state;
                int bin = next.step(c);
                next.observe_overflow(bin, o);
                int v = walk(next);
                if (v > best.value) best = {v, c, o, bin};
            }
        }
        memo_.emplace(key, best);
        return best.value;
    }

    PlayoutRecord trace(const LiftedAlgorithm& root) const {
        PlayoutRecord rec;
        LiftedAlgorithm state = root;
        for (;;) {
            const Entry& e = memo_.at(state.memo_key());
            if (e.item_class < 0) {
                rec.score = Score(e.value, config_.g);
                return rec;
            }
            int bin = state.step(e.item_class);
            rec.cases.push_back(*state.last_case());
            state.observe_overflow(bin, e.overflow);
            rec.inputs.emplace_back(e.item_class, e.overflow);
            rec.decisions.push_back(bin);
        }
    }

    int min_delta() const { return min_delta_; }
    int max_delta() const { return max_delta_; }
    std::uint64_t states() const { return states_; }

  private:
    struct Entry {
        int value;
        int item_class;
        int overflow;
        int bin;
    };

    Config config_;
    FeasibilityCache classes_fit_;
    std::unordered_map<std::string, Entry> memo_;
    int min_delta_ = 0;
    int max_delta_ = 0;
    std::uint64_t states_ = 0;
};

}  // namespace

LiftEvaluation evaluate_lifted(const InnerPolicy& inner, const Config& config, int g_prime) {
    LiftedAlgorithm root(config, g_prime, inner);
    LiftWalker walker(config);
    LiftEvaluation out;
    int worst = walker.walk(root);
    out.score = Score(worst, config.g);
    out.min_delta = walker.min_delta();
    out.max_delta = walker.max_delta();
    out.states = walker.states();
    out.worst = walker.trace(root);
    return out;
}

LiftEvaluation evaluate_lifted(const InnerPolicy& inner, const Config& config) {
    return evaluate_lifted(inner, config, compute_g_prime_int(config.g, config.m));
}

}  // namespace stretch
