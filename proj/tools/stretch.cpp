// stretch: exact lower/upper bound games for online bin stretching.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "stretch/bounds.hpp"
#include "stretch/errors.hpp"
#include "stretch/lifting.hpp"
#include "stretch/lower_game.hpp"
#include "stretch/proofs.hpp"
#include "stretch/results_cache.hpp"
#include "stretch/upper_game.hpp"
#include "stretch/version.hpp"

using namespace stretch;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitResource = 75;
constexpr int kExitClaimMismatch = 2;
constexpr int kExitInvalidProof = 3;

struct SolveArgs {
    int m = 0;
    int g = 0;
    std::string proof;
    bool no_prune = false;
    int threads = 1;
    std::uint64_t max_nodes = 0;
    bool fresh = false;
    bool strict_overflow = false;
};

std::int64_t millis_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
}

void print_score(const Score& s) { std::cout << s.to_fraction() << " (" << s.to_decimal(4) << ")\n"; }

SolveOptions options_from(const SolveArgs& a) {
    SolveOptions o;
    o.prune = !a.no_prune;
    o.threads = a.threads;
    o.max_nodes = a.max_nodes;
    return o;
}

std::string upper_game_name(bool strict) { return strict ? "upper-both" : "upper"; }

// Solves one game, consulting and feeding the cache. Proof export always
// solves afresh since the tree is not cached.
Score solve_cached(ResultsCache& cache, const std::string& game, const SolveArgs& a) {
    const Config cfg{a.m, a.g};
    if (!a.fresh && a.proof.empty()) {
        if (auto hit = cache.find(game, a.m, a.g)) {
            std::cerr << "cached: " << game << " m=" << a.m << " g=" << a.g << " from " << cache.path().string()
                      << "\n";
            return Score(hit->value_num, a.g);
        }
    }
    const auto start = std::chrono::steady_clock::now();
    std::optional<Score> value;
    if (game == "lower") {
        LowerSolver solver(cfg, options_from(a));
        value = solver.solve();
        if (!a.proof.empty())
            write_proof_file(a.proof, make_lower_proof(cfg, solver.extract_strategy(), value->num()));
    } else {
        const auto legality = a.strict_overflow ? OverflowLegality::BothBits : OverflowLegality::AnyCompletion;
        UpperSolver solver(cfg, options_from(a), legality);
        value = solver.solve();
        if (!a.proof.empty())
            write_proof_file(a.proof, make_upper_proof(cfg, solver.extract_strategy(), value->num(),
                                                       a.strict_overflow ? "both" : "any"));
    }
    cache.append({game, a.m, a.g, value->num(), millis_since(start), a.proof});
    return *value;
}

void add_solve_options(CLI::App* cmd, SolveArgs& a) {
    cmd->add_option("-m", a.m, "number of bins")->required()->check(CLI::PositiveNumber);
    cmd->add_option("-g", a.g, "granularity")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--proof", a.proof, "write the strategy tree to this .obsproof.json file");
    cmd->add_flag("--no-prune", a.no_prune, "exhaustive min-max without alpha-beta cutoffs");
    cmd->add_option("--threads", a.threads, "worker threads for the root moves; the value never depends on it")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-nodes", a.max_nodes, "abort after visiting this many nodes (0 = no limit)");
    cmd->add_flag("--fresh", a.fresh, "ignore cached results");
}

int run_verify(const std::string& path) {
    ProofDocument doc;
    try {
        doc = read_proof_file(path);
    } catch (const ParseError& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return kExitInvalidProof;
    } catch (const Error& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return kExitInvalidProof;
    }
    try {
        VerifyResult r = verify(doc);
        std::cout << r.value.to_fraction() << "\n";
        if (!r.claim_matches) {
            std::cerr << "claimed value " << Score(doc.value_num, doc.g).to_fraction() << " does not match verified "
                      << r.value.to_fraction() << "\n";
            return kExitClaimMismatch;
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "invalid proof: " << e.what() << "\n";
        return kExitInvalidProof;
    }
}

int run_lift(int m, int g, const SolveOptions& options) {
    const Config cfg{m, g};
    cfg.validate();
    const int gp = compute_g_prime_int(g, m);
    auto solver = std::make_shared<LowerSolver>(Config{m, gp}, options);
    const Score inner_value = solver->solve();
    LowerPolicy policy(solver);
    InnerPolicy inner = [&policy](std::span<const int> loads, const ItemMultiset& placed, int item) {
        return policy.choose(loads, placed, item);
    };
    const LiftEvaluation eval = evaluate_lifted(inner, cfg, gp);

    const long double sqrt_g = std::sqrt(static_cast<long double>(g));
    const std::int64_t lhs = eval.score.num();
    const long double rhs = static_cast<long double>(inner_value.num()) + m * sqrt_g + 2;
    const bool holds = performance_bound_holds(lhs, inner_value.num(), m, g);
    bool deltas_ok = delta_within_bound(eval.min_delta, m, g) && delta_within_bound(eval.max_delta, m, g);

    std::cout << "g' = " << gp << " (real " << render_decimal(g_prime_real(g, m), 4) << ")\n";
    std::cout << "lower value at g': " << inner_value.to_fraction() << " (" << inner_value.to_decimal(4)
              << "), max load " << inner_value.num() << "/" << gp << "\n";
    std::cout << "lifted worst case: " << eval.score.to_fraction() << " (" << eval.score.to_decimal(4)
              << "), states " << eval.states << "\n";
    std::cout << "performance bound: lhs " << lhs << " <= rhs " << render_decimal(rhs, 4) << " holds: "
              << (holds ? "yes" : "no") << "\n";
    std::cout << "delta range observed: [" << eval.min_delta << ", " << eval.max_delta << "] within ["
              << render_decimal(-m * sqrt_g - 1, 4) << ", " << render_decimal(sqrt_g, 4)
              << "] holds: " << (deltas_ok ? "yes" : "no") << "\n";
    return holds && deltas_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact bound games for online bin stretching"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    SolveArgs lower_args;
    auto* lower = app.add_subcommand("lower", "solve the lower bound game (adversary sends sizes 1..g)");
    add_solve_options(lower, lower_args);

    SolveArgs upper_args;
    auto* upper = app.add_subcommand("upper", "solve the upper bound game (item classes with overflows)");
    add_solve_options(upper, upper_args);
    upper->add_flag("--strict-overflow-legality", upper_args.strict_overflow,
                    "send a nonzero class only when both overflow outcomes stay legal");

    std::string verify_path;
    auto* verify_cmd = app.add_subcommand("verify", "independently check a proof file");
    verify_cmd->add_option("path", verify_path, "proof file")->required();

    int lift_m = 0, lift_g = 0;
    SolveArgs lift_args;
    auto* lift = app.add_subcommand("lift", "lift the optimal lower-game policy at g' into an upper-game strategy");
    lift->add_option("-m", lift_m, "number of bins")->required()->check(CLI::PositiveNumber);
    lift->add_option("-g", lift_g, "granularity")->required()->check(CLI::PositiveNumber);
    lift->add_option("--max-nodes", lift_args.max_nodes, "node budget of the inner solve (0 = no limit)");

    auto* bounds = app.add_subcommand("bounds", "evaluate the convergence bounds");
    bounds->require_subcommand(1);
    std::string u_text, l_text;
    int bm = 0, bg = 0;
    bool ceil_gprime = false;
    auto* corollary = bounds->add_subcommand("corollary", "lower bound on the optimum implied by u_g");
    corollary->add_option("-u", u_text, "upper-game value p/q")->required();
    corollary->add_option("-m", bm, "number of bins")->required()->check(CLI::PositiveNumber);
    corollary->add_option("-g", bg, "granularity")->required()->check(CLI::PositiveNumber);
    corollary->add_flag("--ceil-gprime", ceil_gprime, "use the ceiled g' instead of the real one");
    int im = 0, ig = 0;
    auto* interval = bounds->add_subcommand("interval", "sandwich around the optimum from l_{g'}");
    interval->add_option("-l", l_text, "lower-game value at g' as p/q")->required();
    interval->add_option("-m", im, "number of bins")->required()->check(CLI::PositiveNumber);
    interval->add_option("-g", ig, "granularity")->required()->check(CLI::PositiveNumber);

    SolveArgs sweep_args;
    int g_max = 0;
    std::string csv_path;
    auto* sweep = app.add_subcommand("sweep", "tabulate l_g and u_g for g = 1..g-max");
    sweep->add_option("-m", sweep_args.m, "number of bins")->required()->check(CLI::PositiveNumber);
    sweep->add_option("--g-max", g_max, "largest granularity")->required()->check(CLI::PositiveNumber);
    sweep->add_option("--threads", sweep_args.threads, "worker threads per solve")->check(CLI::PositiveNumber);
    sweep->add_option("--max-nodes", sweep_args.max_nodes, "node budget per solve (0 = no limit)");
    sweep->add_option("--csv", csv_path, "write the CSV summary here instead of stdout");
    sweep->add_flag("--fresh", sweep_args.fresh, "ignore cached results");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*verify_cmd) return run_verify(verify_path);

        if (*bounds) {
            if (*corollary) {
                const Rational u = parse_rational(u_text);
                std::cout << render_decimal(optimum_lower_bound(u, bg, bm, ceil_gprime), 4) << "\n";
            } else {
                const Rational l = parse_rational(l_text);
                const Interval iv = sandwich_interval(l, ig, im);
                std::cout << "[" << render_decimal(iv.lo, 4) << ", " << render_decimal(iv.hi, 4) << "] (g' = "
                          << compute_g_prime_int(ig, im) << ")\n";
            }
            return 0;
        }

        if (*lift) return run_lift(lift_m, lift_g, options_from(lift_args));

        ResultsCache cache(ResultsCache::default_path());
        if (*lower) {
            print_score(solve_cached(cache, "lower", lower_args));
            return 0;
        }
        if (*upper) {
            print_score(solve_cached(cache, upper_game_name(upper_args.strict_overflow), upper_args));
            return 0;
        }
        if (*sweep) {
            std::ofstream csv_file;
            if (!csv_path.empty()) {
                csv_file.open(csv_path, std::ios::trunc);
                if (!csv_file) throw Error("cannot write " + csv_path);
            }
            std::ostream& out = csv_path.empty() ? std::cout : csv_file;
            out << kCsvHeader << "\n";
            for (int g = 1; g <= g_max; ++g) {
                for (const std::string game : {"lower", "upper"}) {
                    SolveArgs a = sweep_args;
                    a.g = g;
                    const Score s = solve_cached(cache, game, a);
                    CacheRecord row = *cache.find(game, a.m, g);
                    row.value_num = s.num();
                    out << csv_row(row) << "\n";
                    out.flush();
                }
            }
            return 0;
        }
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
