#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <memory>

#include "stretch/bounds.hpp"
#include "stretch/errors.hpp"
#include "stretch/feasibility.hpp"
#include "stretch/lifting.hpp"
#include "stretch/lower_game.hpp"
#include "stretch/proofs.hpp"
#include "stretch/upper_game.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace stretch;

namespace {

py::object fraction(std::int64_t num, std::int64_t den) {
    static py::object cls = py::module_::import("fractions").attr("Fraction");
    return cls(num, den);
}

py::object fraction(const Score& s) { return fraction(s.num(), s.denom()); }

SolveOptions make_options(bool prune, int threads, std::uint64_t max_nodes) {
    SolveOptions o;
    o.prune = prune;
    o.threads = threads;
    o.max_nodes = max_nodes;
    return o;
}

OverflowLegality legality_of(bool strict) {
    return strict ? OverflowLegality::BothBits : OverflowLegality::AnyCompletion;
}

InnerPolicy least_loaded_policy() {
    return [](std::span<const int> loads, const ItemMultiset&, int) {
        size_t best = 0;
        for (size_t j = 1; j < loads.size(); ++j)
            if (loads[j] < loads[best]) best = j;
        return static_cast<int>(best);
    };
}

InnerPolicy optimal_lower_policy(int m, int g_prime) {
    auto policy = std::make_shared<LowerPolicy>(Config{m, g_prime});
    return [policy](std::span<const int> loads, const ItemMultiset& placed, int item) {
        return policy->choose(loads, placed, item);
    };
}

py::dict lift_dict(const LiftEvaluation& e) {
    py::dict d;
    d["score"] = fraction(e.score);
    d["min_delta"] = e.min_delta;
    d["max_delta"] = e.max_delta;
    d["states"] = e.states;
    d["worst_inputs"] = e.worst.inputs;
    d["worst_decisions"] = e.worst.decisions;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact lower and upper bound games for online bin stretching";

    auto base = py::register_exception<Error>(m, "StretchError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
    py::register_exception<IllegalSequenceError>(m, "IllegalSequenceError", base.ptr());
    py::register_exception<ResourceLimitError>(m, "ResourceLimitError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<MalformedTreeError>(m, "MalformedTreeError", base.ptr());
    py::register_exception<InfeasibleItemError>(m, "InfeasibleItemError", base.ptr());
    py::register_exception<IncompleteStrategyError>(m, "IncompleteStrategyError", base.ptr());

    m.def("canonicalize", [](std::vector<int> loads) { return canonicalize(std::move(loads)); }, "loads"_a);
    m.def("distinct_bin_moves", [](const std::vector<int>& loads) { return distinct_bin_moves(loads); }, "loads"_a);

    m.def("fits", [](const std::vector<int>& items, int bins, int capacity) {
        return fits(ItemMultiset::from_items(items), bins, capacity);
    }, "items"_a, "m"_a, "capacity"_a);
    m.def("find_packing", [](const std::vector<int>& items, int bins, int capacity) -> std::optional<std::vector<std::vector<int>>> {
        auto p = find_packing(ItemMultiset::from_items(items), bins, capacity);
        if (!p) return std::nullopt;
        return p->bins;
    }, "items"_a, "m"_a, "capacity"_a);
    m.def("repack_incremented", [](const std::vector<std::vector<int>>& bins, int h, int bins_count) {
        return repack_incremented(Packing{bins}, h, bins_count).bins;
    }, "bins"_a, "h"_a, "m"_a);

    m.def("legal_items_lower", [](const std::vector<int>& loads, const std::vector<int>& sent, int bins, int g) {
        return legal_items_lower({canonicalize(loads), ItemMultiset::from_items(sent)}, Config{bins, g});
    }, "loads"_a, "sent"_a, "m"_a, "g"_a);
    m.def("legal_moves_upper", [](const std::vector<int>& loads, const std::vector<int>& sent, int bins, int g, bool strict) {
        std::vector<std::pair<int, std::vector<int>>> out;
        for (const auto& mv : legal_moves_upper({canonicalize(loads), ItemMultiset::from_items(sent)}, Config{bins, g},
                                                legality_of(strict)))
            out.emplace_back(mv.item_class, mv.overflow_bits);
        return out;
    }, "loads"_a, "sent"_a, "m"_a, "g"_a, "strict"_a = false);

    m.def("solve_lower", [](int bins, int g, bool prune, int threads, std::uint64_t max_nodes) {
        Score s(0, 1);
        {
            py::gil_scoped_release release;
            s = solve_lower(Config{bins, g}, make_options(prune, threads, max_nodes));
        }
        return fraction(s);
    }, "m"_a, "g"_a, "prune"_a = true, "threads"_a = 1, "max_nodes"_a = 0);
    m.def("solve_upper", [](int bins, int g, bool prune, int threads, bool strict, std::uint64_t max_nodes) {
        Score s(0, 1);
        {
            py::gil_scoped_release release;
            s = solve_upper(Config{bins, g}, make_options(prune, threads, max_nodes), legality_of(strict));
        }
        return fraction(s);
    }, "m"_a, "g"_a, "prune"_a = true, "threads"_a = 1, "strict"_a = false, "max_nodes"_a = 0);

    m.def("lower_proof", [](int bins, int g) {
        LowerSolver solver(Config{bins, g});
        const Score v = solver.solve();
        return serialize(make_lower_proof(Config{bins, g}, solver.extract_strategy(), v.num()));
    }, "m"_a, "g"_a, "Adversary strategy as a canonical JSON proof document.");
    m.def("upper_proof", [](int bins, int g, bool strict) {
        UpperSolver solver(Config{bins, g}, {}, legality_of(strict));
        const Score v = solver.solve();
        return serialize(make_upper_proof(Config{bins, g}, solver.extract_strategy(), v.num(), strict ? "both" : "any"));
    }, "m"_a, "g"_a, "strict"_a = false, "Algorithm decision tree as a canonical JSON proof document.");
    m.def("verify_proof", [](const std::string& text) {
        VerifyResult r = verify(deserialize(text));
        return py::make_tuple(fraction(r.value), r.claim_matches);
    }, "text"_a, "Returns (verified value, claim matches).");

    m.def("compute_g_prime_int", &compute_g_prime_int, "g"_a, "m"_a);
    m.def("g_prime_real", [](int g, int bins) { return static_cast<double>(g_prime_real(g, bins)); }, "g"_a, "m"_a);
    m.def("optimum_lower_bound", [](const std::string& u, int g, int bins, bool ceil_gprime) {
        return static_cast<double>(optimum_lower_bound(parse_rational(u), g, bins, ceil_gprime));
    }, "u"_a, "g"_a, "m"_a, "ceil_gprime"_a = false);
    m.def("sandwich_interval", [](const std::string& l, int g, int bins) {
        Interval iv = sandwich_interval(parse_rational(l), g, bins);
        return py::make_tuple(static_cast<double>(iv.lo), static_cast<double>(iv.hi));
    }, "l"_a, "g"_a, "m"_a);

    m.def("evaluate_lifted", [](int bins, int g) {
        const int gp = compute_g_prime_int(g, bins);
        LiftEvaluation e;
        {
            py::gil_scoped_release release;
            e = evaluate_lifted(optimal_lower_policy(bins, gp), Config{bins, g}, gp);
        }
        py::dict d = lift_dict(e);
        d["g_prime"] = gp;
        return d;
    }, "m"_a, "g"_a, "Worst case of the lifted optimal lower-game policy at g'.");
    m.def("lift_playout", [](int bins, int g, const std::vector<std::pair<int, int>>& inputs, const std::string& inner) {
        const int gp = compute_g_prime_int(g, bins);
        InnerPolicy policy = inner == "optimal" ? optimal_lower_policy(bins, gp) : least_loaded_policy();
        PlayoutRecord rec = run_playout(Config{bins, g}, gp, policy, inputs);
        py::dict d;
        d["decisions"] = rec.decisions;
        std::vector<int> cases;
        for (LiftCase c : rec.cases) cases.push_back(static_cast<int>(c));
        d["cases"] = cases;
        d["score"] = fraction(rec.score);
        return d;
    }, "m"_a, "g"_a, "inputs"_a, "inner"_a = "least_loaded");
}
