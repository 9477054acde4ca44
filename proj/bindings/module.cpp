#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "unitclust/algorithms.hpp"
#include "unitclust/opt.hpp"
#include "unitclust/play.hpp"
#include "unitclust/search.hpp"
#include "unitclust/strategy_tree.hpp"
#include "unitclust/trace.hpp"
#include "unitclust/verifier.hpp"

namespace py = pybind11;
using namespace unitclust;

namespace {

std::vector<Coord> parse_points(const std::vector<std::string>& texts, long long scale) {
    std::vector<Coord> points;
    points.reserve(texts.size());
    for (const auto& t : texts) points.push_back(parse_coord(t, scale));
    return points;
}

StrategyTree tree_argument(const std::string& spec) {
    if (spec.rfind("builtin:", 0) == 0) return resolve_tree(spec);
    std::ifstream in(spec);
    if (!in) throw ParseError("cannot open tree file '" + spec + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_tree(buf.str());
}

py::dict trace_dict(const Trace& trace) {
    py::dict out;
    out["leaf"] = trace.leaf_tag;
    out["on_cost"] = trace.on_cost;
    out["opt_cost"] = trace.opt_cost;
    out["ratio"] = trace.ratio.str();
    out["steps"] = trace.steps.size();
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "online unit clustering: adversary trees, verification, minimax search";

    py::class_<Ratio>(m, "Ratio")
        .def(py::init<long long, long long>(), py::arg("num"), py::arg("den") = 1)
        .def_readonly("num", &Ratio::num)
        .def_readonly("den", &Ratio::den)
        .def("__str__", &Ratio::str)
        .def("__repr__", [](const Ratio& r) { return "Ratio(" + r.str() + ")"; })
        .def("__float__", &Ratio::approx)
        .def(py::self == py::self)
        .def(py::self < py::self)
        .def(py::self <= py::self)
        .def(py::self > py::self)
        .def(py::self >= py::self);

    m.def("parse_ratio", [](const std::string& s) { return parse_ratio(s); });

    m.def(
        "opt_count",
        [](const std::vector<std::string>& points, long long scale, const std::string& method) {
            const auto scaled = parse_points(points, scale);
            if (method == "bruteforce") return opt_bruteforce(scaled, scale);
            return opt_cover(scaled, scale).count;
        },
        py::arg("points"), py::arg("scale") = 10, py::arg("method") = "greedy",
        "offline optimum number of unit clusters covering the points");

    m.def(
        "run",
        [](const std::string& algorithm, const std::vector<std::string>& points,
           long long scale) {
            const auto alg = make_algorithm(algorithm);
            return trace_dict(run_algorithm(*alg, parse_points(points, scale), scale));
        },
        py::arg("algorithm"), py::arg("points"), py::arg("scale") = 10,
        "feed a fixed point sequence to greedy or grid");

    m.def(
        "play",
        [](const std::string& algorithm, const std::string& tree) {
            const auto alg = make_algorithm(algorithm);
            return trace_dict(play(tree_argument(tree), *alg));
        },
        py::arg("algorithm"), py::arg("tree") = "builtin:kk13",
        "walk an adversary strategy tree against greedy or grid");

    m.def(
        "verify",
        [](const std::string& tree, const std::string& target, int jobs, bool prune,
           long long node_cap) {
            VerifyOptions options;
            options.target = parse_ratio(target);
            options.jobs = jobs;
            options.prune = prune;
            options.node_cap = node_cap;
            const VerificationReport report = verify(tree_argument(tree), options);
            py::dict out;
            out["verdict"] = verdict_name(report.verdict);
            out["target"] = report.target.str();
            out["min_ratio"] =
                report.any_path ? py::cast(report.overall_min_ratio.str()) : py::none();
            out["annotations_ok"] = annotations_match(report);
            py::dict leaves;
            for (const auto& leaf : report.leaves) {
                py::dict row;
                row["expect"] = leaf.expect.str();
                row["min_ratio"] = leaf.reached ? py::cast(leaf.min_ratio.str()) : py::none();
                row["paths"] = leaf.paths;
                leaves[py::str(leaf.id)] = row;
            }
            out["leaves"] = leaves;
            out["nodes_explored"] = report.nodes_explored;
            return out;
        },
        py::arg("tree") = "builtin:kk13", py::arg("target") = "13/8", py::arg("jobs") = 1,
        py::arg("prune") = true, py::arg("node_cap") = 10'000'000LL,
        "exhaustively check a strategy tree against every deterministic lazy algorithm");

    m.def(
        "search",
        [](long long scale, long long grid_step, long long window, long long max_points,
           const std::optional<std::string>& target, int jobs,
           const std::optional<std::string>& emit_tree) {
            SearchConfig config;
            config.scale = scale;
            config.grid_step = grid_step;
            config.window = window;
            config.max_points = max_points;
            if (target) config.target = parse_ratio(*target);
            config.jobs = jobs;
            const SearchResult result = best_forced_ratio(config);
            if (emit_tree && result.exhausted) {
                std::ofstream out(*emit_tree);
                out << save_tree(result.strategy);
            }
            py::dict out;
            out["value"] = result.value.str();
            out["exhausted"] = result.exhausted;
            out["target_met"] = result.target_met;
            out["nodes"] = result.nodes;
            return out;
        },
        py::arg("scale") = 1, py::arg("grid_step") = 1, py::arg("window") = 4,
        py::arg("max_points") = 4, py::arg("target") = py::none(), py::arg("jobs") = 1,
        py::arg("emit_tree") = py::none(),
        "minimax search over a discretized grid for a forced competitive ratio");

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<IllegalMoveError>(m, "IllegalMoveError", PyExc_ValueError);
    py::register_exception<TreeError>(m, "TreeError", PyExc_ValueError);
}
