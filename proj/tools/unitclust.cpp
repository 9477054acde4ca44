#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "unitclust/algorithms.hpp"
#include "unitclust/opt.hpp"
#include "unitclust/play.hpp"
#include "unitclust/search.hpp"
#include "unitclust/strategy_tree.hpp"
#include "unitclust/trace.hpp"
#include "unitclust/verifier.hpp"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitNoInput = 66;

using namespace unitclust;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open '" << path << "'\n";
        std::exit(kExitNoInput);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        std::cerr << "error: cannot write '" << path << "'\n";
        std::exit(kExitNoInput);
    }
    out << text;
}

StrategyTree tree_argument(const std::string& spec) {
    if (spec.rfind("builtin:", 0) == 0) return resolve_tree(spec);
    return load_tree(read_file(spec));
}

std::vector<Coord> points_file(const std::string& path, long long scale) {
    std::istringstream in(read_file(path));
    std::vector<Coord> points;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string token;
        while (fields >> token) points.push_back(parse_coord(token, scale));
    }
    return points;
}

int cmd_verify(const std::string& tree_spec, const std::string& target_text,
               const std::string& report_path, int jobs, bool no_prune, long long node_cap) {
    const StrategyTree tree = tree_argument(tree_spec);
    VerifyOptions options;
    options.target = parse_ratio(target_text);
    options.prune = !no_prune;
    options.jobs = jobs;
    options.node_cap = node_cap;
    const VerificationReport report = verify(tree, options);

    std::cout << verdict_name(report.verdict) << " min="
              << (report.any_path ? report.overall_min_ratio.str() : "-") << "\n";
    std::cout << "verdict=" << verdict_name(report.verdict) << "\n";
    std::cout << "target=" << report.target.str() << "\n";
    if (report.any_path) std::cout << "min_ratio=" << report.overall_min_ratio.str() << "\n";
    std::cout << "annotations=" << (annotations_match(report) ? "ok" : "mismatch") << "\n";
    if (!report.witness.empty()) {
        std::cout << "witness_leaf=" << report.witness_leaf << "\n"
                  << "witness_on_cost=" << report.witness_on_cost << "\n"
                  << "witness_opt_cost=" << report.witness_opt_cost << "\n";
    }
    if (!report.incomplete_node.empty()) {
        std::cout << "incomplete_node=" << report.incomplete_node << "\n"
                  << "incomplete_decision=" << report.incomplete_decision << "\n";
    }
    if (report.resource_abort) std::cout << "resource_abort=1\n";
    std::cout << "nodes_explored=" << report.nodes_explored << "\n"
              << "dedup_hits=" << report.dedup_hits << "\n"
              << "dominance_skips=" << report.dominance_skips << "\n"
              << "memo_hits=" << report.memo_hits << "\n";

    if (!report_path.empty()) {
        write_file(report_path, report_to_json(report, tree.scale).dump(2) + "\n");
    }
    switch (report.verdict) {
        case Verdict::verified: return 0;
        case Verdict::failed: return 1;
        case Verdict::incomplete: return 2;
    }
    return 2;
}

int cmd_play(const std::string& algorithm, const std::string& tree_spec,
             const std::string& trace_path) {
    const StrategyTree tree = tree_argument(tree_spec);
    const auto alg = make_algorithm(algorithm);
    const Trace trace = play(tree, *alg);
    std::cout << "algorithm=" << algorithm << "\n"
              << "leaf=" << trace.leaf_tag << "\n"
              << "on_cost=" << trace.on_cost << "\n"
              << "opt_cost=" << trace.opt_cost << "\n"
              << "ratio=" << trace.ratio.str() << "\n"
              << "steps=" << trace.steps.size() << "\n";
    if (!trace_path.empty()) write_file(trace_path, save_trace(trace));
    return 0;
}

int cmd_opt(const std::string& points_path, const std::string& method, long long scale) {
    const std::vector<Coord> points = points_file(points_path, scale);
    if (method == "bruteforce") {
        const long long count = opt_bruteforce(points, scale);
        std::cout << "count=" << count << "\n";
        return 0;
    }
    const OptResult result = opt_cover(points, scale);
    std::cout << "count=" << result.count << "\n";
    for (const Interval& iv : result.intervals) {
        std::cout << "interval=[" << format_coord(iv.lo, scale) << ","
                  << format_coord(iv.hi, scale) << "]\n";
    }
    return 0;
}

int cmd_search(const SearchConfig& config, const std::string& emit_path) {
    const SearchResult result = best_forced_ratio(config);
    std::cout << "value=" << result.value.str() << "\n";
    if (config.target) {
        std::cout << "target=" << config.target->str() << "\n"
                  << "target_met=" << (result.target_met ? 1 : 0) << "\n";
    }
    std::cout << "exhausted=" << (result.exhausted ? 1 : 0) << "\n"
              << "nodes=" << result.nodes << "\n"
              << "memo_hits=" << result.memo_hits << "\n";
    if (!emit_path.empty()) {
        if (!result.exhausted) {
            std::cerr << "error: node cap aborted the search; no tree to emit\n";
            return kExitData;
        }
        write_file(emit_path, save_tree(result.strategy));
        std::cout << "tree=" << emit_path << "\n";
    }
    return config.target && !result.target_met ? 1 : 0;
}

int cmd_export(const std::string& tree_spec, const std::string& format,
               const std::string& out_path) {
    const StrategyTree tree = tree_argument(tree_spec);
    write_file(out_path, format == "dot" ? export_dot(tree) : save_tree(tree));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adversarial lower-bound toolkit for online unit clustering"};
    app.require_subcommand(1);

    auto* verify_cmd = app.add_subcommand(
        "verify", "check a strategy tree against every deterministic lazy algorithm");
    std::string v_tree = "builtin:kk13", v_target, v_report;
    int v_jobs = 1;
    bool v_no_prune = false;
    long long v_cap = 10'000'000;
    verify_cmd->add_option("--tree", v_tree, "builtin:kk13 or a tree JSON file");
    verify_cmd->add_option("--target", v_target, "ratio to enforce, e.g. 13/8")->required();
    verify_cmd->add_option("--report", v_report, "write the full report JSON here");
    verify_cmd->add_option("--jobs", v_jobs, "worker threads")->check(CLI::PositiveNumber);
    verify_cmd->add_flag("--no-prune", v_no_prune, "disable dominance and transposition skips");
    verify_cmd->add_option("--node-cap", v_cap, "per-task explored-decision cap")
        ->check(CLI::PositiveNumber);

    auto* play_cmd = app.add_subcommand("play", "run one algorithm through a strategy tree");
    std::string p_alg, p_tree = "builtin:kk13", p_trace;
    play_cmd->add_option("--algorithm", p_alg, "greedy or grid")
        ->required()
        ->check(CLI::IsMember({"greedy", "grid"}));
    play_cmd->add_option("--tree", p_tree, "builtin:kk13 or a tree JSON file");
    play_cmd->add_option("--trace", p_trace, "write the game trace (JSON lines) here");

    auto* opt_cmd = app.add_subcommand("opt", "offline optimum cluster count for a point file");
    std::string o_points, o_method = "greedy";
    long long o_scale = 10;
    opt_cmd->add_option("--points", o_points, "whitespace-separated coordinates")->required();
    opt_cmd->add_option("--method", o_method, "greedy (default) or bruteforce")
        ->check(CLI::IsMember({"greedy", "bruteforce"}));
    opt_cmd->add_option("--scale", o_scale, "coordinate grid denominator")
        ->check(CLI::PositiveNumber);

    auto* search_cmd =
        app.add_subcommand("search", "minimax search for a forced competitive ratio");
    SearchConfig s_config;
    std::string s_target, s_emit;
    bool s_no_prune = false, s_no_memo = false;
    search_cmd->add_option("--scale", s_config.scale, "coordinate grid denominator")
        ->check(CLI::PositiveNumber);
    search_cmd->add_option("--grid-step", s_config.grid_step, "candidate spacing, scaled steps")
        ->check(CLI::PositiveNumber);
    search_cmd->add_option("--window", s_config.window, "first-point window width, units")
        ->check(CLI::NonNegativeNumber);
    search_cmd->add_option("--max-points", s_config.max_points, "adversary point budget")
        ->check(CLI::PositiveNumber);
    search_cmd->add_option("--target", s_target, "stop once this ratio is forced");
    search_cmd->add_option("--jobs", s_config.jobs, "worker threads")
        ->check(CLI::PositiveNumber);
    search_cmd->add_option("--node-cap", s_config.node_cap, "per-task evaluated-state cap")
        ->check(CLI::PositiveNumber);
    search_cmd->add_flag("--no-prune", s_no_prune, "disable bound cuts");
    search_cmd->add_flag("--no-memo", s_no_memo, "disable the transposition table");
    search_cmd->add_option("--emit-tree", s_emit, "write the found strategy tree here");

    auto* export_cmd = app.add_subcommand("export", "render a strategy tree");
    std::string e_tree = "builtin:kk13", e_format, e_out;
    export_cmd->add_option("--tree", e_tree, "builtin:kk13 or a tree JSON file");
    export_cmd->add_option("--format", e_format, "dot or json")
        ->required()
        ->check(CLI::IsMember({"dot", "json"}));
    export_cmd->add_option("--out", e_out, "output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(verify_cmd)) {
            return cmd_verify(v_tree, v_target, v_report, v_jobs, v_no_prune, v_cap);
        }
        if (app.got_subcommand(play_cmd)) return cmd_play(p_alg, p_tree, p_trace);
        if (app.got_subcommand(opt_cmd)) return cmd_opt(o_points, o_method, o_scale);
        if (app.got_subcommand(search_cmd)) {
            if (!s_target.empty()) s_config.target = parse_ratio(s_target);
            s_config.prune = !s_no_prune;
            s_config.memo = !s_no_memo;
            return cmd_search(s_config, s_emit);
        }
        if (app.got_subcommand(export_cmd)) return cmd_export(e_tree, e_format, e_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
