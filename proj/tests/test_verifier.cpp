#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "unitclust/algorithms.hpp"
#include "unitclust/opt.hpp"
#include "unitclust/play.hpp"
#include "unitclust/strategy_tree.hpp"
#include "unitclust/verifier.hpp"

using namespace unitclust;

namespace {

Node give_node(Coord pos, std::vector<Branch> branches) {
    Node n;
    n.kind = Node::Kind::give;
    n.pos = pos;
    n.branches = std::move(branches);
    return n;
}

Node volley_node(std::vector<Coord> points, std::string tag, Ratio expect) {
    Node n;
    n.kind = Node::Kind::volley;
    n.points = std::move(points);
    n.leaf = {std::move(tag), expect};
    return n;
}

OnState raw_state(std::vector<Cluster> clusters, std::vector<Coord> points,
                  std::vector<int> assignment) {
    OnState s(10);
    s.clusters = std::move(clusters);
    s.points = std::move(points);
    s.assignment = std::move(assignment);
    return s;
}

// Test-local exhaustive enumeration for trees whose give nodes carry a single
// otherwise branch: every feasible decision sequence, no pruning, no sharing.
void enumerate_outcomes(const StrategyTree& tree, const std::string& id, size_t volley_at,
                        const OnState& state, std::vector<std::pair<long long, long long>>& out) {
    const Node& node = *tree.find(id);
    if (node.kind == Node::Kind::leaf ||
        (node.kind == Node::Kind::volley && volley_at == node.points.size())) {
        out.emplace_back(state.on_cost(), opt_cover(state.points, state.scale).count);
        return;
    }
    const Coord p = node.kind == Node::Kind::give ? node.pos : node.points[volley_at];
    for (const Decision& d : feasible_decisions(state, p)) {
        const OnState next = apply(state, p, d);
        if (node.kind == Node::Kind::give) {
            REQUIRE(node.branches.size() == 1);
            REQUIRE(node.branches[0].match == Matcher::otherwise());
            enumerate_outcomes(tree, node.branches[0].child, 0, next, out);
        } else {
            enumerate_outcomes(tree, id, volley_at + 1, next, out);
        }
    }
}

nlohmann::ordered_json strip_counters(nlohmann::ordered_json j) {
    j.erase("counters");
    for (auto& leaf : j["leaves"]) leaf.erase("paths_explored");
    return j;
}

}  // namespace

TEST_CASE("the builtin tree is verified at thirteen eighths exactly") {
    VerifyOptions options;
    options.target = {13, 8};
    const VerificationReport report = verify(builtin_kk13(), options);
    CHECK(report.verdict == Verdict::verified);
    CHECK(report.any_path);
    CHECK(report.overall_min_ratio == Ratio(13, 8));
    CHECK(report.overall_min_ratio.num == 13);
    CHECK(report.overall_min_ratio.den == 8);
    CHECK(report.incomplete_node.empty());
    CHECK_FALSE(report.resource_abort);
}

TEST_CASE("per-leaf minima reproduce the annotated table") {
    VerifyOptions options;
    options.target = {13, 8};
    const VerificationReport report = verify(builtin_kk13(), options);
    const std::map<std::string, Ratio> expected = {
        {"L1", {2, 1}},  {"L2", {5, 3}},  {"L3", {5, 3}},   {"L4", {7, 4}},
        {"L5", {10, 6}}, {"L6", {9, 5}},  {"L7", {10, 6}},  {"L8", {13, 8}},
        {"L9", {13, 8}}, {"L10", {13, 8}}};
    CHECK(report.leaves.size() == 10);
    int matched = 0;
    for (const LeafRecord& leaf : report.leaves) {
        REQUIRE(expected.count(leaf.id) == 1);
        CHECK(leaf.reached);
        CHECK(leaf.min_ratio == expected.at(leaf.id));
        CHECK(leaf.min_ratio == leaf.expect);
        matched += leaf.min_ratio == leaf.expect ? 1 : 0;
    }
    CHECK(matched == 10);
    CHECK(annotations_match(report));
    const std::string table = leaf_stats(report);
    CHECK(table.find("MISMATCH") == std::string::npos);
    CHECK(table.find("L10") != std::string::npos);
}

TEST_CASE("exact leaf costs behind the minima") {
    VerifyOptions options;
    options.target = {13, 8};
    const VerificationReport report = verify(builtin_kk13(), options);
    std::map<std::string, std::pair<long long, long long>> costs;
    for (const LeafRecord& leaf : report.leaves) {
        costs[leaf.id] = {leaf.min_on_cost, leaf.opt_cost};
    }
    CHECK(costs.at("L1") == std::pair<long long, long long>{2, 1});
    CHECK(costs.at("L2") == std::pair<long long, long long>{5, 3});
    CHECK(costs.at("L7") == std::pair<long long, long long>{10, 6});
    CHECK(costs.at("L8") == std::pair<long long, long long>{13, 8});
}

TEST_CASE("the builtin tree fails a five-thirds target with a witness") {
    VerifyOptions options;
    options.target = {5, 3};
    const VerificationReport report = verify(builtin_kk13(), options);
    CHECK(report.verdict == Verdict::failed);
    CHECK(report.overall_min_ratio == Ratio(13, 8));
    REQUIRE(!report.witness.empty());
    CHECK((report.witness_leaf == "L8" || report.witness_leaf == "L9" ||
           report.witness_leaf == "L10"));
    CHECK(report.witness_on_cost == 13);
    CHECK(report.witness_opt_cost == 8);

    std::vector<Decision> script;
    for (const WitnessStep& step : report.witness) script.push_back(step.decision);
    ScriptedAlgorithm scripted(script);
    const Trace trace = play(builtin_kk13(), scripted);
    CHECK(trace.leaf_tag == report.witness_leaf);
    CHECK(trace.on_cost == report.witness_on_cost);
    CHECK(trace.opt_cost == report.witness_opt_cost);
    CHECK(trace.ratio == report.overall_min_ratio);
    REQUIRE(trace.steps.size() == report.witness.size());
    for (size_t i = 0; i < trace.steps.size(); ++i) {
        CHECK(trace.steps[i].point == report.witness[i].point);
        CHECK(trace.steps[i].decision == report.witness[i].decision);
    }
}

TEST_CASE("truncating the far volley breaks the bound") {
    StrategyTree tree = builtin_kk13();
    for (auto& [id, node] : tree.nodes) {
        if (id == "L9") node.points = {parse_coord("11.5", 10)};
    }
    VerifyOptions options;
    options.target = {13, 8};
    const VerificationReport report = verify(tree, options);
    CHECK(report.verdict == Verdict::failed);
    CHECK(report.overall_min_ratio < Ratio(13, 8));
}

TEST_CASE("dominance requires a reach-containment matching") {
    const OnState a =
        raw_state({{0, 80, 80, ""}, {1, 85, 90, ""}}, {80, 85, 90}, {0, 1, 1});
    const OnState b =
        raw_state({{0, 80, 90, ""}, {1, 85, 85, ""}}, {80, 85, 90}, {0, 1, 0});
    CHECK_FALSE(check_dominance(a, b));
    CHECK_FALSE(check_dominance(b, a));
    CHECK(check_dominance(a, a));
    CHECK(check_dominance(b, b));

    const OnState wide = raw_state({{0, 50, 50, ""}}, {50}, {0});
    const OnState narrow = raw_state({{0, 45, 50, ""}}, {50}, {0});
    CHECK(check_dominance(wide, narrow));
    CHECK_FALSE(check_dominance(narrow, wide));
}

TEST_CASE("dominance preconditions are enforced") {
    const OnState one = raw_state({{0, 50, 50, ""}}, {50}, {0});
    const OnState other_points = raw_state({{0, 55, 55, ""}}, {55}, {0});
    const OnState two =
        raw_state({{0, 50, 50, ""}, {1, 60, 60, ""}}, {50, 60}, {0, 1});
    CHECK_FALSE(check_dominance(one, other_points));
    CHECK_FALSE(check_dominance(one, two));
    CHECK_FALSE(check_dominance(two, one));
}

TEST_CASE("tampered annotations are flagged, not trusted") {
    StrategyTree tree = builtin_kk13();
    for (auto& [id, node] : tree.nodes) {
        if (id == "L4") node.leaf.expect = {9, 5};
    }
    VerifyOptions options;
    options.target = {13, 8};
    const VerificationReport report = verify(tree, options);
    CHECK(report.verdict == Verdict::verified);  // minima unchanged, only the note lies
    CHECK_FALSE(annotations_match(report));
    CHECK(leaf_stats(report).find("MISMATCH") != std::string::npos);
}

TEST_CASE("leaf stats of an empty report") {
    const VerificationReport report;
    CHECK(leaf_stats(report).find("MISMATCH") == std::string::npos);
}

TEST_CASE("a tree hole is reported as incomplete with the node named") {
    StrategyTree t;
    t.scale = 10;
    t.root = "a";
    t.add("a", give_node(0, {{Matcher::open_as("A"), "b"}}));
    t.add("b", give_node(5, {{Matcher::open_as("B"), "end"}}));
    Node end;
    end.kind = Node::Kind::leaf;
    end.leaf = {"end", {1, 1}};
    t.add("end", end);
    VerifyOptions options;
    options.target = {1, 1};
    const VerificationReport report = verify(t, options);
    CHECK(report.verdict == Verdict::incomplete);
    CHECK(report.incomplete_node == "b");
    CHECK(report.incomplete_decision == "assign 0");
}

TEST_CASE("the node cap aborts with an explicit resource flag") {
    VerifyOptions options;
    options.target = {13, 8};
    options.node_cap = 10;
    const VerificationReport report = verify(builtin_kk13(), options);
    CHECK(report.verdict == Verdict::incomplete);
    CHECK(report.resource_abort);
    CHECK(report.incomplete_node.empty());
}

TEST_CASE("pruning changes counters only") {
    VerifyOptions with;
    with.target = {13, 8};
    VerifyOptions without = with;
    without.prune = false;
    const VerificationReport a = verify(builtin_kk13(), with);
    const VerificationReport b = verify(builtin_kk13(), without);
    CHECK(a.verdict == b.verdict);
    CHECK(a.overall_min_ratio == b.overall_min_ratio);
    CHECK(strip_counters(report_to_json(a, 10)) == strip_counters(report_to_json(b, 10)));
    CHECK(b.dominance_skips == 0);
    CHECK(b.memo_hits == 0);
}

TEST_CASE("worker count never changes the report") {
    VerifyOptions one;
    one.target = {13, 8};
    VerifyOptions eight = one;
    eight.jobs = 8;
    const VerificationReport a = verify(builtin_kk13(), one);
    const VerificationReport b = verify(builtin_kk13(), eight);
    CHECK(report_to_json(a, 10).dump(2) == report_to_json(b, 10).dump(2));
}

TEST_CASE("verifier minima agree with a test-local exhaustive enumeration") {
    StrategyTree t;
    t.scale = 10;
    t.root = "a";
    t.add("a", give_node(0, {{Matcher::otherwise(), "b"}}));
    t.add("b", give_node(8, {{Matcher::otherwise(), "v"}}));
    t.add("v", volley_node({16}, "v", {1, 1}));

    std::vector<std::pair<long long, long long>> outcomes;
    enumerate_outcomes(t, "a", 0, OnState(10), outcomes);
    REQUIRE(!outcomes.empty());
    Ratio least = cost_ratio(outcomes[0].first, outcomes[0].second);
    for (const auto& [on, opt] : outcomes) least = std::min(least, cost_ratio(on, opt));

    VerifyOptions options;
    options.target = {1, 1};
    const VerificationReport report = verify(t, options);
    CHECK(report.verdict == Verdict::verified);
    CHECK(report.overall_min_ratio == least);
    CHECK(report.overall_min_ratio == Ratio(1, 1));
    CHECK(report.leaves.size() == 1);
    CHECK(report.leaves[0].min_on_cost == 2);
    CHECK(report.leaves[0].opt_cost == 2);

    VerifyOptions raw = options;
    raw.prune = false;
    CHECK(verify(t, raw).leaves[0].paths == static_cast<long long>(outcomes.size()));
}

TEST_CASE("a volley root is enumerated like any terminal") {
    StrategyTree t;
    t.scale = 10;
    t.root = "v";
    t.add("v", volley_node({0, 5, 15}, "v", {1, 1}));
    std::vector<std::pair<long long, long long>> outcomes;
    enumerate_outcomes(t, "v", 0, OnState(10), outcomes);
    Ratio least{100, 1};
    for (const auto& [on, opt] : outcomes) least = std::min(least, cost_ratio(on, opt));
    VerifyOptions options;
    options.target = {1, 1};
    const VerificationReport report = verify(t, options);
    CHECK(report.overall_min_ratio == least);
}

TEST_CASE("report JSON carries the machine-checkable fields") {
    VerifyOptions options;
    options.target = {13, 8};
    const VerificationReport report = verify(builtin_kk13(), options);
    const auto j = report_to_json(report, 10);
    CHECK(j["verdict"] == "VERIFIED");
    CHECK(j["target"] == "13/8");
    CHECK(j["overall_min_ratio"] == "13/8");
    CHECK(j["leaves"].size() == 10);
    CHECK(j["witness"]["ratio"] == "13/8");
    CHECK(j["counters"]["nodes_explored"].get<long long>() > 0);
    for (const auto& step : j["witness"]["decisions"]) {
        CHECK(step.contains("point"));
        CHECK(step.contains("move"));
    }
}
