#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "unitclust/algorithms.hpp"
#include "unitclust/play.hpp"
#include "unitclust/strategy_tree.hpp"
#include "unitclust/trace.hpp"

using namespace unitclust;

namespace {

Node give_node(Coord pos, std::vector<Branch> branches) {
    Node n;
    n.kind = Node::Kind::give;
    n.pos = pos;
    n.branches = std::move(branches);
    return n;
}

Node leaf_node(std::string tag, Ratio expect) {
    Node n;
    n.kind = Node::Kind::leaf;
    n.leaf = {std::move(tag), expect};
    return n;
}

}  // namespace

TEST_CASE("builtin tree shape: 17 give nodes, 10 terminals") {
    const StrategyTree tree = builtin_kk13();
    CHECK(tree.scale == 10);
    CHECK(tree.root == "n1");
    long long gives = 0, terminals = 0;
    for (const auto& [id, node] : tree.nodes) {
        (node.kind == Node::Kind::give ? gives : terminals) += 1;
    }
    CHECK(gives == 17);
    CHECK(terminals == 10);
    CHECK(terminal_ids(tree).size() == 10);
}

TEST_CASE("builtin annotated minima") {
    const StrategyTree tree = builtin_kk13();
    const std::map<std::string, Ratio> expected = {
        {"L1", {2, 1}},  {"L2", {5, 3}},  {"L3", {5, 3}},   {"L4", {7, 4}},
        {"L5", {10, 6}}, {"L6", {9, 5}},  {"L7", {10, 6}},  {"L8", {13, 8}},
        {"L9", {13, 8}}, {"L10", {13, 8}}};
    Ratio least{100, 1};
    for (const auto& [id, want] : expected) {
        const Node* node = tree.find(id);
        REQUIRE(node != nullptr);
        CHECK(node->leaf.expect == want);
        least = std::min(least, node->leaf.expect);
    }
    CHECK(least == Ratio(13, 8));
}

TEST_CASE("builtin volleys carry the terminal point lists") {
    const StrategyTree tree = builtin_kk13();
    CHECK(tree.find("L2")->points == std::vector<Coord>{25, 45, 65});
    CHECK(tree.find("L5")->points == std::vector<Coord>{45, 56, 74, 95});
    CHECK(tree.find("L8")->points == std::vector<Coord>{45, 56, 72, 83, 97, 115});
    CHECK(tree.find("L9")->points == std::vector<Coord>{115, 140});
    CHECK(tree.find("L10")->points == std::vector<Coord>{45, 56});
}

TEST_CASE("save and load round-trip the builtin tree") {
    const StrategyTree tree = builtin_kk13();
    const std::string text = save_tree(tree);
    const StrategyTree back = load_tree(text);
    CHECK(tree_equal(tree, back));
    CHECK(save_tree(back) == text);
}

TEST_CASE("validation rejects an unbound assign label") {
    StrategyTree t;
    t.scale = 10;
    t.root = "r";
    t.add("r", give_node(0, {{Matcher::assign_to("Z"), "end"}, {Matcher::otherwise(), "end"}}));
    t.add("end", leaf_node("end", {1, 1}));
    CHECK_THROWS_AS(validate_tree(t), TreeError);
}

TEST_CASE("validation rejects a duplicate open label on one path") {
    StrategyTree t;
    t.scale = 10;
    t.root = "a";
    t.add("a", give_node(0, {{Matcher::open_as("X"), "b"}}));
    t.add("b", give_node(20, {{Matcher::open_as("X"), "end"}}));
    t.add("end", leaf_node("end", {1, 1}));
    CHECK_THROWS_AS(validate_tree(t), TreeError);
}

TEST_CASE("validation rejects cycles") {
    StrategyTree t;
    t.scale = 10;
    t.root = "a";
    t.add("a", give_node(0, {{Matcher::otherwise(), "b"}}));
    t.add("b", give_node(20, {{Matcher::otherwise(), "a"}}));
    CHECK_THROWS_AS(validate_tree(t), TreeError);
}

TEST_CASE("validation rejects dangling children and missing roots") {
    StrategyTree t;
    t.scale = 10;
    t.root = "a";
    t.add("a", give_node(0, {{Matcher::otherwise(), "ghost"}}));
    CHECK_THROWS_AS(validate_tree(t), TreeError);

    StrategyTree r;
    r.scale = 10;
    r.root = "nowhere";
    CHECK_THROWS_AS(validate_tree(r), TreeError);
}

TEST_CASE("loading rejects off-grid positions") {
    const std::string text = R"({
      "scale": 10,
      "root": "r",
      "nodes": {"r": {"kind": "leaf", "leaf": {"tag": "x", "expect": "1/1"}}}
    })";
    CHECK_NOTHROW(load_tree(text));
    const std::string off_grid = R"({
      "scale": 10,
      "root": "r",
      "nodes": {
        "r": {"kind": "give", "pos": "3.14",
               "branches": [{"match": "otherwise", "child": "end"}]},
        "end": {"kind": "leaf", "leaf": {"tag": "x", "expect": "1/1"}}
      }
    })";
    CHECK_THROWS_AS(load_tree(off_grid), TreeError);
}

TEST_CASE("dot export shows the table structure") {
    const std::string dot = export_dot(builtin_kk13());
    auto count = [&](const std::string& needle) {
        long long n = 0;
        for (auto at = dot.find(needle); at != std::string::npos;
             at = dot.find(needle, at + needle.size())) {
            ++n;
        }
        return n;
    };
    CHECK(count("shape=box") == 10);
    CHECK(count(" -> ") == 27);
    CHECK(count("\"n12\" -> \"n13\"") == 2);
    CHECK(count("13/8") == 3);
}

TEST_CASE("dot export of a single leaf") {
    StrategyTree t;
    t.scale = 10;
    t.root = "only";
    t.add("only", leaf_node("only", {1, 1}));
    const std::string dot = export_dot(t);
    CHECK(dot.find("only") != std::string::npos);
    CHECK(dot.find(" -> ") == std::string::npos);
}

TEST_CASE("greedy walks to the three-point volley") {
    GreedyAlgorithm greedy;
    const Trace trace = play(builtin_kk13(), greedy);
    CHECK(trace.leaf_tag == "L2");
    CHECK(trace.on_cost == 5);
    CHECK(trace.opt_cost == 3);
    CHECK(trace.ratio == Ratio(5, 3));
}

TEST_CASE("grid loses at least 13/8 against the builtin tree") {
    GridAlgorithm grid;
    const Trace trace = play(builtin_kk13(), grid);
    CHECK(trace.ratio >= Ratio(13, 8));
}

TEST_CASE("baseline plays of the builtin tree never see covered points") {
    GreedyAlgorithm greedy;
    GridAlgorithm grid;
    for (const Trace& trace : {play(builtin_kk13(), greedy), play(builtin_kk13(), grid)}) {
        for (const TraceStep& step : trace.steps) CHECK_FALSE(step.covered);
    }
}

TEST_CASE("single give node forces ratio one") {
    StrategyTree t;
    t.scale = 10;
    t.root = "r";
    t.add("r", give_node(0, {{Matcher::otherwise(), "end"}}));
    t.add("end", leaf_node("stop", {1, 1}));
    GreedyAlgorithm greedy;
    const Trace trace = play(t, greedy);
    CHECK(trace.ratio == Ratio(1, 1));
    CHECK(trace.leaf_tag == "stop");
}

TEST_CASE("explicit matchers win over otherwise regardless of order") {
    StrategyTree t;
    t.scale = 10;
    t.root = "r";
    t.add("r", give_node(0, {{Matcher::otherwise(), "lost"}, {Matcher::open_as("A"), "won"}}));
    t.add("won", leaf_node("won", {1, 1}));
    t.add("lost", leaf_node("lost", {1, 1}));
    GreedyAlgorithm greedy;
    CHECK(play(t, greedy).leaf_tag == "won");
}

TEST_CASE("playback reports a tree hole naming the node") {
    StrategyTree t;
    t.scale = 10;
    t.root = "a";
    t.add("a", give_node(0, {{Matcher::open_as("A"), "b"}}));
    t.add("b", give_node(5, {{Matcher::open_as("B"), "end"}}));
    t.add("end", leaf_node("end", {1, 1}));
    GreedyAlgorithm greedy;  // assigns A at 0.5, which node b does not cover
    CHECK_THROWS_AS(play(t, greedy), TreeError);
}

TEST_CASE("labels from the tree appear on trace steps") {
    GreedyAlgorithm greedy;
    const Trace trace = play(builtin_kk13(), greedy);
    REQUIRE(!trace.steps.empty());
    CHECK(trace.steps[0].label == "D");
}

TEST_CASE("traces round-trip through text and replay to the same costs") {
    GridAlgorithm grid;
    const Trace trace = play(builtin_kk13(), grid);
    const std::string text = save_trace(trace);
    const Trace loaded = load_trace(text, trace.scale);
    CHECK(same_costs(trace, loaded));
    CHECK(loaded.leaf_tag == trace.leaf_tag);
    const Trace again = replay(loaded);
    CHECK(same_costs(trace, again));
    CHECK(save_trace(loaded) == text);
}

TEST_CASE("replay rejects tampered traces") {
    GreedyAlgorithm greedy;
    const Trace trace = play(builtin_kk13(), greedy);
    Trace bad = trace;
    bad.steps[1].decision = Decision::make_assign(7);
    CHECK_THROWS_AS(replay(bad), IllegalMoveError);
}

TEST_CASE("unknown builtin names are rejected") {
    CHECK_THROWS_AS(resolve_tree("builtin:kk99"), TreeError);
    CHECK_THROWS_AS(resolve_tree("/no/such/file.json"), ParseError);
    CHECK(tree_equal(resolve_tree("builtin:kk13"), builtin_kk13()));
}
