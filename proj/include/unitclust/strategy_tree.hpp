#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "unitclust/core.hpp"
#include "unitclust/rational.hpp"

namespace unitclust {

struct TreeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LeafInfo {
    std::string tag;
    Ratio expect{0, 1};  // annotated minimum ratio; verified, never trusted

    friend bool operator==(const LeafInfo&, const LeafInfo&) = default;
};

/// Branch predicate on the algorithm's decision. OpenAs binds the freshly
/// opened cluster to a label; AssignTo matches assignment to the cluster a
/// label was previously bound to; Otherwise matches any remaining decision.
struct Matcher {
    enum class Kind { open_as, assign_to, otherwise };
    Kind kind = Kind::otherwise;
    std::string label;

    static Matcher open_as(std::string l) { return {Kind::open_as, std::move(l)}; }
    static Matcher assign_to(std::string l) { return {Kind::assign_to, std::move(l)}; }
    static Matcher otherwise() { return {Kind::otherwise, {}}; }

    friend bool operator==(const Matcher&, const Matcher&) = default;
};

struct Branch {
    Matcher match;
    std::string child;

    friend bool operator==(const Branch&, const Branch&) = default;
};

struct Node {
    enum class Kind { give, volley, leaf };
    Kind kind = Kind::leaf;
    Coord pos = 0;                  // give
    std::vector<Branch> branches;   // give
    std::vector<Coord> points;      // volley
    LeafInfo leaf;                  // volley, leaf

    friend bool operator==(const Node&, const Node&) = default;
};

/// A rooted DAG of adversary moves. Node order is preserved so save/load
/// round-trips the authored layout byte for byte.
struct StrategyTree {
    long long scale = 10;
    std::string root;
    std::vector<std::pair<std::string, Node>> nodes;

    void add(const std::string& id, Node node);
    const Node* find(const std::string& id) const;
    bool has(const std::string& id) const { return index_.count(id) != 0; }

  private:
    std::unordered_map<std::string, size_t> index_;
};

/// The Table-2 adversary: 17 give nodes n1..n17 and 10 terminals L1..L10,
/// scale 10, annotated leaf minima {2/1, 5/3, 5/3, 7/4, 10/6, 9/5, 10/6,
/// 13/8, 13/8, 13/8}.
StrategyTree builtin_kk13();

/// Resolves "builtin:kk13" or reads a tree file.
StrategyTree resolve_tree(const std::string& spec);

StrategyTree load_tree(const std::string& text);
std::string save_tree(const StrategyTree& tree);

/// Structural checks: root exists, children resolve, the node graph is a
/// rooted DAG, every give has branches, AssignTo labels are bound by an
/// ancestor OpenAs on every path and OpenAs labels are unique per path.
/// Throws TreeError naming the offending node.
void validate_tree(const StrategyTree& tree);

/// Graphviz rendering: give nodes show their position, edges their matcher,
/// terminals their tag and annotated ratio.
std::string export_dot(const StrategyTree& tree);

/// Same scale, root, and node set (order-insensitive).
bool tree_equal(const StrategyTree& a, const StrategyTree& b);

/// Ids of volley and leaf nodes, in storage order.
std::vector<std::string> terminal_ids(const StrategyTree& tree);

}  // namespace unitclust
