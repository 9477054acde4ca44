#include "unitclust/strategy_tree.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace unitclust {

using ordered_json = nlohmann::ordered_json;

void StrategyTree::add(const std::string& id, Node node) {
    if (!index_.emplace(id, nodes.size()).second) {
        throw TreeError("duplicate node id '" + id + "'");
    }
    nodes.emplace_back(id, std::move(node));
}

const Node* StrategyTree::find(const std::string& id) const {
    const auto it = index_.find(id);
    return it == index_.end() ? nullptr : &nodes[it->second].second;
}

namespace {

Node give(Coord pos, std::vector<Branch> branches) {
    Node n;
    n.kind = Node::Kind::give;
    n.pos = pos;
    n.branches = std::move(branches);
    return n;
}

Node volley(std::vector<Coord> points, std::string tag, Ratio expect) {
    Node n;
    n.kind = Node::Kind::volley;
    n.points = std::move(points);
    n.leaf = LeafInfo{std::move(tag), expect};
    return n;
}

Node leaf(std::string tag, Ratio expect) {
    Node n;
    n.kind = Node::Kind::leaf;
    n.leaf = LeafInfo{std::move(tag), expect};
    return n;
}

Branch on_open(std::string label, std::string child) {
    return Branch{Matcher::open_as(std::move(label)), std::move(child)};
}

Branch on_assign(std::string label, std::string child) {
    return Branch{Matcher::assign_to(std::move(label)), std::move(child)};
}

Branch on_other(std::string child) { return Branch{Matcher::otherwise(), std::move(child)}; }

}  // namespace

StrategyTree builtin_kk13() {
    StrategyTree t;
    t.scale = 10;
    t.root = "n1";

    // Coordinates are 10x the real positions. The first point admits only
    // Open, so n1 binds the new cluster directly.
    t.add("n1", give(30, {on_open("D", "n2")}));
    t.add("n2", give(40, {on_assign("D", "n3"), on_open("_", "L1")}));
    t.add("L1", leaf("L1", Ratio(2, 1)));
    t.add("n3", give(50, {on_open("E", "n4")}));
    t.add("n4", give(60, {on_open("F", "n5"), on_assign("E", "L2")}));
    t.add("L2", volley({25, 45, 65}, "L2", Ratio(5, 3)));
    t.add("n5", give(20, {on_open("B", "n6")}));
    t.add("n6", give(10, {on_assign("B", "n7"), on_open("_", "L3")}));
    t.add("L3", leaf("L3", Ratio(5, 3)));
    t.add("n7", give(0, {on_open("A", "n8")}));
    t.add("n8", give(25, {on_open("C", "n9")}));
    t.add("n9", give(70, {on_assign("F", "n10"), on_open("_", "L4")}));
    t.add("L4", leaf("L4", Ratio(7, 4)));
    t.add("n10", give(80, {on_open("G", "n11")}));
    t.add("n11", give(85, {on_open("H", "n12"), on_assign("G", "L5")}));
    t.add("L5", volley({45, 56, 74, 95}, "L5", Ratio(10, 6)));
    // Assign(G) is also feasible at 9; it gets the same continuation as
    // Assign(H) via the otherwise branch.
    t.add("n12", give(90, {on_assign("H", "n13"), on_open("_", "L6"), on_other("n13")}));
    t.add("L6", leaf("L6", Ratio(9, 5)));
    t.add("n13", give(100, {on_open("J", "n14")}));
    t.add("n14", give(110, {on_assign("J", "n15"), on_open("_", "L7")}));
    t.add("L7", leaf("L7", Ratio(10, 6)));
    t.add("n15", give(95, {on_open("I", "n16"), on_assign("H", "L8")}));
    t.add("L8", volley({45, 56, 72, 83, 97, 115}, "L8", Ratio(13, 8)));
    t.add("n16", give(120, {on_open("K", "n17")}));
    t.add("n17", give(130, {on_assign("K", "L9"), on_open("L", "L10")}));
    t.add("L9", volley({115, 140}, "L9", Ratio(13, 8)));
    t.add("L10", volley({45, 56}, "L10", Ratio(13, 8)));

    validate_tree(t);
    return t;
}

StrategyTree resolve_tree(const std::string& spec) {
    if (spec == "builtin:kk13") return builtin_kk13();
    if (spec.rfind("builtin:", 0) == 0) {
        throw TreeError("unknown builtin tree '" + spec + "'");
    }
    std::ifstream in(spec);
    if (!in) throw ParseError("cannot open tree file '" + spec + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_tree(buf.str());
}

namespace {

Matcher matcher_from_json(const ordered_json& j, const std::string& id) {
    if (j.is_string()) {
        if (j.get<std::string>() == "otherwise") return Matcher::otherwise();
        throw TreeError("node '" + id + "': bad matcher '" + j.get<std::string>() + "'");
    }
    if (j.is_object() && j.size() == 1) {
        if (j.contains("open")) return Matcher::open_as(j.at("open").get<std::string>());
        if (j.contains("assign")) return Matcher::assign_to(j.at("assign").get<std::string>());
    }
    throw TreeError("node '" + id + "': bad matcher " + j.dump());
}

ordered_json matcher_to_json(const Matcher& m) {
    switch (m.kind) {
        case Matcher::Kind::open_as: return ordered_json{{"open", m.label}};
        case Matcher::Kind::assign_to: return ordered_json{{"assign", m.label}};
        case Matcher::Kind::otherwise: return ordered_json("otherwise");
    }
    throw TreeError("unreachable matcher kind");
}

LeafInfo leaf_from_json(const ordered_json& j) {
    LeafInfo info;
    info.tag = j.at("tag").get<std::string>();
    info.expect = parse_ratio(j.at("expect").get<std::string>());
    return info;
}

ordered_json leaf_to_json(const LeafInfo& info) {
    return ordered_json{{"tag", info.tag}, {"expect", info.expect.str()}};
}

}  // namespace

StrategyTree load_tree(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw ParseError("bad tree JSON: " + std::string(e.what()));
    }
    StrategyTree t;
    t.scale = j.at("scale").get<long long>();
    if (t.scale < 1) throw TreeError("scale must be >= 1");
    t.root = j.at("root").get<std::string>();
    for (const auto& [id, nj] : j.at("nodes").items()) {
        Node n;
        const auto kind = nj.at("kind").get<std::string>();
        try {
            if (kind == "give") {
                n.kind = Node::Kind::give;
                n.pos = parse_coord(nj.at("pos").get<std::string>(), t.scale);
                for (const auto& bj : nj.at("branches")) {
                    n.branches.push_back(Branch{matcher_from_json(bj.at("match"), id),
                                                bj.at("child").get<std::string>()});
                }
            } else if (kind == "volley") {
                n.kind = Node::Kind::volley;
                for (const auto& pj : nj.at("points")) {
                    n.points.push_back(parse_coord(pj.get<std::string>(), t.scale));
                }
                n.leaf = leaf_from_json(nj.at("leaf"));
            } else if (kind == "leaf") {
                n.kind = Node::Kind::leaf;
                n.leaf = leaf_from_json(nj.at("leaf"));
            } else {
                throw TreeError("unknown node kind '" + kind + "'");
            }
        } catch (const ParseError& e) {
            throw TreeError("node '" + id + "': " + e.what());
        }
        t.add(id, std::move(n));
    }
    validate_tree(t);
    return t;
}

std::string save_tree(const StrategyTree& tree) {
    ordered_json j;
    j["scale"] = tree.scale;
    j["root"] = tree.root;
    ordered_json nodes = ordered_json::object();
    for (const auto& [id, n] : tree.nodes) {
        ordered_json nj;
        switch (n.kind) {
            case Node::Kind::give: {
                nj["kind"] = "give";
                nj["pos"] = format_coord(n.pos, tree.scale);
                ordered_json branches = ordered_json::array();
                for (const Branch& b : n.branches) {
                    branches.push_back(
                        ordered_json{{"match", matcher_to_json(b.match)}, {"child", b.child}});
                }
                nj["branches"] = std::move(branches);
                break;
            }
            case Node::Kind::volley: {
                nj["kind"] = "volley";
                ordered_json points = ordered_json::array();
                for (Coord p : n.points) points.push_back(format_coord(p, tree.scale));
                nj["points"] = std::move(points);
                nj["leaf"] = leaf_to_json(n.leaf);
                break;
            }
            case Node::Kind::leaf:
                nj["kind"] = "leaf";
                nj["leaf"] = leaf_to_json(n.leaf);
                break;
        }
        nodes[id] = std::move(nj);
    }
    j["nodes"] = std::move(nodes);
    return j.dump(2) + "\n";
}

namespace {

// Walks every root path through the DAG checking label discipline. Cycles
// were ruled out before this runs, so the walk terminates.
void check_labels(const StrategyTree& tree, const std::string& id,
                  std::set<std::string>& bound) {
    const Node* n = tree.find(id);
    if (n->kind != Node::Kind::give) return;
    for (const Branch& b : n->branches) {
        switch (b.match.kind) {
            case Matcher::Kind::open_as:
                if (bound.count(b.match.label)) {
                    throw TreeError("node '" + id + "': label '" + b.match.label +
                                    "' already bound on this path");
                }
                bound.insert(b.match.label);
                check_labels(tree, b.child, bound);
                bound.erase(b.match.label);
                break;
            case Matcher::Kind::assign_to:
                if (!bound.count(b.match.label)) {
                    throw TreeError("node '" + id + "': label '" + b.match.label +
                                    "' not bound on this path");
                }
                check_labels(tree, b.child, bound);
                break;
            case Matcher::Kind::otherwise:
                check_labels(tree, b.child, bound);
                break;
        }
    }
}

}  // namespace

void validate_tree(const StrategyTree& tree) {
    if (!tree.find(tree.root)) throw TreeError("root '" + tree.root + "' not in nodes");
    for (const auto& [id, n] : tree.nodes) {
        if (n.kind == Node::Kind::give) {
            if (n.branches.empty()) throw TreeError("node '" + id + "': give without branches");
            for (const Branch& b : n.branches) {
                if (!tree.find(b.child)) {
                    throw TreeError("node '" + id + "': unknown child '" + b.child + "'");
                }
            }
        }
    }

    // Cycle check: DFS with colors over the child graph.
    std::unordered_map<std::string, int> color;  // 0 new, 1 open, 2 done
    std::vector<std::pair<std::string, size_t>> stack{{tree.root, 0}};
    color[tree.root] = 1;
    while (!stack.empty()) {
        auto& [id, next] = stack.back();
        const Node* n = tree.find(id);
        if (n->kind != Node::Kind::give || next >= n->branches.size()) {
            color[id] = 2;
            stack.pop_back();
            continue;
        }
        const std::string& child = n->branches[next].child;
        ++next;
        const int c = color[child];
        if (c == 1) throw TreeError("cycle through node '" + child + "'");
        if (c == 0) {
            color[child] = 1;
            stack.emplace_back(child, 0);
        }
    }

    std::set<std::string> bound;
    check_labels(tree, tree.root, bound);
}

std::string export_dot(const StrategyTree& tree) {
    std::ostringstream out;
    out << "digraph strategy {\n  rankdir=TB;\n  node [fontname=\"Helvetica\"];\n";
    for (const auto& [id, n] : tree.nodes) {
        switch (n.kind) {
            case Node::Kind::give:
                out << "  \"" << id << "\" [shape=ellipse, label=\"" << id << "\\ngive "
                    << format_coord(n.pos, tree.scale) << "\"];\n";
                break;
            case Node::Kind::volley: {
                out << "  \"" << id << "\" [shape=box, label=\"" << id << " (" << n.leaf.tag
                    << ")\\nvolley";
                for (Coord p : n.points) out << ' ' << format_coord(p, tree.scale);
                out << "\\nmin " << n.leaf.expect.str() << "\"];\n";
                break;
            }
            case Node::Kind::leaf:
                out << "  \"" << id << "\" [shape=box, label=\"" << id << " (" << n.leaf.tag
                    << ")\\nmin " << n.leaf.expect.str() << "\"];\n";
                break;
        }
    }
    for (const auto& [id, n] : tree.nodes) {
        if (n.kind != Node::Kind::give) continue;
        for (const Branch& b : n.branches) {
            std::string label;
            switch (b.match.kind) {
                case Matcher::Kind::open_as: label = "open " + b.match.label; break;
                case Matcher::Kind::assign_to: label = "assign " + b.match.label; break;
                case Matcher::Kind::otherwise: label = "otherwise"; break;
            }
            out << "  \"" << id << "\" -> \"" << b.child << "\" [label=\"" << label << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

bool tree_equal(const StrategyTree& a, const StrategyTree& b) {
    if (a.scale != b.scale || a.root != b.root || a.nodes.size() != b.nodes.size()) return false;
    for (const auto& [id, n] : a.nodes) {
        const Node* other = b.find(id);
        if (!other || !(n == *other)) return false;
    }
    return true;
}

std::vector<std::string> terminal_ids(const StrategyTree& tree) {
    std::vector<std::string> out;
    for (const auto& [id, n] : tree.nodes) {
        if (n.kind != Node::Kind::give) out.push_back(id);
    }
    return out;
}

}  // namespace unitclust
