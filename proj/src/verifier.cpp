#include "unitclust/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "unitclust/opt.hpp"

namespace unitclust {

using ordered_json = nlohmann::ordered_json;

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::verified: return "VERIFIED";
        case Verdict::failed: return "FAILED";
        case Verdict::incomplete: return "INCOMPLETE";
    }
    return "INCOMPLETE";
}

bool check_dominance(const OnState& a, const OnState& b) {
    if (a.scale != b.scale || a.clusters.size() != b.clusters.size()) return false;
    std::vector<Coord> pa = a.points, pb = b.points;
    std::sort(pa.begin(), pa.end());
    std::sort(pb.begin(), pb.end());
    if (pa != pb) return false;

    const size_t n = a.clusters.size();
    std::vector<std::vector<char>> ok(n, std::vector<char>(n, 0));
    for (size_t i = 0; i < n; ++i) {
        const Interval ra = reach(a.clusters[i], a.scale);
        for (size_t j = 0; j < n; ++j) {
            const Interval rb = reach(b.clusters[j], b.scale);
            ok[i][j] = ra.lo <= rb.lo && rb.hi <= ra.hi;
        }
    }

    // Kuhn's augmenting paths; cluster counts stay single digits here.
    std::vector<int> match_b(n, -1);
    std::vector<char> used;
    auto augment = [&](auto&& self, size_t i) -> bool {
        for (size_t j = 0; j < n; ++j) {
            if (!ok[i][j] || used[j]) continue;
            used[j] = 1;
            if (match_b[j] < 0 || self(self, static_cast<size_t>(match_b[j]))) {
                match_b[j] = static_cast<int>(i);
                return true;
            }
        }
        return false;
    };
    for (size_t i = 0; i < n; ++i) {
        used.assign(n, 0);
        if (!augment(augment, i)) return false;
    }
    return true;
}

namespace {

constexpr int kFrontierDepth = 6;  // give nodes walked before splitting into tasks

using LabelEnv = std::map<std::string, int>;

std::string label_signature(const OnState& state, const LabelEnv& labels) {
    const CanonicalState canon = canonicalize(state);
    std::string sig;
    for (const auto& [label, id] : labels) {
        sig += label;
        sig += ':';
        sig += std::to_string(canon.cluster_index[static_cast<size_t>(id)]);
        sig += ';';
    }
    return sig;
}

struct LeafAgg {
    bool reached = false;
    Ratio min_ratio{0, 1};
    long long min_on = 0;
    long long opt = 0;
    long long paths = 0;

    void add(Ratio r, long long on, long long opt_cost) {
        ++paths;
        if (!reached || r < min_ratio || (r == min_ratio && on < min_on)) {
            min_ratio = r;
            min_on = on;
            opt = opt_cost;
        }
        reached = true;
    }

    void merge(const LeafAgg& o) {
        paths += o.paths;
        if (!o.reached) return;
        if (!reached || o.min_ratio < min_ratio ||
            (o.min_ratio == min_ratio && o.min_on < min_on)) {
            min_ratio = o.min_ratio;
            min_on = o.min_on;
            opt = o.opt;
        }
        reached = true;
    }
};

struct Partial {
    std::map<std::string, LeafAgg> leaves;
    long long nodes = 0;
    long long dedup = 0;
    long long dom = 0;
    long long memo = 0;
    bool incomplete = false;
    std::string inc_node;
    std::string inc_decision;
    bool aborted = false;

    void merge(const Partial& o) {
        for (const auto& [id, agg] : o.leaves) leaves[id].merge(agg);
        nodes += o.nodes;
        dedup += o.dedup;
        dom += o.dom;
        memo += o.memo;
        if (!incomplete && o.incomplete) {
            incomplete = true;
            inc_node = o.inc_node;
            inc_decision = o.inc_decision;
        }
        aborted = aborted || o.aborted;
    }
};

struct Task {
    std::string node;
    OnState state;
    LabelEnv labels;
};

// The branch an algorithm decision selects, or nullptr on incompleteness.
const Branch* match_branch(const Node& node, const LabelEnv& labels, Decision d) {
    const Branch* fallback = nullptr;
    for (const Branch& b : node.branches) {
        switch (b.match.kind) {
            case Matcher::Kind::open_as:
                if (d.kind == Move::open) return &b;
                break;
            case Matcher::Kind::assign_to: {
                const auto it = labels.find(b.match.label);
                if (d.kind == Move::assign && it != labels.end() && it->second == d.cluster) {
                    return &b;
                }
                break;
            }
            case Matcher::Kind::otherwise:
                if (!fallback) fallback = &b;
                break;
        }
    }
    return fallback;
}

struct Successor {
    Decision decision;
    const Branch* branch;  // null at volley points
    OnState state;
    LabelEnv labels;
};

// Feasible decisions with sibling duplicates collapsed: two decisions whose
// matched child, canonical successor, and canonical label bindings coincide
// explore identical subtrees.
std::vector<Successor> expand(const OnState& state, Coord p, const Node* give_node,
                              const LabelEnv& labels, long long& dedup_hits,
                              std::string* unmatched) {
    std::vector<Successor> out;
    std::set<std::string> seen;
    for (const Decision& d : feasible_decisions(state, p)) {
        const Branch* branch = nullptr;
        if (give_node) {
            branch = match_branch(*give_node, labels, d);
            if (!branch) {
                if (unmatched) *unmatched = describe(d);
                continue;
            }
        }
        Successor s;
        s.decision = d;
        s.branch = branch;
        s.state = apply(state, p, d);
        s.labels = labels;
        if (branch && branch->match.kind == Matcher::Kind::open_as && d.kind == Move::open) {
            const int id = s.state.assignment.back();
            s.labels[branch->match.label] = id;
            s.state.clusters[static_cast<size_t>(id)].label = branch->match.label;
        }
        std::string key = (branch ? branch->child : std::string()) + '|' +
                          canonical_key(s.state) + '|' + label_signature(s.state, s.labels);
        if (!seen.insert(std::move(key)).second) {
            ++dedup_hits;
            continue;
        }
        out.push_back(std::move(s));
    }
    return out;
}

class Explorer {
  public:
    Explorer(const StrategyTree& tree, bool prune, long long cap)
        : tree_(tree), prune_(prune), cap_(cap) {}

    Partial result;

    // depth < 0 means unbounded; at depth 0 a give node becomes a task.
    void walk(const std::string& id, const OnState& state, const LabelEnv& labels, int depth,
              std::vector<Task>* tasks) {
        if (result.incomplete || result.aborted) return;
        if (result.nodes > cap_) {
            result.aborted = true;
            return;
        }
        const Node* node = tree_.find(id);
        if (node->kind == Node::Kind::leaf) {
            complete(id, state);
            return;
        }
        if (node->kind == Node::Kind::volley) {
            if (prune_) {
                auto& entries = volley_seen_[id];
                for (const OnState& prior : entries) {
                    if (check_dominance(prior, state)) {
                        ++result.dom;
                        return;
                    }
                }
                entries.push_back(state);
            }
            volley(id, *node, 0, state);
            return;
        }

        // give
        if (depth == 0 && tasks) {
            tasks->push_back(Task{id, state, labels});
            return;
        }
        if (prune_) {
            // The offset keeps translation-distinct states apart: future give
            // positions are absolute, so only same-position transpositions
            // (cluster reorderings) may collapse.
            const Coord offset = canonicalize(state).offset;
            std::string key = id + '|' + std::to_string(offset) + '|' + canonical_key(state) +
                              '|' + label_signature(state, labels);
            if (!transpositions_.insert(std::move(key)).second) {
                ++result.memo;
                return;
            }
        }
        std::string unmatched;
        const auto successors =
            expand(state, node->pos, node, labels, result.dedup, &unmatched);
        if (!unmatched.empty()) {
            result.incomplete = true;
            result.inc_node = id;
            result.inc_decision = unmatched;
            return;
        }
        for (const Successor& s : successors) {
            ++result.nodes;
            walk(s.branch->child, s.state, s.labels, depth > 0 ? depth - 1 : depth, tasks);
            if (result.incomplete || result.aborted) return;
        }
    }

  private:
    void complete(const std::string& leaf_id, const OnState& state) {
        const long long on = state.on_cost();
        const long long opt = opt_cover(state.points, state.scale).count;
        const Ratio r = opt > 0 ? cost_ratio(on, opt) : Ratio(0, 1);
        result.leaves[leaf_id].add(r, on, opt);
    }

    void volley(const std::string& id, const Node& node, size_t idx, const OnState& state) {
        if (result.incomplete || result.aborted) return;
        if (result.nodes > cap_) {
            result.aborted = true;
            return;
        }
        if (idx == node.points.size()) {
            complete(id, state);
            return;
        }
        static const LabelEnv no_labels;
        const auto successors =
            expand(state, node.points[idx], nullptr, no_labels, result.dedup, nullptr);
        for (const Successor& s : successors) {
            ++result.nodes;
            volley(id, node, idx + 1, s.state);
            if (result.incomplete || result.aborted) return;
        }
    }

    const StrategyTree& tree_;
    bool prune_;
    long long cap_;
    std::set<std::string> transpositions_;
    std::map<std::string, std::vector<OnState>> volley_seen_;
};

// Deterministic pruning-free pass reporting the first completion (in the
// fixed exploration order) whose ratio equals the overall minimum.
class WitnessFinder {
  public:
    WitnessFinder(const StrategyTree& tree, Ratio want) : tree_(tree), want_(want) {}

    std::vector<WitnessStep> path;
    std::string leaf;
    long long on = 0;
    long long opt = 0;

    bool walk(const std::string& id, const OnState& state, const LabelEnv& labels) {
        const Node* node = tree_.find(id);
        if (node->kind == Node::Kind::leaf) return complete(id, state);
        if (node->kind == Node::Kind::volley) return volley(id, *node, 0, state);
        long long scratch = 0;
        for (const Successor& s : expand(state, node->pos, node, labels, scratch, nullptr)) {
            path.push_back(WitnessStep{node->pos, s.decision});
            if (walk(s.branch->child, s.state, s.labels)) return true;
            path.pop_back();
        }
        return false;
    }

  private:
    bool complete(const std::string& leaf_id, const OnState& state) {
        const long long on_cost = state.on_cost();
        const long long opt_cost = opt_cover(state.points, state.scale).count;
        const Ratio r = opt_cost > 0 ? cost_ratio(on_cost, opt_cost) : Ratio(0, 1);
        if (!(r == want_)) return false;
        leaf = leaf_id;
        on = on_cost;
        opt = opt_cost;
        return true;
    }

    bool volley(const std::string& id, const Node& node, size_t idx, const OnState& state) {
        if (idx == node.points.size()) return complete(id, state);
        long long scratch = 0;
        static const LabelEnv no_labels;
        for (const Successor& s :
             expand(state, node.points[idx], nullptr, no_labels, scratch, nullptr)) {
            path.push_back(WitnessStep{node.points[idx], s.decision});
            if (volley(id, node, idx + 1, s.state)) return true;
            path.pop_back();
        }
        return false;
    }

    const StrategyTree& tree_;
    Ratio want_;
};

}  // namespace

VerificationReport verify(const StrategyTree& tree, const VerifyOptions& options) {
    validate_tree(tree);

    // Fixed-depth frontier split: the task list depends only on the tree and
    // options.prune, never on the worker count, so reports are jobs-invariant.
    std::vector<Task> tasks;
    Explorer prefix(tree, options.prune, options.node_cap);
    prefix.walk(tree.root, OnState(tree.scale), {}, kFrontierDepth, &tasks);

    std::vector<Partial> parts(tasks.size());
    auto run_task = [&](size_t i) {
        Explorer e(tree, options.prune, options.node_cap);
        e.walk(tasks[i].node, tasks[i].state, tasks[i].labels, -1, nullptr);
        parts[i] = std::move(e.result);
    };
    const int jobs = std::max(1, options.jobs);
    if (jobs == 1 || tasks.size() <= 1) {
        for (size_t i = 0; i < tasks.size(); ++i) run_task(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        const size_t workers = std::min<size_t>(static_cast<size_t>(jobs), tasks.size());
        pool.reserve(workers);
        for (size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) return;
                    run_task(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    Partial total = std::move(prefix.result);
    for (const Partial& p : parts) total.merge(p);

    VerificationReport report;
    report.target = options.target;
    report.nodes_explored = total.nodes;
    report.dedup_hits = total.dedup;
    report.dominance_skips = total.dom;
    report.memo_hits = total.memo;
    report.incomplete_node = total.inc_node;
    report.incomplete_decision = total.inc_decision;
    report.resource_abort = total.aborted;

    bool any = false;
    Ratio overall{0, 1};
    long long overall_on = 0;
    for (const std::string& id : terminal_ids(tree)) {
        const Node* node = tree.find(id);
        LeafRecord rec;
        rec.id = id;
        rec.tag = node->leaf.tag;
        rec.expect = node->leaf.expect;
        const auto it = total.leaves.find(id);
        if (it != total.leaves.end() && it->second.reached) {
            rec.reached = true;
            rec.min_ratio = it->second.min_ratio;
            rec.min_on_cost = it->second.min_on;
            rec.opt_cost = it->second.opt;
            rec.paths = it->second.paths;
            if (!any || rec.min_ratio < overall ||
                (rec.min_ratio == overall && rec.min_on_cost < overall_on)) {
                overall = rec.min_ratio;
                overall_on = rec.min_on_cost;
            }
            any = true;
        }
        report.leaves.push_back(std::move(rec));
    }
    report.any_path = any;
    report.overall_min_ratio = overall;

    if (total.incomplete || total.aborted) {
        report.verdict = Verdict::incomplete;
        return report;
    }
    report.verdict = overall >= options.target ? Verdict::verified : Verdict::failed;

    if (any) {
        WitnessFinder finder(tree, overall);
        if (finder.walk(tree.root, OnState(tree.scale), {})) {
            report.witness = std::move(finder.path);
            report.witness_leaf = finder.leaf;
            report.witness_on_cost = finder.on;
            report.witness_opt_cost = finder.opt;
        }
    }
    return report;
}

std::string leaf_stats(const VerificationReport& report) {
    std::ostringstream out;
    out << std::left << std::setw(6) << "leaf" << std::setw(8) << "tag" << std::setw(10)
        << "expect" << std::setw(10) << "min" << std::setw(8) << "on" << std::setw(8) << "opt"
        << std::setw(10) << "paths"
        << "status\n";
    for (const LeafRecord& rec : report.leaves) {
        out << std::left << std::setw(6) << rec.id << std::setw(8) << rec.tag << std::setw(10)
            << rec.expect.str();
        if (!rec.reached) {
            out << std::setw(10) << "-" << std::setw(8) << "-" << std::setw(8) << "-"
                << std::setw(10) << 0 << "UNREACHED\n";
            continue;
        }
        out << std::setw(10) << rec.min_ratio.str() << std::setw(8) << rec.min_on_cost
            << std::setw(8) << rec.opt_cost << std::setw(10) << rec.paths
            << (rec.min_ratio == rec.expect ? "ok" : "MISMATCH") << '\n';
    }
    return out.str();
}

bool annotations_match(const VerificationReport& report) {
    for (const LeafRecord& rec : report.leaves) {
        if (!rec.reached || !(rec.min_ratio == rec.expect)) return false;
    }
    return !report.leaves.empty();
}

nlohmann::ordered_json report_to_json(const VerificationReport& report, long long scale) {
    ordered_json j;
    j["verdict"] = verdict_name(report.verdict);
    j["target"] = report.target.str();
    j["overall_min_ratio"] = report.any_path ? ordered_json(report.overall_min_ratio.str())
                                             : ordered_json(nullptr);
    ordered_json leaves = ordered_json::array();
    for (const LeafRecord& rec : report.leaves) {
        ordered_json lj;
        lj["id"] = rec.id;
        lj["tag"] = rec.tag;
        lj["expect"] = rec.expect.str();
        if (rec.reached) {
            lj["min_ratio"] = rec.min_ratio.str();
            lj["min_on_cost"] = rec.min_on_cost;
            lj["opt_cost"] = rec.opt_cost;
        } else {
            lj["min_ratio"] = nullptr;
        }
        lj["paths_explored"] = rec.paths;
        leaves.push_back(std::move(lj));
    }
    j["leaves"] = std::move(leaves);
    if (!report.witness.empty()) {
        ordered_json w;
        w["leaf"] = report.witness_leaf;
        w["on_cost"] = report.witness_on_cost;
        w["opt_cost"] = report.witness_opt_cost;
        w["ratio"] = report.overall_min_ratio.str();
        ordered_json steps = ordered_json::array();
        for (const WitnessStep& s : report.witness) {
            ordered_json sj;
            sj["point"] = format_coord(s.point, scale);
            sj["move"] = s.decision.kind == Move::open ? "open" : "assign";
            if (s.decision.kind == Move::assign) sj["cluster"] = s.decision.cluster;
            steps.push_back(std::move(sj));
        }
        w["decisions"] = std::move(steps);
        j["witness"] = std::move(w);
    }
    if (!report.incomplete_node.empty()) {
        j["incomplete"] =
            ordered_json{{"node", report.incomplete_node}, {"decision", report.incomplete_decision}};
    }
    if (report.resource_abort) j["resource_abort"] = true;
    j["counters"] = ordered_json{{"nodes_explored", report.nodes_explored},
                                 {"dedup_hits", report.dedup_hits},
                                 {"dominance_skips", report.dominance_skips},
                                 {"memo_hits", report.memo_hits}};
    return j;
}

}  // namespace unitclust
