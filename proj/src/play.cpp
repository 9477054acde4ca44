#include "unitclust/play.hpp"

#include <algorithm>
#include <map>

#include "unitclust/opt.hpp"

namespace unitclust {

namespace {

Decision checked_decision(OnlineAlgorithm& alg, const OnState& state, Coord p, int step) {
    const Decision d = alg.decide(state, p);
    const auto feasible = feasible_decisions(state, p);
    if (std::find(feasible.begin(), feasible.end(), d) == feasible.end()) {
        throw IllegalMoveError("algorithm '" + alg.name() + "' returned infeasible move '" +
                               describe(d) + "' at step " + std::to_string(step));
    }
    return d;
}

TraceStep record(const OnState& before, OnState& state, Coord p, Decision d, int step,
                 long long scale) {
    TraceStep s;
    s.step = step;
    s.point = p;
    s.decision = d;
    s.covered = before.covering(p) != nullptr;
    state = apply(before, p, d);
    s.cluster = state.assignment.back();
    s.label = state.clusters[static_cast<size_t>(s.cluster)].label;
    s.on_cost = state.on_cost();
    s.opt_cost = opt_cover(state.points, scale).count;
    s.ratio = cost_ratio(s.on_cost, s.opt_cost);
    return s;
}

}  // namespace

Trace play(const StrategyTree& tree, OnlineAlgorithm& alg) {
    validate_tree(tree);
    Trace t;
    t.scale = tree.scale;
    OnState state(tree.scale);
    std::map<std::string, int> labels;  // label -> cluster id
    std::string current = tree.root;
    int step = 0;

    for (;;) {
        const Node* node = tree.find(current);
        if (node->kind == Node::Kind::give) {
            const Coord p = node->pos;
            const Decision d = checked_decision(alg, state, p, step + 1);

            const Branch* taken = nullptr;
            const Branch* fallback = nullptr;
            for (const Branch& b : node->branches) {
                switch (b.match.kind) {
                    case Matcher::Kind::open_as:
                        if (d.kind == Move::open) taken = &b;
                        break;
                    case Matcher::Kind::assign_to: {
                        const auto it = labels.find(b.match.label);
                        if (d.kind == Move::assign && it != labels.end() &&
                            it->second == d.cluster) {
                            taken = &b;
                        }
                        break;
                    }
                    case Matcher::Kind::otherwise:
                        if (!fallback) fallback = &b;
                        break;
                }
                if (taken) break;
            }
            if (!taken) taken = fallback;
            if (!taken) {
                throw TreeError("node '" + current + "': no branch matches decision '" +
                                describe(d) + "'");
            }

            OnState next;
            TraceStep s = record(state, next, p, d, ++step, tree.scale);
            if (taken->match.kind == Matcher::Kind::open_as && d.kind == Move::open) {
                const int id = next.assignment.back();
                labels[taken->match.label] = id;
                next.clusters[static_cast<size_t>(id)].label = taken->match.label;
                s.label = taken->match.label;
            }
            state = std::move(next);
            t.steps.push_back(s);
            current = taken->child;
            continue;
        }

        if (node->kind == Node::Kind::volley) {
            for (const Coord p : node->points) {
                const Decision d = checked_decision(alg, state, p, step + 1);
                OnState next;
                t.steps.push_back(record(state, next, p, d, ++step, tree.scale));
                state = std::move(next);
            }
        }
        t.leaf_tag = node->leaf.tag;
        break;
    }

    t.on_cost = state.on_cost();
    t.opt_cost = opt_cover(state.points, tree.scale).count;
    t.ratio = t.opt_cost > 0 ? cost_ratio(t.on_cost, t.opt_cost) : Ratio(0, 1);
    return t;
}

}  // namespace unitclust
