#include "unitclust/algorithms.hpp"

#include <algorithm>

#include "unitclust/opt.hpp"

namespace unitclust {

Decision greedy_decide(const OnState& state, Coord p) {
    const auto feasible = feasible_decisions(state, p);
    const Decision* best = nullptr;
    Coord best_lo = 0;
    for (const Decision& d : feasible) {
        if (d.kind != Move::assign) continue;
        const Coord lo = state.clusters[static_cast<size_t>(d.cluster)].lo;
        if (!best || lo < best_lo) {
            best = &d;
            best_lo = lo;
        }
    }
    if (best) return *best;
    return Decision::make_open();
}

namespace {

long long cell_of(Coord p, long long scale) {
    return p >= 0 ? p / scale : -((-p + scale - 1) / scale);
}

}  // namespace

Decision grid_decide(const OnState& state, Coord p) {
    const auto feasible = feasible_decisions(state, p);
    const long long cell = cell_of(p, state.scale);
    for (const Decision& d : feasible) {
        if (d.kind == Move::assign &&
            cell_of(state.clusters[static_cast<size_t>(d.cluster)].lo, state.scale) == cell) {
            return d;
        }
    }
    // Covered by a foreign-cell cluster (cannot happen in grid's own games,
    // but decide must stay total): take the first free assign.
    if (feasible.front().kind == Move::assign) return feasible.front();
    return Decision::make_open();
}

Decision ScriptedAlgorithm::decide(const OnState& state, Coord) {
    const size_t i = state.points.size();
    if (i >= script_.size()) {
        throw IllegalMoveError("scripted algorithm ran out of decisions at step " +
                               std::to_string(i + 1));
    }
    return script_[i];
}

std::unique_ptr<OnlineAlgorithm> make_algorithm(std::string_view name) {
    if (name == "greedy") return std::make_unique<GreedyAlgorithm>();
    if (name == "grid") return std::make_unique<GridAlgorithm>();
    throw ParseError("unknown algorithm '" + std::string(name) + "' (expected greedy or grid)");
}

Trace run_algorithm(OnlineAlgorithm& alg, const std::vector<Coord>& points, long long scale) {
    Trace t;
    t.scale = scale;
    OnState state(scale);
    for (size_t i = 0; i < points.size(); ++i) {
        const Coord p = points[i];
        const Decision d = alg.decide(state, p);
        const auto feasible = feasible_decisions(state, p);
        if (std::find(feasible.begin(), feasible.end(), d) == feasible.end()) {
            throw IllegalMoveError("algorithm '" + alg.name() + "' returned infeasible move '" +
                                   describe(d) + "' at step " + std::to_string(i + 1));
        }
        TraceStep s;
        s.step = static_cast<int>(i + 1);
        s.point = p;
        s.decision = d;
        s.covered = state.covering(p) != nullptr;
        state = apply(state, p, d);
        s.cluster = state.assignment.back();
        s.label = state.clusters[static_cast<size_t>(s.cluster)].label;
        s.on_cost = state.on_cost();
        s.opt_cost = opt_cover(state.points, scale).count;
        s.ratio = cost_ratio(s.on_cost, s.opt_cost);
        t.steps.push_back(s);
    }
    if (!t.steps.empty()) {
        t.on_cost = t.steps.back().on_cost;
        t.opt_cost = t.steps.back().opt_cost;
        t.ratio = t.steps.back().ratio;
    }
    return t;
}

}  // namespace unitclust
