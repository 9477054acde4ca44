#pragma once

#include <string>
#include <vector>

#include "unitclust/core.hpp"
#include "unitclust/rational.hpp"

namespace unitclust {

struct TraceStep {
    int step = 0;  // 1-based arrival index
    Coord point = 0;
    Decision decision;
    int cluster = -1;    // cluster the point ended up in
    std::string label;   // that cluster's bound label, if any
    bool covered = false;  // point was already inside a cluster when given
    long long on_cost = 0;
    long long opt_cost = 0;
    Ratio ratio{0, 1};
};

struct Trace {
    long long scale = 10;
    std::vector<TraceStep> steps;
    std::string leaf_tag;  // terminal adversary leaf, empty for plain runs
    long long on_cost = 0;
    long long opt_cost = 0;
    Ratio ratio{0, 1};
};

/// JSON lines: one step object per line, then a terminal leaf line when the
/// trace ended at an adversary leaf.
std::string save_trace(const Trace& t);
Trace load_trace(const std::string& text, long long scale);

/// Reapplies every step's decision from a fresh state. Throws
/// IllegalMoveError if any recorded decision is infeasible at its step.
Trace replay(const Trace& t);

/// Step-by-step and final cost/ratio equality.
bool same_costs(const Trace& a, const Trace& b);

}  // namespace unitclust
