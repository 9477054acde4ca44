#pragma once

#include <optional>
#include <string>
#include <vector>

#include "unitclust/core.hpp"
#include "unitclust/rational.hpp"
#include "unitclust/strategy_tree.hpp"

namespace unitclust {

struct SearchConfig {
    long long scale = 1;
    long long grid_step = 1;  // candidate positions are multiples of this, in scaled steps
    long long window = 4;     // first point lies in [0, window * scale]
    int max_points = 4;
    std::optional<Ratio> target;  // stop as soon as the folded value reaches it
    long long node_cap = 10'000'000;  // per-task evaluated-state cap
    int jobs = 1;
    bool prune = true;  // admissible bound cuts; values stay exact
    bool memo = true;   // transposition table on canonical states
};

void validate_config(const SearchConfig& config);

struct SearchResult {
    Ratio value{0, 1};
    StrategyTree strategy;  // empty (no root) when the cap aborted the search
    long long nodes = 0;
    long long memo_hits = 0;
    bool exhausted = true;  // false: cap hit somewhere, value is a lower bound
    bool target_met = false;
};

/// Grid positions the adversary considers next: the initial window for the
/// first point, afterwards every multiple of grid_step within one unit of the
/// current point span, minus positions inside existing cluster extents (free
/// points only help the algorithm).
std::vector<Coord> candidate_points(const OnState& state, const SearchConfig& config);

/// Optimistic bound on any ratio reachable from here: C_OPT never decreases
/// and C_ON gains at most one per remaining point.
Ratio prune_bound(const OnState& state, int remaining);

/// Exact minimax value of the discretized adversary game:
/// V(state, rem) = max(stop ratio when points exist, max over candidates of
/// min over deduplicated feasible decisions of V(successor, rem - 1)),
/// plus a strategy tree realizing it that the verifier independently accepts
/// at that value. Root candidates are evaluated as independent tasks in a
/// fixed order, so value, strategy, and counters do not depend on jobs.
SearchResult best_forced_ratio(const SearchConfig& config);

}  // namespace unitclust
