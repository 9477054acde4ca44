#pragma once

#include "unitclust/algorithms.hpp"
#include "unitclust/strategy_tree.hpp"
#include "unitclust/trace.hpp"

namespace unitclust {

/// Walks the tree against one algorithm: at each give the point is fed and
/// the algorithm's decision picks the branch (explicit matchers in order,
/// otherwise as fallback); at a volley every point is fed with the algorithm
/// deciding freely; the terminal leaf ends the game. Throws TreeError if a
/// feasible decision taken matches no branch (tree incompleteness), and
/// IllegalMoveError if the algorithm returns an infeasible decision.
Trace play(const StrategyTree& tree, OnlineAlgorithm& alg);

}  // namespace unitclust
