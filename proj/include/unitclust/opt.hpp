#pragma once

#include <vector>

#include "unitclust/core.hpp"

namespace unitclust {

struct OptResult {
    long long count = 0;
    std::vector<Interval> intervals;
};

/// Minimum number of closed unit intervals covering the points (greedy sweep,
/// optimal for this problem). Duplicates are collapsed first.
OptResult opt_cover(std::vector<Coord> points, long long scale);

/// Independent oracle: branch-and-bound over partitions of the sorted distinct
/// points into groups of span <= 1 unit. Refuses more than 20 distinct points.
long long opt_bruteforce(std::vector<Coord> points, long long scale);

}  // namespace unitclust
