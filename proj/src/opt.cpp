#include "unitclust/opt.hpp"

#include <algorithm>
#include <stdexcept>

namespace unitclust {

OptResult opt_cover(std::vector<Coord> points, long long scale) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    OptResult out;
    size_t i = 0;
    while (i < points.size()) {
        const Coord lo = points[i];
        out.intervals.push_back(Interval{lo, lo + scale});
        while (i < points.size() && points[i] <= lo + scale) ++i;
    }
    out.count = static_cast<long long>(out.intervals.size());
    return out;
}

namespace {

// Assign sorted points one by one to groups. A group's span is fixed by its
// first (smallest) member, so feasibility is p - group_min <= scale.
void partition_search(const std::vector<Coord>& points, long long scale, size_t next,
                      std::vector<Coord>& group_mins, long long& best) {
    if (static_cast<long long>(group_mins.size()) >= best) return;
    if (next == points.size()) {
        best = static_cast<long long>(group_mins.size());
        return;
    }
    const Coord p = points[next];
    for (size_t g = 0; g < group_mins.size(); ++g) {
        if (p - group_mins[g] <= scale) {
            partition_search(points, scale, next + 1, group_mins, best);
        }
    }
    group_mins.push_back(p);
    partition_search(points, scale, next + 1, group_mins, best);
    group_mins.pop_back();
}

}  // namespace

long long opt_bruteforce(std::vector<Coord> points, long long scale) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() > 20) {
        throw std::invalid_argument("opt_bruteforce: more than 20 distinct points");
    }
    if (points.empty()) return 0;

    long long best = static_cast<long long>(points.size());
    std::vector<Coord> group_mins;
    partition_search(points, scale, 0, group_mins, best);
    return best;
}

}  // namespace unitclust
