#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "unitclust/rational.hpp"

namespace unitclust {

/// Coordinate scaled by the run-wide scale S: the real position is value / S
/// and the unit length equals S scaled steps. All decision logic is exact
/// integer arithmetic on these.
using Coord = std::int64_t;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IllegalMoveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses a decimal ("8.5", "-1", "14") or rational ("17/2") coordinate string
/// into a scaled integer. Values not on the 1/scale grid are rejected, never
/// rounded.
Coord parse_coord(std::string_view text, long long scale);

/// Exact text form of a scaled coordinate: decimal when finitely
/// representable, "num/den" otherwise (scales with factors other than 2 and 5).
std::string format_coord(Coord value, long long scale);

struct Interval {
    Coord lo = 0;
    Coord hi = 0;
    bool contains(Coord p) const { return lo <= p && p <= hi; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// A growable interval of length at most one unit. lo never increases and hi
/// never decreases over its lifetime; id is creation order.
struct Cluster {
    int id = 0;
    Coord lo = 0;
    Coord hi = 0;
    std::string label;  // short name bound by an adversary tree, if any
};

/// All points the cluster could still be extended to cover: [hi - 1, lo + 1].
inline Interval reach(const Cluster& c, long long scale) {
    return Interval{c.hi - scale, c.lo + scale};
}

/// True iff extending the cluster to cover p keeps its length within one unit.
inline bool can_assign(const Cluster& c, Coord p, long long scale) {
    const Coord lo = p < c.lo ? p : c.lo;
    const Coord hi = p > c.hi ? p : c.hi;
    return hi - lo <= scale;
}

enum class Move { open, assign };

/// The online algorithm's move: open a new cluster at the point, or assign the
/// point to an existing cluster (extending it minimally).
struct Decision {
    Move kind = Move::open;
    int cluster = -1;

    static Decision make_open() { return Decision{Move::open, -1}; }
    static Decision make_assign(int id) { return Decision{Move::assign, id}; }

    friend bool operator==(const Decision&, const Decision&) = default;
};

std::string describe(const Decision& d);

/// Full game state: clusters in creation order (id == index), the points given
/// so far in arrival order, and which cluster took each point.
struct OnState {
    long long scale = 10;
    std::vector<Cluster> clusters;
    std::vector<Coord> points;
    std::vector<int> assignment;

    OnState() = default;
    explicit OnState(long long s) : scale(s) {}

    int on_cost() const { return static_cast<int>(clusters.size()); }

    /// Lowest-id cluster whose extent contains p, or nullptr.
    const Cluster* covering(Coord p) const;
};

/// The legal moves for point p. If p lies inside some existing cluster's
/// extent the point is free: only the covering Assign moves are returned (no
/// Open). Otherwise Open plus every Assign that stays within unit length,
/// clusters in id order.
std::vector<Decision> feasible_decisions(const OnState& state, Coord p);

/// Applies one decision, returning the successor state. Open adds cluster
/// [p, p]; Assign extends the target minimally to cover p. Throws
/// IllegalMoveError if the decision is not in feasible_decisions(state, p).
OnState apply(const OnState& state, Coord p, Decision d);

struct CanonicalState {
    OnState state;
    Coord offset = 0;                // amount subtracted from every coordinate
    std::vector<int> cluster_index;  // old cluster id -> canonical index
};

/// Translates the minimum coordinate to 0, orders clusters by (lo, hi,
/// creation id), relabels ids in that order and sorts the point multiset.
/// States equal under translation produce identical canonical forms.
CanonicalState canonicalize(const OnState& state);

/// Memo key for the canonical form: clusters and point multiset only
/// (assignment bookkeeping does not affect future dynamics).
std::string canonical_key(const OnState& state);

/// Untranslated key: clusters in creation order plus the sorted point
/// multiset. Equal keys mean interchangeable continuations at equal absolute
/// positions.
std::string state_key(const OnState& state);

}  // namespace unitclust
