#include "unitclust/core.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace unitclust {

namespace {

long long parse_int(std::string_view s, std::string_view what) {
    long long value = 0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError("bad " + std::string(what) + ": '" + std::string(s) + "'");
    }
    return value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

Coord parse_coord(std::string_view text, long long scale) {
    if (scale < 1) throw ParseError("scale must be >= 1");
    const std::string_view s = trim(text);
    if (s.empty()) throw ParseError("empty coordinate");

    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const long long p = parse_int(s.substr(0, slash), "coordinate numerator");
        const long long q = parse_int(s.substr(slash + 1), "coordinate denominator");
        if (q <= 0) throw ParseError("coordinate denominator must be positive: '" + std::string(s) + "'");
        const __int128 scaled = static_cast<__int128>(p) * scale;
        if (scaled % q != 0) {
            throw ParseError("coordinate '" + std::string(s) + "' is not a multiple of 1/" +
                             std::to_string(scale));
        }
        return static_cast<Coord>(scaled / q);
    }

    std::string_view body = s;
    long long sign = 1;
    if (body.front() == '-') {
        sign = -1;
        body.remove_prefix(1);
    } else if (body.front() == '+') {
        body.remove_prefix(1);
    }
    if (body.empty()) throw ParseError("bad coordinate: '" + std::string(s) + "'");

    std::string_view int_part = body;
    std::string_view frac_part;
    if (const auto dot = body.find('.'); dot != std::string_view::npos) {
        int_part = body.substr(0, dot);
        frac_part = body.substr(dot + 1);
        if (frac_part.empty()) throw ParseError("bad coordinate: '" + std::string(s) + "'");
    }
    if (int_part.empty()) int_part = "0";
    if (int_part.size() + frac_part.size() > 15) {
        throw ParseError("coordinate too long: '" + std::string(s) + "'");
    }
    for (std::string_view part : {int_part, frac_part}) {
        for (char c : part) {
            if (c < '0' || c > '9') throw ParseError("bad coordinate: '" + std::string(s) + "'");
        }
    }

    long long den = 1;
    for (size_t i = 0; i < frac_part.size(); ++i) den *= 10;
    const long long whole = parse_int(int_part, "coordinate");
    const long long frac = frac_part.empty() ? 0 : parse_int(frac_part, "coordinate fraction");
    const __int128 num = static_cast<__int128>(whole) * den + frac;
    const __int128 scaled = num * scale;
    if (scaled % den != 0) {
        throw ParseError("coordinate '" + std::string(s) + "' is not a multiple of 1/" +
                         std::to_string(scale));
    }
    return static_cast<Coord>(sign * (scaled / den));
}

std::string format_coord(Coord value, long long scale) {
    const bool neg = value < 0;
    const unsigned long long mag = neg ? -static_cast<unsigned long long>(value)
                                       : static_cast<unsigned long long>(value);
    unsigned long long whole = mag / static_cast<unsigned long long>(scale);
    unsigned long long rem = mag % static_cast<unsigned long long>(scale);

    std::string digits;
    while (rem != 0 && digits.size() < 18) {
        rem *= 10;
        digits.push_back(static_cast<char>('0' + rem / scale));
        rem %= scale;
    }
    if (rem != 0) {
        // Scale has prime factors beyond 2 and 5; fall back to an exact fraction.
        const long long g = std::gcd(value < 0 ? -value : value, scale);
        return std::to_string(value / g) + "/" + std::to_string(scale / g);
    }
    std::string out = neg ? "-" : "";
    out += std::to_string(whole);
    if (!digits.empty()) {
        out += '.';
        out += digits;
    }
    return out;
}

std::string describe(const Decision& d) {
    if (d.kind == Move::open) return "open";
    return "assign " + std::to_string(d.cluster);
}

const Cluster* OnState::covering(Coord p) const {
    for (const Cluster& c : clusters) {
        if (c.lo <= p && p <= c.hi) return &c;
    }
    return nullptr;
}

std::vector<Decision> feasible_decisions(const OnState& state, Coord p) {
    std::vector<Decision> out;
    bool covered = false;
    for (const Cluster& c : state.clusters) {
        if (c.lo <= p && p <= c.hi) {
            covered = true;
            break;
        }
    }
    if (covered) {
        for (const Cluster& c : state.clusters) {
            if (c.lo <= p && p <= c.hi) out.push_back(Decision::make_assign(c.id));
        }
        return out;
    }
    out.push_back(Decision::make_open());
    for (const Cluster& c : state.clusters) {
        if (can_assign(c, p, state.scale)) out.push_back(Decision::make_assign(c.id));
    }
    return out;
}

OnState apply(const OnState& state, Coord p, Decision d) {
    const auto feasible = feasible_decisions(state, p);
    if (std::find(feasible.begin(), feasible.end(), d) == feasible.end()) {
        throw IllegalMoveError("illegal move '" + describe(d) + "' at point " +
                               format_coord(p, state.scale));
    }
    OnState next = state;
    if (d.kind == Move::open) {
        Cluster c;
        c.id = static_cast<int>(next.clusters.size());
        c.lo = p;
        c.hi = p;
        next.clusters.push_back(c);
        next.assignment.push_back(c.id);
    } else {
        Cluster& c = next.clusters[static_cast<size_t>(d.cluster)];
        c.lo = std::min(c.lo, p);
        c.hi = std::max(c.hi, p);
        next.assignment.push_back(d.cluster);
    }
    next.points.push_back(p);
    return next;
}

CanonicalState canonicalize(const OnState& state) {
    CanonicalState out;
    out.state.scale = state.scale;

    Coord off = 0;
    bool has_any = false;
    for (const Cluster& c : state.clusters) {
        if (!has_any || c.lo < off) off = c.lo;
        has_any = true;
    }
    for (Coord p : state.points) {
        if (!has_any || p < off) off = p;
        has_any = true;
    }
    if (!has_any) off = 0;

    std::vector<int> order(state.clusters.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Cluster& ca = state.clusters[static_cast<size_t>(a)];
        const Cluster& cb = state.clusters[static_cast<size_t>(b)];
        if (ca.lo != cb.lo) return ca.lo < cb.lo;
        if (ca.hi != cb.hi) return ca.hi < cb.hi;
        return ca.id < cb.id;
    });

    out.cluster_index.assign(state.clusters.size(), 0);
    for (size_t rank = 0; rank < order.size(); ++rank) {
        out.cluster_index[static_cast<size_t>(order[rank])] = static_cast<int>(rank);
    }
    for (size_t rank = 0; rank < order.size(); ++rank) {
        const Cluster& src = state.clusters[static_cast<size_t>(order[rank])];
        Cluster c;
        c.id = static_cast<int>(rank);
        c.lo = src.lo - off;
        c.hi = src.hi - off;
        out.state.clusters.push_back(c);
    }

    std::vector<std::pair<Coord, int>> pts;
    pts.reserve(state.points.size());
    for (size_t i = 0; i < state.points.size(); ++i) {
        const int assigned = i < state.assignment.size() ? state.assignment[i] : -1;
        pts.emplace_back(state.points[i] - off,
                         assigned >= 0 ? out.cluster_index[static_cast<size_t>(assigned)] : -1);
    }
    std::sort(pts.begin(), pts.end());
    for (const auto& [p, a] : pts) {
        out.state.points.push_back(p);
        out.state.assignment.push_back(a);
    }
    out.offset = off;
    return out;
}

std::string canonical_key(const OnState& state) {
    const CanonicalState canon = canonicalize(state);
    std::ostringstream key;
    for (const Cluster& c : canon.state.clusters) key << 'c' << c.lo << ',' << c.hi;
    key << '|';
    for (Coord p : canon.state.points) key << 'p' << p;
    return key.str();
}

std::string state_key(const OnState& state) {
    std::ostringstream key;
    for (const Cluster& c : state.clusters) key << 'c' << c.lo << ',' << c.hi;
    key << '|';
    std::vector<Coord> pts = state.points;
    std::sort(pts.begin(), pts.end());
    for (Coord p : pts) key << 'p' << p;
    return key.str();
}

}  // namespace unitclust
