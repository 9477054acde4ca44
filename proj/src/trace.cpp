#include "unitclust/trace.hpp"

#include <sstream>

#include "json.hpp"
#include "unitclust/opt.hpp"

namespace unitclust {

using ordered_json = nlohmann::ordered_json;

std::string save_trace(const Trace& t) {
    std::string out;
    for (const TraceStep& s : t.steps) {
        ordered_json line;
        line["step"] = s.step;
        line["point"] = format_coord(s.point, t.scale);
        line["decision"] = s.decision.kind == Move::open ? "open" : "assign";
        line["cluster"] = s.cluster;
        if (!s.label.empty()) line["label"] = s.label;
        if (s.covered) line["covered"] = true;
        line["on_cost"] = s.on_cost;
        line["opt_cost"] = s.opt_cost;
        line["ratio"] = s.ratio.str();
        out += line.dump();
        out += '\n';
    }
    if (!t.leaf_tag.empty()) {
        ordered_json line;
        line["leaf"] = t.leaf_tag;
        line["on_cost"] = t.on_cost;
        line["opt_cost"] = t.opt_cost;
        line["ratio"] = t.ratio.str();
        out += line.dump();
        out += '\n';
    }
    return out;
}

Trace load_trace(const std::string& text, long long scale) {
    Trace t;
    t.scale = scale;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        if (raw.empty() || raw.find_first_not_of(" \t\r") == std::string::npos) continue;
        ordered_json line;
        try {
            line = ordered_json::parse(raw);
        } catch (const ordered_json::parse_error& e) {
            throw ParseError("bad trace line: " + std::string(e.what()));
        }
        if (line.contains("leaf")) {
            t.leaf_tag = line.at("leaf").get<std::string>();
            t.on_cost = line.at("on_cost").get<long long>();
            t.opt_cost = line.at("opt_cost").get<long long>();
            t.ratio = parse_ratio(line.at("ratio").get<std::string>());
            continue;
        }
        TraceStep s;
        s.step = line.at("step").get<int>();
        s.point = parse_coord(line.at("point").get<std::string>(), scale);
        const auto kind = line.at("decision").get<std::string>();
        s.cluster = line.at("cluster").get<int>();
        if (kind == "open") {
            s.decision = Decision::make_open();
        } else if (kind == "assign") {
            s.decision = Decision::make_assign(s.cluster);
        } else {
            throw ParseError("bad trace decision: '" + kind + "'");
        }
        if (line.contains("label")) s.label = line.at("label").get<std::string>();
        if (line.contains("covered")) s.covered = line.at("covered").get<bool>();
        s.on_cost = line.at("on_cost").get<long long>();
        s.opt_cost = line.at("opt_cost").get<long long>();
        s.ratio = parse_ratio(line.at("ratio").get<std::string>());
        t.steps.push_back(s);
    }
    if (t.leaf_tag.empty() && !t.steps.empty()) {
        t.on_cost = t.steps.back().on_cost;
        t.opt_cost = t.steps.back().opt_cost;
        t.ratio = t.steps.back().ratio;
    }
    return t;
}

Trace replay(const Trace& t) {
    Trace out;
    out.scale = t.scale;
    out.leaf_tag = t.leaf_tag;
    OnState state(t.scale);
    for (const TraceStep& s : t.steps) {
        TraceStep r = s;
        r.covered = state.covering(s.point) != nullptr;
        state = apply(state, s.point, s.decision);  // throws on infeasible
        r.cluster = state.assignment.back();
        r.label = state.clusters[static_cast<size_t>(r.cluster)].label;
        r.on_cost = state.on_cost();
        r.opt_cost = opt_cover(state.points, state.scale).count;
        r.ratio = r.opt_cost > 0 ? cost_ratio(r.on_cost, r.opt_cost) : Ratio(0, 1);
        out.steps.push_back(r);
    }
    if (!out.steps.empty()) {
        out.on_cost = out.steps.back().on_cost;
        out.opt_cost = out.steps.back().opt_cost;
        out.ratio = out.steps.back().ratio;
    }
    return out;
}

bool same_costs(const Trace& a, const Trace& b) {
    if (a.steps.size() != b.steps.size()) return false;
    for (size_t i = 0; i < a.steps.size(); ++i) {
        const TraceStep& x = a.steps[i];
        const TraceStep& y = b.steps[i];
        if (x.point != y.point || !(x.decision == y.decision)) return false;
        if (x.on_cost != y.on_cost || x.opt_cost != y.opt_cost || !(x.ratio == y.ratio)) {
            return false;
        }
    }
    return a.on_cost == b.on_cost && a.opt_cost == b.opt_cost && a.ratio == b.ratio;
}

}  // namespace unitclust
