#include "unitclust/search.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <map>
#include <set>
#include <thread>
#include <unordered_map>

#include "unitclust/opt.hpp"

namespace unitclust {

void validate_config(const SearchConfig& config) {
    if (config.scale < 1) throw ParseError("search: scale must be >= 1");
    if (config.grid_step < 1) throw ParseError("search: grid step must be >= 1");
    if (config.window < 0) throw ParseError("search: window must be >= 0");
    if (config.max_points < 1) throw ParseError("search: max points must be >= 1");
    if (config.node_cap < 1) throw ParseError("search: node cap must be >= 1");
    if (config.jobs < 1) throw ParseError("search: jobs must be >= 1");
}

namespace {

Coord ceil_multiple(Coord value, long long step) {
    if (value >= 0) return (value + step - 1) / step * step;
    return -((-value) / step) * step;
}

}  // namespace

std::vector<Coord> candidate_points(const OnState& state, const SearchConfig& config) {
    std::vector<Coord> out;
    if (state.points.empty()) {
        for (Coord p = 0; p <= config.window * config.scale; p += config.grid_step) {
            out.push_back(p);
        }
        return out;
    }
    const auto [mn, mx] = std::minmax_element(state.points.begin(), state.points.end());
    const Coord lo = *mn - config.scale;
    const Coord hi = *mx + config.scale;
    for (Coord p = ceil_multiple(lo, config.grid_step); p <= hi; p += config.grid_step) {
        if (!state.covering(p)) out.push_back(p);
    }
    return out;
}

Ratio prune_bound(const OnState& state, int remaining) {
    const long long opt = opt_cover(state.points, state.scale).count;
    return cost_ratio(state.on_cost() + remaining, opt);
}

namespace {

// Successor states for one candidate point, deduplicated by canonical form:
// decisions that transpose (assigning either of two identical clusters) share
// one evaluation.
std::vector<OnState> dedup_successors(const OnState& state, Coord p) {
    std::vector<OnState> out;
    std::set<std::string> seen;
    for (const Decision& d : feasible_decisions(state, p)) {
        OnState next = apply(state, p, d);
        if (seen.insert(canonical_key(next)).second) out.push_back(std::move(next));
    }
    return out;
}

class Engine {
  public:
    Engine(const SearchConfig& cfg) : cfg_(cfg) {}

    long long nodes = 0;
    long long memo_hits = 0;
    bool aborted = false;

    // Exact when the cap never fires; a lower bound otherwise (stopping is
    // always available to the adversary). Values are translation-invariant:
    // every state on the grid is translated onto the memo key's canonical
    // frame along with its candidate window.
    Ratio eval(const OnState& state, int rem) {
        std::optional<Ratio> stop;
        if (!state.points.empty()) {
            stop = cost_ratio(state.on_cost(), opt_cover(state.points, state.scale).count);
        }
        if (rem == 0) return *stop;

        std::string key;
        if (cfg_.memo) {
            key = canonical_key(state) + '#' + std::to_string(rem);
            const auto it = memo_.find(key);
            if (it != memo_.end()) {
                ++memo_hits;
                return it->second;
            }
        }
        ++nodes;
        if (nodes > cfg_.node_cap) {
            aborted = true;
            return stop.value_or(Ratio(0, 1));
        }

        std::optional<Ratio> best = stop;
        std::optional<Ratio> bound;
        if (cfg_.prune && !state.points.empty()) bound = prune_bound(state, rem);
        if (!(cfg_.prune && best && bound && *bound <= *best)) {
            for (const Coord p : candidate_points(state, cfg_)) {
                std::optional<Ratio> worst;
                for (const OnState& next : dedup_successors(state, p)) {
                    const Ratio v = eval(next, rem - 1);
                    if (!worst || v < *worst) worst = v;
                    // This candidate already fails to beat the running max;
                    // the partial min only ever loses the comparison below.
                    if (cfg_.prune && best && *worst <= *best) break;
                    if (aborted) break;
                }
                if (worst && (!best || *worst > *best)) best = worst;
                if (aborted) break;
                if (cfg_.prune && bound && best && *bound <= *best) break;
            }
        }
        const Ratio value = best.value_or(Ratio(0, 1));
        if (cfg_.memo && !aborted) memo_[key] = value;
        return value;
    }

  private:
    const SearchConfig& cfg_;
    std::unordered_map<std::string, Ratio> memo_;
};

std::string letter_label(int id) {
    std::string out;
    int n = id;
    do {
        out.insert(out.begin(), static_cast<char>('A' + n % 26));
        n = n / 26 - 1;
    } while (n >= 0);
    return out;
}

// Rebuilds the value-realizing tree, sequentially and after the value pass.
// Subtrees are shared between states with identical untranslated cluster
// layouts and point multisets, which keeps label-to-cluster bindings valid on
// every path into a shared node.
class Builder {
  public:
    // Uncapped: the value pass may have bound-pruned candidates that
    // reconstruction must still evaluate exactly, so the cap cannot apply.
    Builder(const SearchConfig& cfg, StrategyTree& tree)
        : cfg_(uncapped(cfg)), engine_(cfg_), tree_(tree) {}

    std::string build(const OnState& state, int rem) {
        const std::string cache_key = state_key(state) + '#' + std::to_string(rem);
        const auto cached = cache_.find(cache_key);
        if (cached != cache_.end()) return cached->second;

        const Ratio value = engine_.eval(state, rem);
        std::optional<Ratio> stop;
        if (!state.points.empty()) {
            stop = cost_ratio(state.on_cost(), opt_cover(state.points, state.scale).count);
        }

        const std::string id = "s" + std::to_string(++next_id_);
        cache_[cache_key] = id;

        if (stop && (*stop == value || rem == 0)) {
            Node n;
            n.kind = Node::Kind::leaf;
            n.leaf = LeafInfo{id, value};
            tree_.add(id, std::move(n));
            return id;
        }

        const Coord pos = pick_candidate(state, rem, value);
        Node n;
        n.kind = Node::Kind::give;
        n.pos = pos;
        // One branch per feasible decision; the verifier demands full coverage.
        for (const Decision& d : feasible_decisions(state, pos)) {
            OnState next = apply(state, pos, d);
            Matcher m = d.kind == Move::open
                            ? Matcher::open_as(letter_label(next.assignment.back()))
                            : Matcher::assign_to(
                                  next.clusters[static_cast<size_t>(d.cluster)].label);
            if (d.kind == Move::open) {
                const int new_id = next.assignment.back();
                next.clusters[static_cast<size_t>(new_id)].label = m.label;
            }
            n.branches.push_back(Branch{std::move(m), build(next, rem - 1)});
        }
        tree_.add(id, std::move(n));
        return id;
    }

  private:
    static SearchConfig uncapped(SearchConfig cfg) {
        cfg.node_cap = std::numeric_limits<long long>::max();
        return cfg;
    }

    Coord pick_candidate(const OnState& state, int rem, Ratio value) {
        for (const Coord p : candidate_points(state, cfg_)) {
            std::optional<Ratio> worst;
            for (const OnState& next : dedup_successors(state, p)) {
                const Ratio v = engine_.eval(next, rem - 1);
                if (!worst || v < *worst) worst = v;
            }
            if (worst && *worst == value) return p;
        }
        throw std::logic_error("strategy reconstruction lost the achieving candidate");
    }

    const SearchConfig cfg_;
    Engine engine_;
    StrategyTree& tree_;
    std::map<std::string, std::string> cache_;
    int next_id_ = 0;
};

struct RootTask {
    Coord candidate = 0;
    Ratio value{0, 1};
    long long nodes = 0;
    long long memo_hits = 0;
    bool aborted = false;
};

}  // namespace

SearchResult best_forced_ratio(const SearchConfig& config) {
    validate_config(config);

    const OnState root(config.scale);
    const std::vector<Coord> root_candidates = candidate_points(root, config);

    // Each root candidate is one task with a private engine: the fold below
    // is a pure function of the task order, so jobs never changes the result.
    std::vector<RootTask> tasks(root_candidates.size());
    std::vector<char> done(root_candidates.size(), 0);
    auto run_task = [&](size_t i) {
        Engine engine(config);
        RootTask t;
        t.candidate = root_candidates[i];
        std::optional<Ratio> worst;
        for (const OnState& next : dedup_successors(root, t.candidate)) {
            const Ratio v = engine.eval(next, config.max_points - 1);
            if (!worst || v < *worst) worst = v;
            if (engine.aborted) break;
        }
        t.value = worst.value_or(Ratio(0, 1));
        t.nodes = engine.nodes;
        t.memo_hits = engine.memo_hits;
        t.aborted = engine.aborted;
        tasks[i] = t;
        done[i] = 1;
    };

    const int jobs = std::max(1, config.jobs);
    if (jobs == 1 || tasks.size() <= 1) {
        // Sequential mode folds as it goes so a met target skips later tasks.
        for (size_t i = 0; i < tasks.size(); ++i) {
            run_task(i);
            if (config.target) {
                Ratio best = tasks[0].value;
                for (size_t k = 1; k <= i; ++k) best = std::max(best, tasks[k].value);
                if (best >= *config.target) break;
            }
        }
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        const size_t workers = std::min<size_t>(static_cast<size_t>(jobs), tasks.size());
        for (size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) return;
                    run_task(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    // Ordered fold with target cutoff: speculative work past the cutoff is
    // discarded, matching what sequential mode never ran.
    SearchResult result;
    bool have = false;
    size_t winner = 0;
    for (size_t i = 0; i < tasks.size(); ++i) {
        if (!done[i]) break;
        const RootTask& t = tasks[i];
        result.nodes += t.nodes;
        result.memo_hits += t.memo_hits;
        result.exhausted = result.exhausted && !t.aborted;
        if (!have || t.value > result.value) {
            result.value = t.value;
            winner = i;
            have = true;
        }
        if (config.target && have && result.value >= *config.target) break;
    }
    result.target_met = config.target && have && result.value >= *config.target;

    if (have && result.exhausted) {
        result.strategy.scale = config.scale;
        Builder builder(config, result.strategy);
        // The root is a give at the winning candidate; reconstruction below
        // re-derives every deeper choice from the (memoized) values.
        Node root_node;
        root_node.kind = Node::Kind::give;
        root_node.pos = root_candidates[winner];
        for (const Decision& d : feasible_decisions(root, root_node.pos)) {
            OnState next = apply(root, root_node.pos, d);
            const int new_id = next.assignment.back();
            Matcher m = Matcher::open_as(letter_label(new_id));
            next.clusters[static_cast<size_t>(new_id)].label = m.label;
            root_node.branches.push_back(
                Branch{std::move(m), builder.build(next, config.max_points - 1)});
        }
        result.strategy.root = "root";
        result.strategy.add("root", std::move(root_node));
        validate_tree(result.strategy);
    }
    return result;
}

}  // namespace unitclust
