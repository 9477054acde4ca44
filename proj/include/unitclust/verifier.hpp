#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "unitclust/core.hpp"
#include "unitclust/rational.hpp"
#include "unitclust/strategy_tree.hpp"

namespace unitclust {

struct VerifyOptions {
    Ratio target{13, 8};
    bool prune = true;            // dominance + transposition skipping
    int jobs = 1;                 // worker threads; results are jobs-invariant
    long long node_cap = 10'000'000;  // per-task explored-decision cap
};

enum class Verdict { verified, failed, incomplete };

std::string verdict_name(Verdict v);

struct LeafRecord {
    std::string id;         // terminal node id
    std::string tag;
    Ratio expect{0, 1};     // annotation carried by the tree
    bool reached = false;
    Ratio min_ratio{0, 1};  // minimum over all explored completions
    long long min_on_cost = 0;  // smallest C_ON among ratio-minimal completions
    long long opt_cost = 0;     // its C_OPT
    long long paths = 0;        // counter: completions explored (pruning-dependent)
};

struct WitnessStep {
    Coord point = 0;
    Decision decision;
};

struct VerificationReport {
    Verdict verdict = Verdict::incomplete;
    Ratio target{0, 1};
    Ratio overall_min_ratio{0, 1};
    bool any_path = false;
    std::vector<LeafRecord> leaves;  // tree storage order

    // First completion (deterministic order) achieving overall_min_ratio.
    std::vector<WitnessStep> witness;
    std::string witness_leaf;
    long long witness_on_cost = 0;
    long long witness_opt_cost = 0;

    // Tree incompleteness: a feasible decision no branch matched.
    std::string incomplete_node;
    std::string incomplete_decision;
    bool resource_abort = false;

    long long nodes_explored = 0;   // counters: decisions applied,
    long long dedup_hits = 0;       // sibling decisions collapsed,
    long long dominance_skips = 0;  // volley states skipped via dominance,
    long long memo_hits = 0;        // give-node transpositions skipped
};

/// Enumerates every deterministic lazy algorithm behavior against the tree:
/// at each give all feasible decisions branch (deduplicated by canonical
/// successor), at each volley point likewise; each completion's ratio is
/// C_ON / opt_cover(points fed). Pruning (volley dominance and give
/// transposition skips) never changes value fields, only counters. The
/// witness is recomputed in a separate pruning-free pass so it is identical
/// whatever the options.
VerificationReport verify(const StrategyTree& tree, const VerifyOptions& options);

/// True iff the states have equal cluster counts, equal cost, identical point
/// multisets, and a's clusters perfectly match b's with reach(b_i) contained
/// in reach(a_i). Then every completion playable from b is playable from a at
/// equal cost, so b's subtree adds nothing below a's. Returns false whenever
/// the preconditions fail.
bool check_dominance(const OnState& a, const OnState& b);

/// Per-leaf table: computed minima against the tree's annotations, with
/// mismatches flagged.
std::string leaf_stats(const VerificationReport& report);

/// True iff every reached leaf's computed minimum equals its annotation.
bool annotations_match(const VerificationReport& report);

nlohmann::ordered_json report_to_json(const VerificationReport& report, long long scale);

}  // namespace unitclust
