#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "unitclust/core.hpp"
#include "unitclust/trace.hpp"

namespace unitclust {

/// A deterministic online algorithm: decide must return a member of
/// feasible_decisions(state, p) and may consult only the state and the point.
class OnlineAlgorithm {
  public:
    virtual ~OnlineAlgorithm() = default;
    virtual std::string name() const = 0;
    virtual Decision decide(const OnState& state, Coord p) = 0;
};

/// Assigns the feasible cluster with smallest lo (ties by id), else opens.
Decision greedy_decide(const OnState& state, Coord p);

/// One cluster per unit cell [k, k+1): assigns the cell's cluster if it
/// exists, else opens. Never assigns across cells.
Decision grid_decide(const OnState& state, Coord p);

class GreedyAlgorithm final : public OnlineAlgorithm {
  public:
    std::string name() const override { return "greedy"; }
    Decision decide(const OnState& state, Coord p) override { return greedy_decide(state, p); }
};

class GridAlgorithm final : public OnlineAlgorithm {
  public:
    std::string name() const override { return "grid"; }
    Decision decide(const OnState& state, Coord p) override { return grid_decide(state, p); }
};

/// Plays back a fixed decision list: step i takes script[i]. Used to drive
/// playback down a chosen tree path (witness replay, tests).
class ScriptedAlgorithm final : public OnlineAlgorithm {
  public:
    explicit ScriptedAlgorithm(std::vector<Decision> script) : script_(std::move(script)) {}
    std::string name() const override { return "scripted"; }
    Decision decide(const OnState& state, Coord p) override;

  private:
    std::vector<Decision> script_;
};

/// "greedy" or "grid"; throws ParseError on anything else.
std::unique_ptr<OnlineAlgorithm> make_algorithm(std::string_view name);

/// Feeds the points in order, applying the algorithm's decisions. Throws
/// IllegalMoveError naming the step if the algorithm returns an infeasible
/// decision. The trace carries per-step cumulative costs and ratios.
Trace run_algorithm(OnlineAlgorithm& alg, const std::vector<Coord>& points, long long scale);

}  // namespace unitclust
