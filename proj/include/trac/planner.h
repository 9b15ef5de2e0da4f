#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trac/rng.h"
#include "trac/strips.h"

namespace trac {

class PlanCost {
 public:
  static PlanCost finite(std::uint32_t k) { return PlanCost(k); }
  static PlanCost unreachable() { return PlanCost(std::nullopt); }

  bool is_finite() const { return value_.has_value(); }
  std::uint32_t value() const { return value_.value(); }
  std::string str() const { return value_ ? std::to_string(*value_) : "unreachable"; }

  bool operator==(const PlanCost&) const = default;

 private:
  explicit PlanCost(std::optional<std::uint32_t> v) : value_(v) {}
  std::optional<std::uint32_t> value_;
};

struct PlanSet {
  std::vector<ActionSequence> plans;
  bool complete = true;
};

// Caps the number of distinct states a search may store.
struct SearchLimits {
  std::size_t max_states = 20'000'000;
};

class UnreachableGoal : public Error {
 public:
  using Error::Error;
};

// 2·M + 2 steps.
std::size_t default_bound(const GroundTask& task);

/// Length of a shortest applicable sequence from `s` whose final state
/// satisfies `g`, found by breadth-first search with duplicate detection.
/// Unreachable if no such sequence has length <= bound. Throws
/// BudgetExceeded when the search outgrows `limits`.
PlanCost optimal_cost(const GroundTask& task, const State& s, const Condition& g,
                      std::size_t bound, SearchLimits limits = {});

bool achievable_within(const GroundTask& task, const State& s, const Condition& g,
                       std::size_t n, SearchLimits limits = {});

// Final-state semantics: the goal must hold after the whole sequence.
bool is_goal_achieving(const GroundTask& task, const State& s, const Condition& g,
                       std::span<const ActionId> seq);

/// True iff `seq` executes from `s` and can be extended to a plan of optimal
/// length for `g`. False when g is unreachable within `bound`.
bool is_optimal_prefix(const GroundTask& task, const State& s, const Condition& g,
                       std::span<const ActionId> seq, std::size_t bound,
                       SearchLimits limits = {});
bool is_optimal_prefix(const GroundTask& task, const State& s, const Condition& g,
                       std::span<const ActionId> seq);

// Lower bound on the remaining cost to one fixed goal. Must be consistent
// (drops by at most 1 per action) and 0 in goal states.
// kUnreachableCost marks states from which the goal cannot be reached.
using Heuristic = std::function<std::uint32_t(const State&)>;
inline constexpr std::uint32_t kUnreachableCost = UINT32_MAX;

/// Same result as optimal_cost, found by A* with `h`. Plans longer than
/// `bound` are not considered.
PlanCost astar_cost(const GroundTask& task, const State& s, const Condition& g, const Heuristic& h,
                    std::size_t bound, SearchLimits limits = {});

bool is_optimal_prefix(const GroundTask& task, const State& s, const Condition& g,
                       std::span<const ActionId> seq, const Heuristic& h, std::size_t bound,
                       SearchLimits limits = {});

/// The subgraph of the breadth-first layers from `s` containing exactly the
/// states that lie on some optimal plan for `g`.
class OptimalPlanGraph {
 public:
  static OptimalPlanGraph build(const GroundTask& task, const State& s, const Condition& g,
                                std::size_t bound, SearchLimits limits = {});

  PlanCost cost() const { return cost_; }
  std::size_t explored_states() const;

  // Actions that keep an optimal plan going from `state`, which must have been
  // reached by `depth` optimal steps. Canonical order.
  std::vector<ActionId> next_actions(const State& state, std::size_t depth) const;

  const State& start() const { return start_; }

 private:
  struct Impl;
  OptimalPlanGraph(const GroundTask& task, State start);

  GroundTask task_;
  State start_;
  PlanCost cost_ = PlanCost::unreachable();
  std::shared_ptr<const Impl> impl_;
};

/// All optimal plans for `g` from `s` in canonical order, up to `cap`.
/// Throws UnreachableGoal if g is unreachable within `bound`.
PlanSet enumerate_optimal_plans(const GroundTask& task, const State& s, const Condition& g,
                                std::size_t cap, std::size_t bound, SearchLimits limits = {});
PlanSet enumerate_optimal_plans(const GroundTask& task, const State& s, const Condition& g,
                                std::size_t cap);

// Walks `n` optimal steps choosing uniformly among the optimal successors.
// Requires n <= graph.cost().
ActionSequence sample_optimal_prefix(const GroundTask& task, const OptimalPlanGraph& graph,
                                     std::size_t n, SeededRng& rng);

// Same distribution as above, with each step's optimal successors found by
// heuristic cost queries instead of a precomputed graph. `k` is the optimal
// cost from `s`; requires n <= k.
ActionSequence sample_optimal_prefix(const GroundTask& task, const State& s, const Condition& g,
                                     std::uint32_t k, std::size_t n, const Heuristic& h,
                                     SeededRng& rng, SearchLimits limits = {});

}  // namespace trac
