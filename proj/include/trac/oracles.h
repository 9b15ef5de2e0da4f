#pragma once

// Brute-force reference implementations. They only use the strips-engine
// primitives (applicable/apply/eval) and never the planner, so a bug in the
// planner cannot hide in both.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "trac/blocksworld.h"
#include "trac/planner.h"
#include "trac/strips.h"

namespace trac::oracles {

struct OracleBudget {
  std::size_t max_nodes = 50'000'000;
  std::size_t max_depth = 12;
};

// Iterative deepening without duplicate detection. Unreachable if nothing
// within max_depth; BudgetExceeded past max_nodes.
PlanCost oracle_optimal_cost(const GroundTask& task, const State& s, const Condition& g,
                             OracleBudget budget = {});

// Every optimal plan, found by exhaustive depth-first enumeration of all
// applicable sequences of the optimal length.
class OptimalPlans {
 public:
  OptimalPlans(const GroundTask& task, const State& s, const Condition& g, OracleBudget budget = {});

  PlanCost cost() const { return cost_; }
  const std::vector<ActionSequence>& plans() const { return plans_; }
  // Literal prefix test against the enumerated plans.
  bool has_prefix(std::span<const ActionId> seq) const;

 private:
  PlanCost cost_ = PlanCost::unreachable();
  std::vector<ActionSequence> plans_;
};

bool oracle_prefix_check(const GroundTask& task, const State& s, const Condition& g,
                         std::span<const ActionId> seq, OracleBudget budget = {});

// Builds every configuration of m labeled blocks by recursion: the tower of
// the smallest unplaced block takes any subset of the others, in any order.
void for_each_configuration(std::size_t m,
                            const std::function<void(const blocksworld::BlockConfiguration&)>& fn);
std::vector<blocksworld::BlockConfiguration> oracle_enumerate_configurations(std::size_t m);
// m <= 8.
std::uint64_t oracle_count_configurations(std::size_t m);

// Counts atom subsets of a blocks-world task that satisfy the physical
// invariants. 2^atoms work; use for m <= 4.
std::uint64_t oracle_count_legal_states(const GroundTask& task);
std::vector<State> oracle_legal_states(const GroundTask& task);

}  // namespace trac::oracles
