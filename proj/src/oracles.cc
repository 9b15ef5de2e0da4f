#include "trac/oracles.h"

#include <algorithm>

namespace trac::oracles {

namespace {

std::vector<ActionId> successors(const GroundTask& task, const State& s) {
  std::vector<ActionId> out;
  for (std::uint32_t i = 0; i < task.actions().size(); ++i) {
    if (applicable(s, task.actions()[i])) out.push_back(ActionId{i});
  }
  return out;
}

}  // namespace

PlanCost oracle_optimal_cost(const GroundTask& task, const State& s, const Condition& g,
                             OracleBudget budget) {
  std::size_t nodes = 0;
  auto dfs = [&](auto&& self, const State& cur, std::size_t remaining) -> bool {
    if (++nodes > budget.max_nodes) throw BudgetExceeded("oracle search exceeded its node budget");
    if (remaining == 0) return eval_condition(cur, g);
    for (ActionId a : successors(task, cur)) {
      if (self(self, apply(cur, task.action(a)), remaining - 1)) return true;
    }
    return false;
  };
  for (std::size_t limit = 0; limit <= budget.max_depth; ++limit) {
    if (dfs(dfs, s, limit)) return PlanCost::finite(static_cast<std::uint32_t>(limit));
  }
  return PlanCost::unreachable();
}

OptimalPlans::OptimalPlans(const GroundTask& task, const State& s, const Condition& g,
                           OracleBudget budget)
    : cost_(oracle_optimal_cost(task, s, g, budget)) {
  if (!cost_.is_finite()) return;
  std::size_t nodes = 0;
  ActionSequence seq;
  auto dfs = [&](auto&& self, const State& cur) -> void {
    if (++nodes > budget.max_nodes) throw BudgetExceeded("oracle enumeration exceeded its node budget");
    if (seq.size() == cost_.value()) {
      if (eval_condition(cur, g)) plans_.push_back(seq);
      return;
    }
    for (ActionId a : successors(task, cur)) {
      seq.push_back(a);
      self(self, apply(cur, task.action(a)));
      seq.pop_back();
    }
  };
  dfs(dfs, s);
}

bool OptimalPlans::has_prefix(std::span<const ActionId> seq) const {
  return std::any_of(plans_.begin(), plans_.end(), [&](const ActionSequence& p) {
    return seq.size() <= p.size() && std::equal(seq.begin(), seq.end(), p.begin());
  });
}

bool oracle_prefix_check(const GroundTask& task, const State& s, const Condition& g,
                         std::span<const ActionId> seq, OracleBudget budget) {
  return OptimalPlans(task, s, g, budget).has_prefix(seq);
}

void for_each_configuration(std::size_t m,
                            const std::function<void(const blocksworld::BlockConfiguration&)>& fn) {
  blocksworld::BlockConfiguration current;
  auto rec = [&](auto&& self, std::vector<ObjectId> remaining) -> void {
    if (remaining.empty()) {
      blocksworld::BlockConfiguration c = current;
      c.normalize();
      fn(c);
      return;
    }
    ObjectId first = remaining.front();
    std::vector<ObjectId> others(remaining.begin() + 1, remaining.end());
    const std::size_t k = others.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
      std::vector<ObjectId> tower{first};
      std::vector<ObjectId> rest;
      for (std::size_t i = 0; i < k; ++i) {
        ((mask >> i) & 1U ? tower : rest).push_back(others[i]);
      }
      std::sort(tower.begin(), tower.end());
      do {
        current.towers.push_back(tower);
        self(self, rest);
        current.towers.pop_back();
      } while (std::next_permutation(tower.begin(), tower.end()));
    }
  };
  std::vector<ObjectId> all;
  for (std::uint32_t i = 0; i < m; ++i) all.push_back(ObjectId{i});
  rec(rec, all);
}

std::vector<blocksworld::BlockConfiguration> oracle_enumerate_configurations(std::size_t m) {
  std::vector<blocksworld::BlockConfiguration> out;
  for_each_configuration(m, [&](const blocksworld::BlockConfiguration& c) { out.push_back(c); });
  return out;
}

std::uint64_t oracle_count_configurations(std::size_t m) {
  if (m > 8) throw Error("oracle configuration count is limited to 8 blocks");
  std::uint64_t n = 0;
  for_each_configuration(m, [&](const blocksworld::BlockConfiguration&) { ++n; });
  return n;
}

std::vector<State> oracle_legal_states(const GroundTask& task) {
  // Atoms with a repeated argument (on(x, x)) are illegal in any state.
  const std::vector<AtomId>& pool = task.distinct_atoms();
  const std::size_t atoms = pool.size();
  if (atoms > 24) throw Error("too many atoms for subset enumeration");
  std::vector<State> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << atoms); ++mask) {
    State s = task.empty_state();
    for (std::size_t i = 0; i < atoms; ++i) {
      if ((mask >> i) & 1U) s.insert(pool[i]);
    }
    if (blocksworld::is_legal_state(task, s)) out.push_back(std::move(s));
  }
  return out;
}

std::uint64_t oracle_count_legal_states(const GroundTask& task) { return oracle_legal_states(task).size(); }

}  // namespace trac::oracles
