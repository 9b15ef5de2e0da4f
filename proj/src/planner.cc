#include "trac/planner.h"

#include <algorithm>

#include "state_store.h"

namespace trac {

using detail::StateStore;

std::size_t default_bound(const GroundTask& task) { return 2 * task.object_count() + 2; }

namespace {

void check_budget(const StateStore& store, const SearchLimits& limits) {
  if (store.size() > limits.max_states) {
    throw BudgetExceeded("search exceeded " + std::to_string(limits.max_states) + " states");
  }
}

}  // namespace

PlanCost optimal_cost(const GroundTask& task, const State& s, const Condition& g,
                      std::size_t bound, SearchLimits limits) {
  if (eval_condition(s, g)) return PlanCost::finite(0);
  StateStore store(s.words().size());
  store.insert(s.words());
  State current = task.empty_state();
  std::vector<ActionId> ops;
  std::size_t layer_begin = 0;
  for (std::size_t depth = 0; depth < bound; ++depth) {
    std::size_t layer_end = store.size();
    if (layer_begin == layer_end) break;
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      store.load(static_cast<std::uint32_t>(i), current);
      task.applicable_actions(current, ops);
      for (ActionId a : ops) {
        State next = apply_unchecked(current, task.action(a));
        if (!store.insert(next.words()).second) continue;
        if (eval_condition(next, g)) return PlanCost::finite(static_cast<std::uint32_t>(depth + 1));
      }
      check_budget(store, limits);
    }
    layer_begin = layer_end;
  }
  return PlanCost::unreachable();
}

bool achievable_within(const GroundTask& task, const State& s, const Condition& g, std::size_t n,
                       SearchLimits limits) {
  return optimal_cost(task, s, g, n, limits).is_finite();
}

bool is_goal_achieving(const GroundTask& task, const State& s, const Condition& g,
                       std::span<const ActionId> seq) {
  ExecutionResult r = execute(task, s, seq);
  return r.success && eval_condition(r.state, g);
}

bool is_optimal_prefix(const GroundTask& task, const State& s, const Condition& g,
                       std::span<const ActionId> seq, std::size_t bound, SearchLimits limits) {
  ExecutionResult r = execute(task, s, seq);
  if (!r.success) return false;
  PlanCost k = optimal_cost(task, s, g, bound, limits);
  if (!k.is_finite() || seq.size() > k.value()) return false;
  std::size_t remaining = k.value() - seq.size();
  // Any plan from r.state has length >= remaining, otherwise k was not optimal.
  return optimal_cost(task, r.state, g, remaining, limits).is_finite();
}

bool is_optimal_prefix(const GroundTask& task, const State& s, const Condition& g,
                       std::span<const ActionId> seq) {
  return is_optimal_prefix(task, s, g, seq, default_bound(task));
}

PlanCost astar_cost(const GroundTask& task, const State& s, const Condition& g, const Heuristic& h,
                    std::size_t bound, SearchLimits limits) {
  std::uint32_t h0 = h(s);
  if (h0 > bound) return PlanCost::unreachable();
  StateStore store(s.words().size());
  std::vector<std::uint32_t> cost;  // best known g per stored state
  std::vector<std::uint8_t> closed;
  // Bucket queue on f = g + h; LIFO inside a bucket favours deeper nodes.
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> open(bound + 1);
  store.insert(s.words());
  cost.push_back(0);
  closed.push_back(0);
  open[h0].push_back({0, 0});

  State current = task.empty_state();
  std::vector<ActionId> ops;
  for (std::size_t f = h0; f <= bound; ++f) {
    auto& bucket = open[f];
    while (!bucket.empty()) {
      auto [idx, gval] = bucket.back();
      bucket.pop_back();
      if (closed[idx] || gval != cost[idx]) continue;
      closed[idx] = 1;
      store.load(idx, current);
      if (eval_condition(current, g)) return PlanCost::finite(gval);
      task.applicable_actions(current, ops);
      for (ActionId a : ops) {
        State next = apply_unchecked(current, task.action(a));
        std::uint32_t ng = gval + 1;
        auto [j, fresh] = store.insert(next.words());
        if (fresh) {
          cost.push_back(ng);
          closed.push_back(0);
        } else if (closed[j] || cost[j] <= ng) {
          continue;
        } else {
          cost[j] = ng;
        }
        std::size_t nf = std::size_t{ng} + h(next);
        if (nf <= bound) open[std::max(nf, f)].push_back({j, ng});
      }
      check_budget(store, limits);
    }
  }
  return PlanCost::unreachable();
}

bool is_optimal_prefix(const GroundTask& task, const State& s, const Condition& g,
                       std::span<const ActionId> seq, const Heuristic& h, std::size_t bound,
                       SearchLimits limits) {
  ExecutionResult r = execute(task, s, seq);
  if (!r.success) return false;
  PlanCost k = astar_cost(task, s, g, h, bound, limits);
  if (!k.is_finite() || seq.size() > k.value()) return false;
  return astar_cost(task, r.state, g, h, k.value() - seq.size(), limits).is_finite();
}

// ---------------------------------------------------------------------------

struct OptimalPlanGraph::Impl {
  explicit Impl(std::size_t words) : store(words) {}
  StateStore store;
  std::vector<std::uint32_t> layer;
  std::vector<std::uint8_t> on_plan;
};

OptimalPlanGraph::OptimalPlanGraph(const GroundTask& task, State start)
    : task_(task), start_(std::move(start)) {}

std::size_t OptimalPlanGraph::explored_states() const { return impl_ ? impl_->store.size() : 0; }

OptimalPlanGraph OptimalPlanGraph::build(const GroundTask& task, const State& s, const Condition& g,
                                         std::size_t bound, SearchLimits limits) {
  OptimalPlanGraph graph(task, s);
  auto impl = std::make_shared<Impl>(s.words().size());
  StateStore& store = impl->store;
  store.insert(s.words());
  impl->layer.push_back(0);
  impl->on_plan.push_back(eval_condition(s, g) ? 1 : 0);

  State current = task.empty_state();
  std::vector<ActionId> ops;
  std::vector<std::size_t> layer_start{0};
  std::optional<std::size_t> goal_depth;
  if (impl->on_plan[0]) goal_depth = 0;

  for (std::size_t depth = 0; !goal_depth && depth < bound; ++depth) {
    std::size_t begin = layer_start.back();
    std::size_t end = store.size();
    if (begin == end) break;
    layer_start.push_back(end);
    // Expand the whole layer even after a goal appears, so every goal state
    // at the optimal depth is found.
    for (std::size_t i = begin; i < end; ++i) {
      store.load(static_cast<std::uint32_t>(i), current);
      task.applicable_actions(current, ops);
      for (ActionId a : ops) {
        State next = apply_unchecked(current, task.action(a));
        if (!store.insert(next.words()).second) continue;
        bool hit = eval_condition(next, g);
        impl->layer.push_back(static_cast<std::uint32_t>(depth + 1));
        impl->on_plan.push_back(hit ? 1 : 0);
        if (hit) goal_depth = depth + 1;
      }
      check_budget(store, limits);
    }
  }

  if (goal_depth) {
    graph.cost_ = PlanCost::finite(static_cast<std::uint32_t>(*goal_depth));
    // Backward sweep: a state at layer d < k is on a plan iff one of its
    // successors at layer d + 1 is.
    for (std::size_t d = *goal_depth; d-- > 0;) {
      for (std::size_t i = layer_start[d]; i < layer_start[d + 1]; ++i) {
        store.load(static_cast<std::uint32_t>(i), current);
        task.applicable_actions(current, ops);
        for (ActionId a : ops) {
          State next = apply_unchecked(current, task.action(a));
          auto j = store.find(next.words());
          if (j && impl->layer[*j] == d + 1 && impl->on_plan[*j]) {
            impl->on_plan[i] = 1;
            break;
          }
        }
      }
    }
    // Goal states found in earlier layers cannot exist (search stops at the
    // first goal layer); states past layer k were never generated.
  }
  graph.impl_ = std::move(impl);
  return graph;
}

std::vector<ActionId> OptimalPlanGraph::next_actions(const State& state, std::size_t depth) const {
  std::vector<ActionId> out;
  if (!cost_.is_finite() || depth >= cost_.value()) return out;
  auto here = impl_->store.find(state.words());
  if (!here || impl_->layer[*here] != depth || !impl_->on_plan[*here]) return out;
  for (ActionId a : task_.applicable_actions(state)) {
    State next = apply_unchecked(state, task_.action(a));
    auto j = impl_->store.find(next.words());
    if (j && impl_->layer[*j] == depth + 1 && impl_->on_plan[*j]) out.push_back(a);
  }
  return out;
}

PlanSet enumerate_optimal_plans(const GroundTask& task, const State& s, const Condition& g,
                                std::size_t cap, std::size_t bound, SearchLimits limits) {
  OptimalPlanGraph graph = OptimalPlanGraph::build(task, s, g, bound, limits);
  if (!graph.cost().is_finite()) throw UnreachableGoal("goal is unreachable within bound");
  PlanSet result;
  ActionSequence prefix;
  auto rec = [&](auto&& self, const State& state) -> void {
    if (!result.complete) return;
    if (prefix.size() == graph.cost().value()) {
      if (result.plans.size() >= cap) {
        result.complete = false;
        return;
      }
      result.plans.push_back(prefix);
      return;
    }
    for (ActionId a : graph.next_actions(state, prefix.size())) {
      prefix.push_back(a);
      self(self, apply_unchecked(state, task.action(a)));
      prefix.pop_back();
    }
  };
  rec(rec, s);
  return result;
}

PlanSet enumerate_optimal_plans(const GroundTask& task, const State& s, const Condition& g,
                                std::size_t cap) {
  return enumerate_optimal_plans(task, s, g, cap, default_bound(task));
}

ActionSequence sample_optimal_prefix(const GroundTask& task, const OptimalPlanGraph& graph,
                                     std::size_t n, SeededRng& rng) {
  if (!graph.cost().is_finite() || n > graph.cost().value()) {
    throw PreconditionError("prefix longer than the optimal plan");
  }
  ActionSequence seq;
  State state = graph.start();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<ActionId> options = graph.next_actions(state, i);
    if (options.empty()) throw Error("optimal plan graph is inconsistent");
    ActionId a = rng.pick(std::span<const ActionId>(options));
    seq.push_back(a);
    state = apply_unchecked(state, task.action(a));
  }
  return seq;
}

ActionSequence sample_optimal_prefix(const GroundTask& task, const State& s, const Condition& g,
                                     std::uint32_t k, std::size_t n, const Heuristic& h,
                                     SeededRng& rng, SearchLimits limits) {
  if (n > k) throw PreconditionError("prefix longer than the optimal plan");
  ActionSequence seq;
  State state = s;
  std::vector<ActionId> options;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t remaining = k - i - 1;
    options.clear();
    for (ActionId a : task.applicable_actions(state)) {
      State next = apply_unchecked(state, task.action(a));
      if (astar_cost(task, next, g, h, remaining, limits).is_finite()) options.push_back(a);
    }
    if (options.empty()) throw Error("no optimal successor; k is not the optimal cost");
    ActionId a = rng.pick(std::span<const ActionId>(options));
    seq.push_back(a);
    state = apply_unchecked(state, task.action(a));
  }
  return seq;
}

}  // namespace trac
