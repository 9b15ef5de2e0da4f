#include <doctest.h>

#include <map>
#include <set>

#include "trac/blocksworld.h"
#include "trac/error.h"
#include "trac/oracles.h"
#include "trac/planner.h"

using namespace trac;

namespace {

std::vector<Condition> all_goals(const GroundTask& t, bool conjunctions) {
  std::vector<Condition> out;
  const auto& pool = t.distinct_atoms();
  for (AtomId a : pool) {
    out.push_back(Condition::literal({a, true}));
    out.push_back(Condition::literal({a, false}));
  }
  if (conjunctions) {
    for (std::size_t i = 0; i < pool.size(); ++i) {
      for (std::size_t j = i + 1; j < pool.size(); ++j) {
        for (int signs = 0; signs < 4; ++signs) {
          out.push_back(Condition::conjunction({pool[i], (signs & 1) != 0}, {pool[j], (signs & 2) != 0}));
        }
      }
    }
  }
  return out;
}

std::vector<ActionSequence> sequences_up_to(const GroundTask& t, std::size_t len) {
  std::vector<ActionSequence> out{{}};
  std::size_t begin = 0;
  for (std::size_t l = 1; l <= len; ++l) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (std::uint32_t a = 0; a < t.actions().size(); ++a) {
        ActionSequence s = out[i];
        s.push_back(ActionId{a});
        out.push_back(std::move(s));
      }
    }
    begin = end;
  }
  return out;
}

State tower(const GroundTask& t, std::initializer_list<std::uint32_t> bottom_to_top) {
  blocksworld::BlockConfiguration c;
  std::vector<ObjectId> tw;
  for (auto b : bottom_to_top) tw.push_back(ObjectId{b});
  c.towers.push_back(tw);
  for (std::uint32_t b = 0; b < t.object_count(); ++b) {
    if (std::find(tw.begin(), tw.end(), ObjectId{b}) == tw.end()) c.towers.push_back({ObjectId{b}});
  }
  return blocksworld::configuration_to_state(t, c);
}

}  // namespace

TEST_CASE("optimal cost agrees with iterative deepening on every M=3 pair") {
  GroundTask t = blocksworld::make_task(3);
  std::vector<State> states = oracles::oracle_legal_states(t);
  REQUIRE(states.size() == 13);
  const std::size_t bound = default_bound(t);
  oracles::OracleBudget budget{50'000'000, bound};
  std::size_t unreachable = 0;
  for (const State& s : states) {
    for (const Condition& g : all_goals(t, true)) {
      PlanCost expected = oracles::oracle_optimal_cost(t, s, g, budget);
      PlanCost bfs = optimal_cost(t, s, g, bound);
      CHECK(bfs == expected);
      CHECK(astar_cost(t, s, g, blocksworld::goal_heuristic(t, g), bound) == expected);
      if (!expected.is_finite()) ++unreachable;
      CHECK(blocksworld::satisfiable(t, g) == expected.is_finite());
    }
  }
  CHECK(unreachable > 0);
}

TEST_CASE("A* matches breadth-first search and the heuristic is consistent at M=4") {
  GroundTask t = blocksworld::make_task(4);
  std::vector<State> states = oracles::oracle_legal_states(t);
  REQUIRE(states.size() == 73);
  const std::size_t bound = default_bound(t);
  for (const Condition& g : all_goals(t, true)) {
    Heuristic h = blocksworld::goal_heuristic(t, g);
    bool sat = blocksworld::satisfiable(t, g);
    for (const State& s : states) {
      PlanCost bfs = optimal_cost(t, s, g, bound);
      REQUIRE(bfs.is_finite() == sat);
      CHECK(astar_cost(t, s, g, h, bound) == bfs);
      if (!sat) continue;
      std::uint32_t hs = h(s);
      CHECK(hs <= bfs.value());
      if (eval_condition(s, g)) CHECK(hs == 0);
      for (ActionId a : t.applicable_actions(s)) {
        CHECK(hs <= 1 + h(apply(s, t.action(a))));
      }
    }
  }
}

TEST_CASE("satisfiability agrees with exhaustive search over legal states") {
  for (std::size_t m = 2; m <= 4; ++m) {
    GroundTask t = blocksworld::make_task(m);
    std::vector<State> states = oracles::oracle_legal_states(t);
    for (const Condition& g : all_goals(t, true)) {
      bool any = std::any_of(states.begin(), states.end(), [&](const State& s) { return eval_condition(s, g); });
      CHECK(blocksworld::satisfiable(t, g) == any);
    }
  }
}

TEST_CASE("optimal prefix agrees with plan enumeration on every M=4 case up to length 2") {
  GroundTask t = blocksworld::make_task(4);
  std::vector<State> states = oracles::oracle_legal_states(t);
  std::vector<ActionSequence> seqs = sequences_up_to(t, 2);
  REQUIRE(seqs.size() == 1 + 48 + 48 * 48);
  const std::size_t bound = default_bound(t);
  std::size_t positives = 0;
  std::size_t mismatches = 0;
  for (const State& s : states) {
    for (const Condition& g : all_goals(t, false)) {
      oracles::OptimalPlans plans(t, s, g);
      Heuristic h = blocksworld::goal_heuristic(t, g);
      OptimalPlanGraph graph = OptimalPlanGraph::build(t, s, g, bound);
      REQUIRE(graph.cost() == plans.cost());
      for (const ActionSequence& seq : seqs) {
        if (!execute(t, s, seq).success) {
          if (plans.has_prefix(seq)) ++mismatches;
          continue;
        }
        bool expected = plans.has_prefix(seq);
        positives += expected;
        mismatches += is_optimal_prefix(t, s, g, seq, bound) != expected;
        mismatches += is_optimal_prefix(t, s, g, seq, h, bound) != expected;
      }
    }
  }
  CHECK(mismatches == 0);
  CHECK(positives > 0);
}

TEST_CASE("plan enumeration matches the oracle") {
  GroundTask t = blocksworld::make_task(4);
  std::vector<State> states = oracles::oracle_legal_states(t);
  for (std::size_t i = 0; i < states.size(); i += 7) {
    for (const Condition& g : all_goals(t, false)) {
      oracles::OptimalPlans expected(t, states[i], g);
      PlanSet got = enumerate_optimal_plans(t, states[i], g, 100000);
      CHECK(got.complete);
      CHECK(got.plans == expected.plans());
      for (const ActionSequence& p : got.plans) {
        CHECK(is_goal_achieving(t, states[i], g, p));
      }
    }
  }
}

TEST_CASE("goal achievement uses the final state") {
  GroundTask t = blocksworld::make_task(std::vector<std::string>{"A", "B", "C"});
  State s = tower(t, {0});
  Condition g = t.parse_condition("on(A, B)");
  ActionSequence there_and_back = {t.parse_action("moveFromTable(A, B)"), t.parse_action("moveToTable(A, B)")};
  CHECK_FALSE(is_goal_achieving(t, s, g, there_and_back));
  CHECK(is_goal_achieving(t, s, g, {there_and_back.data(), 1}));
  CHECK(is_goal_achieving(t, s, t.parse_condition("clear(A)"), there_and_back));
  CHECK_FALSE(is_goal_achieving(t, s, g, ActionSequence{t.parse_action("moveToTable(A, B)")}));
}

TEST_CASE("costs on a tall tower") {
  GroundTask t = blocksworld::make_task(5);
  State s = tower(t, {0, 1, 2, 3, 4});
  CHECK(optimal_cost(t, s, Condition::literal({t.parse_atom("clear(B0)"), true}), 12).value() == 4);
  CHECK(optimal_cost(t, s, Condition::literal({t.parse_atom("on(B0, B4)"), true}), 12).value() == 5);
  CHECK(optimal_cost(t, s, Condition::literal({t.parse_atom("clear(B4)"), true}), 12).value() == 0);
  CHECK(achievable_within(t, s, Condition::literal({t.parse_atom("onTable(B1)"), true}), 4));
  CHECK_FALSE(achievable_within(t, s, Condition::literal({t.parse_atom("onTable(B1)"), true}), 3));
  CHECK_THROWS_AS(optimal_cost(t, s, Condition::literal({t.parse_atom("on(B0, B4)"), true}), 12, {10}),
                  BudgetExceeded);
}

TEST_CASE("cost zero goals have only the empty optimal prefix") {
  GroundTask t = blocksworld::make_task(3);
  State s = tower(t, {0, 1});
  Condition g = Condition::literal({t.parse_atom("on(B1, B0)"), true});
  CHECK(optimal_cost(t, s, g, 8).value() == 0);
  CHECK(is_optimal_prefix(t, s, g, ActionSequence{}));
  CHECK_FALSE(is_optimal_prefix(t, s, g, ActionSequence{t.parse_action("moveToTable(B1, B0)")}));
  PlanSet plans = enumerate_optimal_plans(t, s, g, 10);
  REQUIRE(plans.plans.size() == 1);
  CHECK(plans.plans[0].empty());
}

TEST_CASE("unreachable goals") {
  GroundTask t = blocksworld::make_task(3);
  State s = tower(t, {0});
  Condition g = Condition::conjunction({t.parse_atom("on(B0, B1)"), true}, {t.parse_atom("on(B2, B1)"), true});
  CHECK_FALSE(optimal_cost(t, s, g, 8).is_finite());
  CHECK_THROWS_AS(enumerate_optimal_plans(t, s, g, 10), UnreachableGoal);
  CHECK_FALSE(is_optimal_prefix(t, s, g, ActionSequence{}));
  Condition contradiction = Condition::unchecked_conjunction({t.parse_atom("clear(B0)"), true},
                                                             {t.parse_atom("clear(B0)"), false});
  CHECK_FALSE(oracles::oracle_optimal_cost(t, s, contradiction, {1'000'000, 6}).is_finite());
  CHECK_FALSE(optimal_cost(t, s, contradiction, 8).is_finite());
}

TEST_CASE("both prefix samplers draw uniformly from the same successors") {
  GroundTask t = blocksworld::make_task(4);
  State s = tower(t, {0, 1});
  Condition g = Condition::literal({t.parse_atom("on(B0, B1)"), true});
  OptimalPlanGraph graph = OptimalPlanGraph::build(t, s, g, default_bound(t));
  REQUIRE(graph.cost().is_finite());
  const std::uint32_t k = graph.cost().value();
  REQUIRE(k == 2);
  Heuristic h = blocksworld::goal_heuristic(t, g);
  oracles::OptimalPlans plans(t, s, g);
  std::map<ActionSequence, int> from_graph, from_search;
  SeededRng r1(1), r2(2);
  for (int i = 0; i < 3000; ++i) {
    ActionSequence a = sample_optimal_prefix(t, graph, 2, r1);
    ActionSequence b = sample_optimal_prefix(t, s, g, k, 2, h, r2);
    CHECK(plans.has_prefix(a));
    CHECK(plans.has_prefix(b));
    ++from_graph[a];
    ++from_search[b];
  }
  CHECK(from_graph.size() == plans.plans().size());
  CHECK(from_graph.size() == from_search.size());
  for (const auto& [seq, n] : from_graph) CHECK(from_search.count(seq) == 1);
  CHECK_THROWS_AS(sample_optimal_prefix(t, graph, k + 1, r1), PreconditionError);
}
