#include <doctest.h>

#include <set>

#include "trac/blocksworld.h"
#include "trac/error.h"
#include "trac/oracles.h"
#include "trac/taskgen.h"

using namespace trac;

namespace {

GenConfig config(TaskKind task, std::size_t m, std::size_t n, std::size_t count, std::uint64_t seed) {
  GenConfig c;
  c.name = "test";
  c.task = task;
  c.objects = m;
  c.length = n;
  c.count = count;
  c.seed = seed;
  return c;
}

void check_dataset(const Dataset& d) {
  const GenConfig& cfg = d.config;
  CHECK(d.instances.size() == cfg.count);
  std::size_t positives = 0;
  std::set<std::string> forms;
  for (std::size_t i = 0; i < d.instances.size(); ++i) {
    const ProblemInstance& p = d.instances[i];
    CAPTURE(i);
    CHECK(p.kind == cfg.task);
    CHECK(p.meta.index == i);
    CHECK(p.label == (i % 2 == 0));
    CHECK(compute_label(p) == p.label);
    CHECK(blocksworld::is_legal_state(p.world, p.state()));
    CHECK(p.actions.size() == cfg.length);
    CHECK(p.world.object_count() == cfg.objects);
    CHECK(p.id == instance_id(p));
    CHECK(p.condition.has_value() == (cfg.task != TaskKind::executability));
    positives += p.label;
    forms.insert(canonical_form(p));
  }
  CHECK(positives * 2 == cfg.count);
  CHECK(forms.size() == cfg.count);
}

}  // namespace

TEST_CASE("every task yields balanced, correctly labeled datasets") {
  for (TaskKind task : kAllTasks) {
    for (std::size_t n = 1; n <= 3; ++n) {
      CAPTURE(to_string(task));
      CAPTURE(n);
      check_dataset(gen_dataset(config(task, 5, n, 60, 40 + n)));
    }
  }
}

TEST_CASE("larger worlds and longer sequences") {
  for (TaskKind task : kAllTasks) {
    CAPTURE(to_string(task));
    check_dataset(gen_dataset(config(task, 10, 2, 40, 8)));
  }
  check_dataset(gen_dataset(config(TaskKind::projection, 5, 5, 40, 9)));
  check_dataset(gen_dataset(config(TaskKind::planning, 5, 5, 40, 9)));
}

TEST_CASE("output does not depend on the worker count") {
  GenConfig c = config(TaskKind::goal_recognition, 5, 2, 80, 123);
  Dataset one = gen_dataset(c, 1);
  Dataset four = gen_dataset(c, 4);
  REQUIRE(one.instances.size() == four.instances.size());
  for (std::size_t i = 0; i < one.instances.size(); ++i) {
    CHECK(canonical_form(one.instances[i]) == canonical_form(four.instances[i]));
    CHECK(one.instances[i].initial_state == four.instances[i].initial_state);
    CHECK(one.instances[i].world.universe() == four.instances[i].world.universe());
  }
  Dataset other = gen_dataset(config(TaskKind::goal_recognition, 5, 2, 80, 124), 1);
  CHECK(canonical_form(other.instances[0]) != canonical_form(one.instances[0]));
}

TEST_CASE("goal recognition positives come from goals at least N steps away") {
  Dataset d = gen_dataset(config(TaskKind::goal_recognition, 4, 2, 40, 5));
  for (const ProblemInstance& p : d.instances) {
    oracles::OptimalPlans plans(p.world, p.state(), *p.condition);
    REQUIRE(plans.cost().is_finite());
    CHECK(plans.has_prefix(p.actions) == p.label);
    if (p.label) CHECK(plans.cost().value() >= 2);
  }
}

TEST_CASE("planning goals are achievable within N") {
  Dataset d = gen_dataset(config(TaskKind::planning, 5, 2, 40, 6));
  for (const ProblemInstance& p : d.instances) {
    CHECK(achievable_within(p.world, p.state(), *p.condition, 2));
  }
}

TEST_CASE("executability negatives fail at varied positions") {
  Dataset d = gen_dataset(config(TaskKind::executability, 5, 3, 200, 7));
  std::set<std::size_t> failures;
  for (const ProblemInstance& p : d.instances) {
    ExecutionResult r = execute(p.world, p.state(), p.actions);
    CHECK(r.success == p.label);
    if (!r.success) failures.insert(r.failed_index);
  }
  CHECK(failures.size() >= 2);
}

TEST_CASE("condition shapes") {
  GenConfig lit = config(TaskKind::projection, 5, 2, 40, 10);
  lit.shape = ConditionShape::literals_only;
  for (const ProblemInstance& p : gen_dataset(lit).instances) CHECK_FALSE(p.condition->is_conjunction());
  GenConfig conj = config(TaskKind::goal_recognition, 5, 2, 40, 10);
  conj.shape = ConditionShape::conjunctions_only;
  for (const ProblemInstance& p : gen_dataset(conj).instances) CHECK(p.condition->is_conjunction());
  CHECK(parse_condition_shape("literals") == ConditionShape::literals_only);
  for (auto s : {ConditionShape::literals_only, ConditionShape::conjunctions_only, ConditionShape::mixed}) {
    CHECK(parse_condition_shape(to_string(s)) == s);
  }
  CHECK_THROWS_AS(parse_condition_shape("triples"), Error);
}

TEST_CASE("unseen pool swaps names only") {
  GenConfig a = config(TaskKind::projection, 5, 2, 20, 77);
  GenConfig b = a;
  b.pool = blocksworld::PoolKind::unseen;
  Dataset da = gen_dataset(a);
  Dataset db = gen_dataset(b);
  for (std::size_t i = 0; i < da.instances.size(); ++i) {
    const ProblemInstance& p = da.instances[i];
    const ProblemInstance& q = db.instances[i];
    CHECK(p.initial_state == q.initial_state);
    CHECK(p.actions == q.actions);
    CHECK(p.condition == q.condition);
    CHECK(p.label == q.label);
    for (std::uint32_t o = 0; o < 5; ++o) {
      CHECK(blocksworld::swap_pool_name(p.world.universe().name(ObjectId{o})) == q.world.universe().name(ObjectId{o}));
    }
  }
}

TEST_CASE("single-instance entry points honor the target label") {
  GenConfig c = config(TaskKind::projection, 5, 2, 2, 1);
  SeededRng rng(8);
  for (int i = 0; i < 20; ++i) {
    CHECK(gen_projection(c, rng, true).label);
    CHECK_FALSE(gen_executability(c, rng, false).label);
    CHECK(gen_planning(c, rng, true).label);
    CHECK_FALSE(gen_goal_recognition(c, rng, false).label);
  }
  ProblemInstance free = gen_goal_recognition(c, rng);
  CHECK(compute_label(free) == free.label);
}

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS(config(TaskKind::projection, 5, 1, 15, 0).validate(), Error);
  CHECK_THROWS_AS(config(TaskKind::projection, 5, 0, 10, 0).validate(), Error);
  CHECK_THROWS_AS(config(TaskKind::projection, 1, 1, 10, 0).validate(), Error);
  CHECK_THROWS_AS(config(TaskKind::projection, 21, 1, 10, 0).validate(), Error);
  CHECK_NOTHROW(config(TaskKind::projection, 20, 1, 10, 0).validate());
}

TEST_CASE("exhausted sampling budgets are reported") {
  GenLimits limits;
  limits.full_attempts = 0;
  CHECK_THROWS_AS(gen_dataset(config(TaskKind::executability, 3, 1, 4, 1), 1, limits), YieldFailure);
}

TEST_CASE("suite manifest") {
  std::vector<GenConfig> suite = ge_suite(2024);
  REQUIRE(suite.size() == 32);
  std::set<std::string> names;
  std::set<std::uint64_t> seeds;
  for (const GenConfig& c : suite) {
    names.insert(c.name);
    seeds.insert(c.seed);
  }
  CHECK(names.size() == 32);
  CHECK(seeds.size() == 32);
  CHECK(ge_suite(2024)[5].seed == suite[5].seed);
  CHECK(ge_suite(2025)[5].seed != suite[5].seed);
  SuiteOptions opts;
  opts.include_ge2_goal_recognition = true;
  CHECK(ge_suite(2024, opts).size() == 34);
}
