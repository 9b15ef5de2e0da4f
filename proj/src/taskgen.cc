#include "trac/taskgen.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_set>

namespace trac {

using blocksworld::PoolKind;

std::string_view to_string(ConditionShape shape) {
  switch (shape) {
    case ConditionShape::literals_only: return "literals_only";
    case ConditionShape::conjunctions_only: return "conjunctions_only";
    case ConditionShape::mixed: return "mixed";
  }
  return "?";
}

ConditionShape parse_condition_shape(std::string_view text) {
  if (text == "literals" || text == "literals_only") return ConditionShape::literals_only;
  if (text == "conjunctions" || text == "conjunctions_only") return ConditionShape::conjunctions_only;
  if (text == "mixed") return ConditionShape::mixed;
  throw Error("unknown condition shape '" + std::string(text) + "'");
}

void GenConfig::validate() const {
  if (count % 2 != 0) throw Error("dataset count must be even for exact label balance");
  if (length < 1) throw Error("sequence length must be at least 1");
  if (objects < 2) throw Error("at least two objects are required");
  std::size_t pool_size = blocksworld::NamePool::builtin().get(pool).size();
  if (objects > pool_size) {
    throw Error("name pool exhausted: " + std::to_string(objects) + " objects, " +
                std::to_string(pool_size) + " names");
  }
}

void GenCounters::merge(const GenCounters& o) {
  condition_redraws += o.condition_redraws;
  goal_rejections += o.goal_rejections;
  budget_skips += o.budget_skips;
  sequence_redraws += o.sequence_redraws;
  planner_fallbacks += o.planner_fallbacks;
  full_resamples += o.full_resamples;
  duplicate_rejections += o.duplicate_rejections;
}

struct Generator::Draft {
  GroundTask world;
  State state;
  ActionSequence actions;
  std::optional<Condition> condition;
  bool label = false;
};

Generator::Generator(GenConfig cfg, GenLimits limits)
    : cfg_(std::move(cfg)), limits_(limits), base_(blocksworld::make_task(cfg_.objects)) {
  cfg_.validate();
}

Condition Generator::sample_condition(const GroundTask& w, SeededRng& rng) const {
  std::span<const AtomId> atoms(w.distinct_atoms());
  auto literal = [&] { return Literal{rng.pick(atoms), rng.coin()}; };
  bool conj = cfg_.shape == ConditionShape::conjunctions_only ||
              (cfg_.shape == ConditionShape::mixed && rng.coin());
  Literal first = literal();
  if (!conj) return Condition::literal(first);
  Literal second = literal();
  while (second.atom == first.atom) second = literal();
  return Condition::conjunction(first, second);
}

std::optional<ActionSequence> Generator::random_walk(const GroundTask& w, const State& s,
                                                     SeededRng& rng) const {
  ActionSequence seq;
  State cur = s;
  std::vector<ActionId> ops;
  for (std::size_t i = 0; i < cfg_.length; ++i) {
    w.applicable_actions(cur, ops);
    if (ops.empty()) return std::nullopt;
    ActionId a = rng.pick(std::span<const ActionId>(ops));
    seq.push_back(a);
    cur = apply_unchecked(cur, w.action(a));
  }
  return seq;
}

// Depth-first over applicable sequences of exactly N actions, children in
// random order; first sequence whose final state satisfies g.
std::optional<ActionSequence> Generator::search_plan(const GroundTask& w, const State& s,
                                                     const Condition& g, SeededRng& rng) const {
  ActionSequence seq;
  std::size_t nodes = 0;
  auto rec = [&](auto&& self, const State& cur) -> bool {
    if (seq.size() == cfg_.length) return eval_condition(cur, g);
    if (++nodes > limits_.fallback_nodes) return false;
    std::vector<ActionId> ops = w.applicable_actions(cur);
    rng.shuffle(std::span<ActionId>(ops));
    for (ActionId a : ops) {
      seq.push_back(a);
      if (self(self, apply_unchecked(cur, w.action(a)))) return true;
      seq.pop_back();
      if (nodes > limits_.fallback_nodes) return false;
    }
    return false;
  };
  if (rec(rec, s)) return seq;
  return std::nullopt;
}

bool Generator::projection(Draft& d, SeededRng& rng, std::optional<bool> target, GenCounters& c) const {
  auto seq = random_walk(d.world, d.state, rng);
  if (!seq) return false;
  State final_state = execute(d.world, d.state, *seq).state;
  for (std::size_t r = 0; r < limits_.condition_redraws; ++r) {
    Condition cond = sample_condition(d.world, rng);
    bool label = eval_condition(final_state, cond);
    if (target && label != *target) {
      ++c.condition_redraws;
      continue;
    }
    d.actions = std::move(*seq);
    d.condition = cond;
    d.label = label;
    return true;
  }
  return false;
}

bool Generator::executability(Draft& d, SeededRng& rng, std::optional<bool> target, GenCounters& c) const {
  if (target ? *target : rng.coin()) {
    // Positive process: an applicable action at every step.
    auto seq = random_walk(d.world, d.state, rng);
    if (!seq) return false;
    d.actions = std::move(*seq);
    d.label = true;
    return true;
  }
  std::span<const GroundAction> all = d.world.actions();
  for (std::size_t r = 0; r < limits_.condition_redraws; ++r) {
    ActionSequence seq;
    for (std::size_t i = 0; i < cfg_.length; ++i) {
      seq.push_back(ActionId{static_cast<std::uint32_t>(rng.below(all.size()))});
    }
    bool label = execute(d.world, d.state, seq).success;
    if (target && label) {
      ++c.sequence_redraws;
      continue;
    }
    d.actions = std::move(seq);
    d.label = label;
    return true;
  }
  return false;
}

bool Generator::planning(Draft& d, SeededRng& rng, std::optional<bool> target, GenCounters& c) const {
  for (std::size_t r = 0; r < limits_.condition_redraws; ++r) {
    Condition goal = sample_condition(d.world, rng);
    bool achievable = false;
    try {
      achievable = achievable_within(d.world, d.state, goal, cfg_.length, limits_.search);
    } catch (const BudgetExceeded&) {
      ++c.budget_skips;
      continue;
    }
    if (!achievable) {
      ++c.goal_rejections;
      continue;
    }
    for (std::size_t w = 0; w < limits_.walk_tries; ++w) {
      auto seq = random_walk(d.world, d.state, rng);
      if (!seq) break;
      bool label = is_goal_achieving(d.world, d.state, goal, *seq);
      if (target && label != *target) {
        ++c.sequence_redraws;
        continue;
      }
      d.actions = std::move(*seq);
      d.condition = goal;
      d.label = label;
      return true;
    }
    if (target == true) {
      ++c.planner_fallbacks;
      if (auto seq = search_plan(d.world, d.state, goal, rng)) {
        d.actions = std::move(*seq);
        d.condition = goal;
        d.label = true;
        return true;
      }
    }
    ++c.condition_redraws;
  }
  return false;
}

bool Generator::goal_recognition(Draft& d, SeededRng& rng, std::optional<bool> target,
                                 GenCounters& c) const {
  const std::size_t n = cfg_.length;
  for (std::size_t r = 0; r < limits_.condition_redraws; ++r) {
    Condition goal = sample_condition(d.world, rng);
    Heuristic h = blocksworld::goal_heuristic(d.world, goal);
    PlanCost cost = PlanCost::unreachable();
    try {
      cost = astar_cost(d.world, d.state, goal, h, default_bound(d.world), limits_.search);
    } catch (const BudgetExceeded&) {
      ++c.budget_skips;
      continue;
    }
    if (!cost.is_finite()) {
      ++c.goal_rejections;
      continue;
    }
    const std::uint32_t k = cost.value();
    bool want_positive = target ? *target : rng.coin();
    if (want_positive) {
      if (k < n) {
        ++c.condition_redraws;
        continue;
      }
      d.actions = sample_optimal_prefix(d.world, d.state, goal, k, n, h, rng, limits_.search);
      d.condition = goal;
      d.label = true;
      return true;
    }
    for (std::size_t w = 0; w < limits_.walk_tries; ++w) {
      auto seq = random_walk(d.world, d.state, rng);
      if (!seq) break;
      // The walk is an optimal prefix iff the rest of the goal is still
      // reachable in exactly k - n steps.
      bool label = false;
      if (k >= n) {
        State end = execute(d.world, d.state, *seq).state;
        label = astar_cost(d.world, end, goal, h, k - n, limits_.search).is_finite();
      }
      if (label) {
        ++c.sequence_redraws;
        continue;
      }
      d.actions = std::move(*seq);
      d.condition = goal;
      d.label = false;
      return true;
    }
    ++c.condition_redraws;
  }
  return false;
}

ProblemInstance Generator::generate(SeededRng& rng, std::optional<bool> target, GenCounters& c) const {
  for (std::size_t attempt = 0; attempt < limits_.full_attempts; ++attempt) {
    if (attempt > 0) ++c.full_resamples;
    std::vector<std::string> names = blocksworld::assign_names(cfg_.objects, cfg_.pool, rng);
    Draft d{base_.with_universe(blocksworld::make_universe(names))};
    d.state = blocksworld::configuration_to_state(
        d.world, blocksworld::sample_configuration(cfg_.objects, rng));

    bool ok = false;
    switch (cfg_.task) {
      case TaskKind::projection: ok = projection(d, rng, target, c); break;
      case TaskKind::executability: ok = executability(d, rng, target, c); break;
      case TaskKind::planning: ok = planning(d, rng, target, c); break;
      case TaskKind::goal_recognition: ok = goal_recognition(d, rng, target, c); break;
    }
    if (!ok) continue;

    ProblemInstance p{std::move(d.world)};
    p.kind = cfg_.task;
    p.initial_state = d.state.atoms();
    rng.shuffle(std::span<AtomId>(p.initial_state));
    p.actions = std::move(d.actions);
    p.condition = d.condition;
    p.label = d.label;
    p.meta.objects = cfg_.objects;
    p.meta.length = cfg_.length;
    p.meta.ge_tag = cfg_.ge_tag;
    p.meta.pool = cfg_.pool;
    p.meta.dataset_seed = cfg_.seed;
    p.meta.instance_seed = rng.seed();
    p.id = instance_id(p);
    return p;
  }
  throw YieldFailure("could not generate a " + std::string(to_string(cfg_.task)) +
                     " instance within " + std::to_string(limits_.full_attempts) + " attempts");
}

ProblemInstance Generator::generate(std::size_t index, std::size_t attempt, GenCounters& c) const {
  SeededRng rng(derive_seed(cfg_.seed, index, attempt));
  ProblemInstance p = generate(rng, index % 2 == 0, c);
  p.meta.index = index;
  return p;
}

namespace {

ProblemInstance generate_one(GenConfig cfg, TaskKind kind, SeededRng& rng, std::optional<bool> target) {
  cfg.task = kind;
  if (cfg.count % 2 != 0) cfg.count += 1;
  GenCounters c;
  return Generator(std::move(cfg)).generate(rng, target, c);
}

}  // namespace

ProblemInstance gen_projection(const GenConfig& cfg, SeededRng& rng, std::optional<bool> target) {
  return generate_one(cfg, TaskKind::projection, rng, target);
}
ProblemInstance gen_executability(const GenConfig& cfg, SeededRng& rng, std::optional<bool> target) {
  return generate_one(cfg, TaskKind::executability, rng, target);
}
ProblemInstance gen_planning(const GenConfig& cfg, SeededRng& rng, std::optional<bool> target) {
  return generate_one(cfg, TaskKind::planning, rng, target);
}
ProblemInstance gen_goal_recognition(const GenConfig& cfg, SeededRng& rng, std::optional<bool> target) {
  return generate_one(cfg, TaskKind::goal_recognition, rng, target);
}

Dataset gen_dataset(const GenConfig& cfg, std::size_t workers, GenLimits limits) {
  Generator gen(cfg, limits);
  Dataset out;
  out.config = cfg;
  const std::size_t n = cfg.count;
  std::vector<std::optional<ProblemInstance>> slots(n);
  workers = std::max<std::size_t>(1, std::min(workers, n == 0 ? 1 : n));

  std::vector<GenCounters> counters(workers);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_index = n;

  auto work = [&](std::size_t w) {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        slots[i] = gen.generate(i, 0, counters[w]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        return;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (std::thread& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);
  for (const GenCounters& c : counters) out.counters.merge(c);

  // Deterministic merge: resolve duplicates in index order.
  std::unordered_set<std::string> seen;
  out.instances.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ProblemInstance p = std::move(*slots[i]);
    std::size_t attempt = 0;
    while (!seen.insert(canonical_form(p)).second) {
      ++out.counters.duplicate_rejections;
      if (++attempt > limits.duplicate_attempts) {
        throw YieldFailure("dataset '" + cfg.name + "': could not find a distinct instance for index " +
                           std::to_string(i) + " after " + std::to_string(limits.duplicate_attempts) +
                           " attempts (" + std::to_string(seen.size()) + " distinct so far)");
      }
      p = gen.generate(i, attempt, out.counters);
    }
    out.instances.push_back(std::move(p));
  }
  return out;
}

namespace {

std::uint64_t name_hash(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Sequence length of the GE1, GE3 and GE4 datasets.
constexpr std::size_t kGeLength = 2;

}  // namespace

std::vector<GenConfig> ge_suite(std::uint64_t base_seed, SuiteOptions options) {
  std::vector<GenConfig> out;
  auto add = [&](std::string name, TaskKind task, std::size_t m, std::size_t n, std::size_t count,
                 PoolKind pool, ConditionShape shape, std::string tag) {
    GenConfig cfg;
    cfg.seed = derive_seed(base_seed, name_hash(name));
    cfg.name = std::move(name);
    cfg.task = task;
    cfg.objects = m;
    cfg.length = n;
    cfg.count = count;
    cfg.pool = pool;
    cfg.shape = shape;
    cfg.ge_tag = std::move(tag);
    out.push_back(std::move(cfg));
  };
  const std::size_t big = options.count;
  const auto std_pool = PoolKind::standard;
  const auto mixed = ConditionShape::mixed;

  for (TaskKind t : kAllTasks) {
    for (std::size_t n = 1; n <= 3; ++n) {
      add(std::string(to_string(t)) + "_L" + std::to_string(n), t, 5, n, big, std_pool, mixed, "none");
    }
  }
  for (TaskKind t : kAllTasks) {
    add("ge1_" + std::string(to_string(t)), t, 10, kGeLength, big, std_pool, mixed, "GE1");
  }
  for (TaskKind t : kAllTasks) {
    if (t == TaskKind::goal_recognition && !options.include_ge2_goal_recognition) continue;
    for (std::size_t n = 4; n <= 5; ++n) {
      add("ge2_" + std::string(to_string(t)) + "_L" + std::to_string(n), t, 5, n, big, std_pool, mixed, "GE2");
    }
  }
  for (TaskKind t : kAllTasks) {
    add("ge3_" + std::string(to_string(t)), t, 5, kGeLength, big, PoolKind::unseen, mixed, "GE3");
  }
  for (TaskKind t : kAllTasks) {
    if (t == TaskKind::executability) continue;
    add("ge4_" + std::string(to_string(t)) + "_literals", t, 5, kGeLength, big, std_pool,
        ConditionShape::literals_only, "GE4-lit");
    add("ge4_" + std::string(to_string(t)) + "_conjunctions", t, 5, kGeLength, options.small_count,
        std_pool, ConditionShape::conjunctions_only, "GE4-conj");
  }
  return out;
}

}  // namespace trac
