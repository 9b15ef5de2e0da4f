#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trac/blocksworld.h"
#include "trac/instance.h"
#include "trac/planner.h"

namespace trac {

enum class ConditionShape { literals_only, conjunctions_only, mixed };
std::string_view to_string(ConditionShape shape);
ConditionShape parse_condition_shape(std::string_view text);

struct GenConfig {
  std::string name;
  TaskKind task = TaskKind::projection;
  std::size_t objects = 5;  // M
  std::size_t length = 1;   // N
  std::size_t count = 15000;
  std::uint64_t seed = 0;
  blocksworld::PoolKind pool = blocksworld::PoolKind::standard;
  ConditionShape shape = ConditionShape::mixed;
  std::string ge_tag = "none";  // none, GE1, GE2, GE3, GE4-lit, GE4-conj

  // Throws Error: count must be even, N >= 1, M >= 2 and within the pool.
  void validate() const;
};

// Sampling statistics, summed over a dataset.
struct GenCounters {
  std::uint64_t condition_redraws = 0;   // condition/goal draws rejected for the label target
  std::uint64_t goal_rejections = 0;     // goals not achievable (within N, or at all for GR)
  std::uint64_t budget_skips = 0;        // goals whose search outgrew the generation budget
  std::uint64_t sequence_redraws = 0;    // action sequences rejected for the label target
  std::uint64_t planner_fallbacks = 0;   // planning positives found by exhaustive search
  std::uint64_t full_resamples = 0;      // fresh initial state after exhausting redraws
  std::uint64_t duplicate_rejections = 0;

  void merge(const GenCounters& o);
};

struct GenLimits {
  std::size_t condition_redraws = 200;
  std::size_t walk_tries = 50;
  std::size_t full_attempts = 1000;
  std::size_t duplicate_attempts = 1000;
  std::size_t fallback_nodes = 2'000'000;
  // Goals whose optimal-plan search exceeds this are redrawn.
  SearchLimits search{2'000'000};
};

/// Generates single instances for one configuration. Immutable after
/// construction; generate() may be called from several threads.
class Generator {
 public:
  explicit Generator(GenConfig cfg, GenLimits limits = {});

  const GenConfig& config() const { return cfg_; }

  // Instance `index` of the dataset; `attempt` > 0 after duplicate rejection.
  // Even indices target label true, odd ones false.
  ProblemInstance generate(std::size_t index, std::size_t attempt, GenCounters& counters) const;

  // One instance from `rng`, optionally forced to a label by rejection.
  ProblemInstance generate(SeededRng& rng, std::optional<bool> target, GenCounters& counters) const;

 private:
  struct Draft;
  bool projection(Draft& d, SeededRng& rng, std::optional<bool> target, GenCounters& c) const;
  bool executability(Draft& d, SeededRng& rng, std::optional<bool> target, GenCounters& c) const;
  bool planning(Draft& d, SeededRng& rng, std::optional<bool> target, GenCounters& c) const;
  bool goal_recognition(Draft& d, SeededRng& rng, std::optional<bool> target, GenCounters& c) const;

  Condition sample_condition(const GroundTask& w, SeededRng& rng) const;
  std::optional<ActionSequence> random_walk(const GroundTask& w, const State& s, SeededRng& rng) const;
  std::optional<ActionSequence> search_plan(const GroundTask& w, const State& s, const Condition& g,
                                            SeededRng& rng) const;

  GenConfig cfg_;
  GenLimits limits_;
  GroundTask base_;
};

ProblemInstance gen_projection(const GenConfig& cfg, SeededRng& rng, std::optional<bool> target = {});
ProblemInstance gen_executability(const GenConfig& cfg, SeededRng& rng, std::optional<bool> target = {});
ProblemInstance gen_planning(const GenConfig& cfg, SeededRng& rng, std::optional<bool> target = {});
ProblemInstance gen_goal_recognition(const GenConfig& cfg, SeededRng& rng, std::optional<bool> target = {});

struct Dataset {
  GenConfig config;
  std::vector<ProblemInstance> instances;
  GenCounters counters;
};

/// `count` instances, exactly half labeled true, no two with the same
/// canonical form. Instance i is drawn from derive_seed(seed, i, attempt), and
/// duplicates are resolved in index order, so the output does not depend on
/// `workers`. Throws YieldFailure if the configuration cannot be filled.
Dataset gen_dataset(const GenConfig& cfg, std::size_t workers = 1, GenLimits limits = {});

struct SuiteOptions {
  // Goal recognition at L4/L5 is not part of the standard manifest.
  bool include_ge2_goal_recognition = false;
  std::size_t count = 15000;       // size of 15k datasets
  std::size_t small_count = 3000;  // size of GE4 conjunction datasets
};

/// The 32-dataset manifest: 4 tasks x L1-L3 at M=5, then GE1 (M=10), GE2
/// (L4/L5, no goal recognition), GE3 (unseen names) and GE4 (literal-only
/// 15k and conjunction-only 3k sets). Seeds derive from `base_seed` and the
/// dataset name.
std::vector<GenConfig> ge_suite(std::uint64_t base_seed, SuiteOptions options = {});

}  // namespace trac
