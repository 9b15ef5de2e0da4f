#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trac/blocksworld.h"
#include "trac/planner.h"
#include "trac/strips.h"

namespace trac {

enum class TaskKind { projection, executability, planning, goal_recognition };

std::string_view to_string(TaskKind kind);
TaskKind parse_task_kind(std::string_view text);
inline constexpr TaskKind kAllTasks[] = {TaskKind::projection, TaskKind::executability,
                                         TaskKind::planning, TaskKind::goal_recognition};

struct InstanceMeta {
  std::size_t objects = 0;  // M
  std::size_t length = 0;   // N
  std::string ge_tag = "none";
  blocksworld::PoolKind pool = blocksworld::PoolKind::standard;
  std::uint64_t dataset_seed = 0;
  std::uint64_t instance_seed = 0;
  std::size_t index = 0;
  std::string split;
};

/// One benchmark example in symbolic form. `world` carries the object names;
/// `initial_state` lists the atoms in display order.
///
/// Field roles per task:
///   projection        context = state + actions, query = condition
///   executability     context = state,           query = actions
///   planning          context = state + goal,    query = actions
///   goal_recognition  context = state + actions, query = goal
struct ProblemInstance {
  GroundTask world;
  TaskKind kind = TaskKind::projection;
  std::vector<AtomId> initial_state;
  ActionSequence actions;
  std::optional<Condition> condition;
  bool label = false;
  InstanceMeta meta;
  std::string id;

  State state() const { return world.make_state(initial_state); }
};

/// Order-independent identity: sorted state atoms, the action sequence and
/// the condition in surface syntax, prefixed by the task name.
std::string canonical_form(const ProblemInstance& p);
// 16 hex digits of FNV-1a over canonical_form.
std::string instance_id(const ProblemInstance& p);

/// The task's ground truth recomputed from the symbolic fields.
bool compute_label(const ProblemInstance& p, SearchLimits limits = {});

// Planning and goal recognition: optimal cost of the condition from the
// initial state (bound 2M+2).
PlanCost condition_cost(const ProblemInstance& p, SearchLimits limits = {});

/// Builds an instance from surface syntax (names in universe order, atoms in
/// display order). The label is computed; `id` is filled in.
ProblemInstance make_instance(TaskKind kind, const std::vector<std::string>& names,
                              const std::vector<std::string>& state_atoms,
                              const std::vector<std::string>& actions,
                              const std::optional<std::string>& condition);

}  // namespace trac
