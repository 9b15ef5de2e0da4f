#include "trac/instance.h"

#include <algorithm>
#include <cstdio>

namespace trac {

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::projection: return "projection";
    case TaskKind::executability: return "executability";
    case TaskKind::planning: return "planning";
    case TaskKind::goal_recognition: return "goal_recognition";
  }
  return "?";
}

TaskKind parse_task_kind(std::string_view text) {
  for (TaskKind k : kAllTasks) {
    if (to_string(k) == text) return k;
  }
  if (text == "gr" || text == "goal-recognition") return TaskKind::goal_recognition;
  if (text == "ex") return TaskKind::executability;
  throw Error("unknown task '" + std::string(text) + "'");
}

std::string canonical_form(const ProblemInstance& p) {
  std::vector<std::string> atoms;
  for (AtomId a : p.initial_state) atoms.push_back(p.world.format_atom(a));
  std::sort(atoms.begin(), atoms.end());
  std::string s(to_string(p.kind));
  s += "|";
  for (std::size_t i = 0; i < atoms.size(); ++i) s += (i ? ";" : "") + atoms[i];
  s += "|";
  for (std::size_t i = 0; i < p.actions.size(); ++i) s += (i ? ";" : "") + p.world.format_action(p.actions[i]);
  s += "|";
  if (p.condition) {
    // Conjunct order is presentation too.
    std::vector<std::string> lits;
    for (const Literal& l : p.condition->literals()) lits.push_back(p.world.format_literal(l));
    std::sort(lits.begin(), lits.end());
    for (std::size_t i = 0; i < lits.size(); ++i) s += (i ? "&" : "") + lits[i];
  }
  return s;
}

std::string instance_id(const ProblemInstance& p) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_form(p)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

PlanCost condition_cost(const ProblemInstance& p, SearchLimits limits) {
  if (!p.condition) throw Error("instance has no condition");
  return astar_cost(p.world, p.state(), *p.condition,
                    blocksworld::goal_heuristic(p.world, *p.condition), default_bound(p.world), limits);
}

bool compute_label(const ProblemInstance& p, SearchLimits limits) {
  State s = p.state();
  switch (p.kind) {
    case TaskKind::projection: {
      ExecutionResult r = execute(p.world, s, p.actions);
      if (!r.success) throw Error("projection sequence is not executable");
      return eval_condition(r.state, p.condition.value());
    }
    case TaskKind::executability:
      return execute(p.world, s, p.actions).success;
    case TaskKind::planning:
      return is_goal_achieving(p.world, s, p.condition.value(), p.actions);
    case TaskKind::goal_recognition:
      return is_optimal_prefix(p.world, s, p.condition.value(), p.actions,
                               blocksworld::goal_heuristic(p.world, p.condition.value()),
                               default_bound(p.world), limits);
  }
  return false;
}

ProblemInstance make_instance(TaskKind kind, const std::vector<std::string>& names,
                              const std::vector<std::string>& state_atoms,
                              const std::vector<std::string>& actions,
                              const std::optional<std::string>& condition) {
  ProblemInstance p{blocksworld::make_task(names)};
  p.kind = kind;
  for (const std::string& a : state_atoms) p.initial_state.push_back(p.world.parse_atom(a));
  for (const std::string& a : actions) p.actions.push_back(p.world.parse_action(a));
  if (condition) p.condition = p.world.parse_condition(*condition);
  p.meta.objects = names.size();
  p.meta.length = actions.size();
  p.label = compute_label(p);
  p.id = instance_id(p);
  return p;
}

}  // namespace trac
