#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trac/domain.h"
#include "trac/planner.h"
#include "trac/rng.h"
#include "trac/strips.h"

namespace trac::blocksworld {

// The bundled PDDL text, as shipped in data/blocksworld.pddl.
std::string_view builtin_pddl();
// Parsed and validated once; shared read-only.
std::shared_ptr<const DomainSpec> builtin_domain();
// onTable / moveToTable / moveFromTable surface names.
SymbolNames symbol_names();

// Towers listed bottom to top. normalize() orders towers by bottom block so
// equal configurations compare equal.
struct BlockConfiguration {
  std::vector<std::vector<ObjectId>> towers;

  void normalize();
  std::size_t block_count() const;
  bool operator==(const BlockConfiguration&) const = default;
};

/// Number of configurations of m labeled blocks (sets of non-empty ordered
/// towers). Uses the recurrence a(m+1) = (2m+1) a(m) - (m-1) m a(m-1).
unsigned __int128 count_configurations(std::size_t m);

/// Uniform over all configurations of m labeled blocks. Draws the tower count
/// k with probability L(m,k)/a(m) (Lah numbers), then cuts a random
/// permutation into k non-empty runs at uniformly chosen positions.
BlockConfiguration sample_configuration(std::size_t m, SeededRng& rng);

State configuration_to_state(const GroundTask& task, const BlockConfiguration& c);
// Throws Error if the state violates a physical invariant.
BlockConfiguration state_to_configuration(const GroundTask& task, const State& s);

/// Physical invariants of a legal blocks-world state:
///  - every block is on the table or on exactly one block, never both;
///  - no block has two blocks directly on it;
///  - clear(x) holds iff nothing is on x;
///  - the on-relation is acyclic.
/// Returns one message per violation; empty means legal.
std::vector<std::string> physical_violations(const GroundTask& task, const State& s);
inline bool is_legal_state(const GroundTask& task, const State& s) {
  return physical_violations(task, s).empty();
}

enum class PoolKind { standard, unseen };
std::string_view to_string(PoolKind kind);
PoolKind parse_pool_kind(std::string_view text);

struct NamePool {
  std::vector<std::string> standard;
  std::vector<std::string> unseen;

  // `[standard]` / `[unseen]` sections, one lowercase name per line, '#'
  // comments. Throws Error if the pools overlap or hold fewer than 10 names.
  static NamePool parse(std::string_view text);
  static const NamePool& builtin();
  static std::string_view builtin_text();

  const std::vector<std::string>& get(PoolKind kind) const {
    return kind == PoolKind::standard ? standard : unseen;
  }
};

/// m distinct names drawn without replacement, capitalized ("Green"). The
/// draw only depends on pool positions, so the same rng state picks the same
/// positions in either pool. Throws Error if m exceeds the pool size.
std::vector<std::string> assign_names(std::size_t m, PoolKind kind, SeededRng& rng,
                                      const NamePool& pool = NamePool::builtin());

// Maps a name to the name at the same position of the other pool. Throws
// Error for names in neither pool.
std::string swap_pool_name(std::string_view name, const NamePool& pool = NamePool::builtin());

std::string capitalize(std::string_view word);

// True if some legal state satisfies `g`. Every legal state reaches every
// other, so this is also goal reachability.
bool satisfiable(const GroundTask& task, const Condition& g);

/// Consistent lower bound for `g`: every block that provably has to move
/// (blocks stacked above the ones a literal mentions, plus the mentioned block
/// when it must change position) costs one action. Returns kUnreachableCost
/// everywhere if `g` is unsatisfiable. Requires a legal state.
Heuristic goal_heuristic(const GroundTask& task, const Condition& g);

ObjectUniverse make_universe(std::span<const std::string> names);
// Grounds the builtin domain over `names`.
GroundTask make_task(std::span<const std::string> names);
// Grounds over m placeholder blocks; rename with with_universe(make_universe(...)).
GroundTask make_task(std::size_t m);

}  // namespace trac::blocksworld
