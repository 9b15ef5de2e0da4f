#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trac/domain.h"

namespace trac {

enum class ObjectId : std::uint32_t {};
enum class AtomId : std::uint32_t {};
enum class ActionId : std::uint32_t {};

constexpr std::uint32_t index(ObjectId id) { return static_cast<std::uint32_t>(id); }
constexpr std::uint32_t index(AtomId id) { return static_cast<std::uint32_t>(id); }
constexpr std::uint32_t index(ActionId id) { return static_cast<std::uint32_t>(id); }

struct ObjectInfo {
  std::string name;
  std::string type;

  bool operator==(const ObjectInfo&) const = default;
};

// Named, typed objects. Names are pairwise distinct (unique name axioms).
class ObjectUniverse {
 public:
  ObjectUniverse() = default;
  explicit ObjectUniverse(std::vector<ObjectInfo> objects);

  std::size_t size() const { return objects_.size(); }
  const ObjectInfo& operator[](ObjectId id) const { return objects_[index(id)]; }
  const std::string& name(ObjectId id) const { return objects_[index(id)].name; }
  std::optional<ObjectId> find(std::string_view name) const;
  const std::vector<ObjectInfo>& objects() const { return objects_; }
  std::vector<std::string> names() const;

  bool operator==(const ObjectUniverse&) const = default;

 private:
  std::vector<ObjectInfo> objects_;
};

// A set of ground atoms as a fixed-width bitset over the task's atom ids.
class State {
 public:
  State() = default;
  explicit State(std::size_t atom_count);

  bool contains(AtomId a) const {
    return (words_[index(a) >> 6] >> (index(a) & 63)) & 1U;
  }
  void insert(AtomId a) { words_[index(a) >> 6] |= std::uint64_t{1} << (index(a) & 63); }
  void erase(AtomId a) { words_[index(a) >> 6] &= ~(std::uint64_t{1} << (index(a) & 63)); }

  // True if every atom of `sub` is in this state.
  bool includes(const State& sub) const;
  bool intersects(const State& other) const;

  std::size_t size() const;
  bool empty() const { return size() == 0; }
  // Ascending atom ids.
  std::vector<AtomId> atoms() const;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }
  std::size_t hash() const;

  bool operator==(const State&) const = default;
  auto operator<=>(const State&) const = default;

 private:
  std::vector<std::uint64_t> words_;
};

struct StateHash {
  std::size_t operator()(const State& s) const { return s.hash(); }
};

struct GroundAtom {
  std::uint32_t predicate = 0;  // index into DomainSpec::predicates
  std::vector<ObjectId> args;
};

struct GroundAction {
  std::uint32_t schema = 0;  // index into DomainSpec::actions
  std::vector<ObjectId> args;
  std::vector<AtomId> precondition;
  std::vector<AtomId> add_list;
  std::vector<AtomId> delete_list;
  State pre_mask;
  State add_mask;
  State del_mask;
};

using ActionSequence = std::vector<ActionId>;

struct Literal {
  AtomId atom{};
  bool positive = true;

  Literal negated() const { return {atom, !positive}; }
  bool operator==(const Literal&) const = default;
  auto operator<=>(const Literal&) const = default;
};

// A single literal or a conjunction of two literals over distinct atoms.
class Condition {
 public:
  static Condition literal(Literal l) { return Condition(l, std::nullopt); }
  // Throws Error if both literals share an atom (duplicate or complementary).
  static Condition conjunction(Literal first, Literal second);
  // Builds without the distinct-atom check. Only for oracle tests of
  // contradictory goals.
  static Condition unchecked_conjunction(Literal first, Literal second) {
    return Condition(first, second);
  }

  bool is_conjunction() const { return second_.has_value(); }
  const Literal& first() const { return first_; }
  const std::optional<Literal>& second() const { return second_; }
  std::vector<Literal> literals() const;

  bool operator==(const Condition&) const = default;

 private:
  Condition(Literal first, std::optional<Literal> second)
      : first_(first), second_(second) {}
  Literal first_;
  std::optional<Literal> second_;
};

struct ExecutionResult {
  bool success = false;
  // Final state on success; the state before the failing action otherwise.
  State state;
  std::size_t failed_index = 0;
};

// Display names for predicate and action symbols (e.g. "ontable" ->
// "onTable"). Missing entries display as the domain name.
using SymbolNames = std::map<std::string, std::string, std::less<>>;

class Grounding;

/// A domain grounded over an object universe: every type-correct atom, and
/// every action instantiation with pairwise-distinct arguments. Cheap to copy;
/// the grounded structure is shared and immutable.
class GroundTask {
 public:
  GroundTask(std::shared_ptr<const DomainSpec> domain, ObjectUniverse universe,
             SymbolNames symbols = {});

  // Same grounding with different object names; types must line up.
  GroundTask with_universe(ObjectUniverse universe) const;

  const DomainSpec& domain() const;
  const std::shared_ptr<const DomainSpec>& domain_ptr() const;
  const ObjectUniverse& universe() const { return universe_; }
  std::size_t object_count() const { return universe_.size(); }

  std::size_t atom_count() const;
  const GroundAtom& atom(AtomId id) const;
  std::optional<AtomId> find_atom(std::uint32_t predicate,
                                  std::span<const ObjectId> args) const;
  // Atoms whose arguments are pairwise distinct; the pool conditions draw from.
  const std::vector<AtomId>& distinct_atoms() const;

  std::span<const GroundAction> actions() const;
  const GroundAction& action(ActionId id) const;
  std::optional<ActionId> find_action(std::uint32_t schema,
                                      std::span<const ObjectId> args) const;

  State empty_state() const { return State(atom_count()); }
  State make_state(std::span<const AtomId> atoms) const;

  // Applicable actions in canonical (ascending id) order.
  std::vector<ActionId> applicable_actions(const State& s) const;
  void applicable_actions(const State& s, std::vector<ActionId>& out) const;

  // Listing-style surface syntax: onTable(Green), !on(Blue, Magenta),
  // moveToTable(Indigo, Yellow), and "l1 & l2" for conjunctions.
  std::string format_atom(AtomId id) const;
  std::string format_literal(Literal l) const;
  std::string format_condition(const Condition& c) const;
  std::string format_action(ActionId id) const;
  const std::string& predicate_symbol(std::uint32_t predicate) const;
  const std::string& action_symbol(std::uint32_t schema) const;

  // Inverses of the format functions. Symbol lookup is case-insensitive,
  // object names are case-sensitive. Throw Error on unknown symbols.
  AtomId parse_atom(std::string_view text) const;
  Literal parse_literal(std::string_view text) const;
  Condition parse_condition(std::string_view text) const;
  ActionId parse_action(std::string_view text) const;

 private:
  GroundTask(std::shared_ptr<const Grounding> grounding, ObjectUniverse universe);

  std::shared_ptr<const Grounding> grounding_;
  ObjectUniverse universe_;
};

/// Every type-correct, distinct-argument instantiation of every action schema,
/// ordered by schema name then argument tuple (object order).
std::vector<GroundAction> ground_actions(std::shared_ptr<const DomainSpec> d,
                                         const ObjectUniverse& u);

inline bool applicable(const State& s, const GroundAction& a) {
  return s.includes(a.pre_mask);
}

// (s \ delete) ∪ add. Throws PreconditionError if `a` is not applicable.
State apply(const State& s, const GroundAction& a);
// Same, without the applicability check.
State apply_unchecked(const State& s, const GroundAction& a);

ExecutionResult execute(const GroundTask& task, const State& s,
                        std::span<const ActionId> seq);

inline bool eval_literal(const State& s, Literal l) {
  return s.contains(l.atom) == l.positive;
}
bool eval_condition(const State& s, const Condition& c);

struct ReachableStates {
  std::vector<State> states;  // breadth-first discovery order
  bool truncated = false;
};

/// Breadth-first closure of s0 under the task's ground actions. Stops once
/// `cap` states are collected and sets `truncated` if more existed.
ReachableStates reachable_states(const GroundTask& task, const State& s0,
                                 std::size_t cap);

}  // namespace trac
