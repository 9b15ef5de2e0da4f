#include "trac/strips.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <deque>
#include <numeric>
#include <unordered_set>

#include "trac/rng.h"

namespace trac {

// ---------------------------------------------------------------------------
// ObjectUniverse

ObjectUniverse::ObjectUniverse(std::vector<ObjectInfo> objects) : objects_(std::move(objects)) {
  if (objects_.empty()) throw Error("object universe must contain at least one object");
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    if (objects_[i].name.empty()) throw Error("object names must be non-empty");
    for (std::size_t j = 0; j < i; ++j) {
      if (objects_[i].name == objects_[j].name) {
        throw Error("duplicate object name '" + objects_[i].name + "'");
      }
    }
  }
}

std::optional<ObjectId> ObjectUniverse::find(std::string_view n) const {
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    if (objects_[i].name == n) return ObjectId{static_cast<std::uint32_t>(i)};
  }
  return std::nullopt;
}

std::vector<std::string> ObjectUniverse::names() const {
  std::vector<std::string> out;
  out.reserve(objects_.size());
  for (const ObjectInfo& o : objects_) out.push_back(o.name);
  return out;
}

// ---------------------------------------------------------------------------
// State

State::State(std::size_t atom_count) : words_((atom_count + 63) / 64, 0) {}

bool State::includes(const State& sub) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((sub.words_[i] & ~words_[i]) != 0) return false;
  }
  return true;
}

bool State::intersects(const State& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((other.words_[i] & words_[i]) != 0) return true;
  }
  return false;
}

std::size_t State::size() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<AtomId> State::atoms() const {
  std::vector<AtomId> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    while (w != 0) {
      int bit = std::countr_zero(w);
      out.push_back(AtomId{static_cast<std::uint32_t>(i * 64 + bit)});
      w &= w - 1;
    }
  }
  return out;
}

std::size_t State::hash() const {
  std::uint64_t h = 0x51ed270b27d1f5a5ULL;
  for (std::uint64_t w : words_) h = mix64(h ^ w);
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------
// Condition

Condition Condition::conjunction(Literal first, Literal second) {
  if (first.atom == second.atom) {
    throw Error("conjunction literals must refer to distinct atoms");
  }
  return Condition(first, second);
}

std::vector<Literal> Condition::literals() const {
  if (second_) return {first_, *second_};
  return {first_};
}

// ---------------------------------------------------------------------------
// Grounding

class Grounding {
 public:
  Grounding(std::shared_ptr<const DomainSpec> d, const ObjectUniverse& u, SymbolNames symbols);

  std::shared_ptr<const DomainSpec> domain;
  std::vector<std::string> object_types;
  std::vector<std::string> predicate_symbols;
  std::vector<std::string> action_symbols;

  std::vector<GroundAtom> atoms;
  std::vector<AtomId> distinct_atoms;
  std::vector<GroundAction> actions;

  // Dense lookup tables indexed by mixed-radix argument tuples; -1 = absent.
  std::vector<std::size_t> atom_offset;
  std::vector<std::int64_t> atom_table;
  std::vector<std::size_t> action_offset;
  std::vector<std::int64_t> action_table;

  // Each action is listed under one of its precondition atoms.
  std::vector<std::vector<ActionId>> trigger;
  std::vector<ActionId> unconditional;

  std::size_t radix_index(std::span<const ObjectId> args) const {
    std::size_t key = 0;
    for (ObjectId o : args) key = key * object_types.size() + index(o);
    return key;
  }

 private:
  std::vector<std::vector<ObjectId>> tuples(const std::vector<TypedParam>& params,
                                            bool distinct) const;
};

namespace {

std::size_t power(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    r *= base;
    if (r > 50'000'000) throw Error("grounding too large");
  }
  return r;
}

std::vector<std::uint32_t> name_order(std::size_t n, auto name_of) {
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return name_of(a) < name_of(b); });
  return order;
}

}  // namespace

std::vector<std::vector<ObjectId>> Grounding::tuples(const std::vector<TypedParam>& params,
                                                     bool distinct) const {
  std::vector<std::vector<ObjectId>> out;
  std::vector<ObjectId> current;
  auto rec = [&](auto&& self, std::size_t depth) -> void {
    if (depth == params.size()) {
      out.push_back(current);
      return;
    }
    for (std::uint32_t o = 0; o < object_types.size(); ++o) {
      if (!domain->is_subtype(object_types[o], params[depth].type)) continue;
      ObjectId id{o};
      if (distinct && std::find(current.begin(), current.end(), id) != current.end()) continue;
      current.push_back(id);
      self(self, depth + 1);
      current.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

Grounding::Grounding(std::shared_ptr<const DomainSpec> d, const ObjectUniverse& u,
                     SymbolNames symbols)
    : domain(std::move(d)) {
  if (!domain) throw Error("null domain");
  const DomainSpec& dom = *domain;
  for (const ObjectInfo& o : u.objects()) {
    if (!dom.has_type(o.type)) throw Error("object '" + o.name + "' has unknown type '" + o.type + "'");
    object_types.push_back(o.type);
  }
  const std::size_t m = object_types.size();

  for (const PredicateSchema& p : dom.predicates) {
    auto it = symbols.find(p.name);
    predicate_symbols.push_back(it == symbols.end() ? p.name : it->second);
  }
  for (const ActionSchema& a : dom.actions) {
    auto it = symbols.find(a.name);
    action_symbols.push_back(it == symbols.end() ? a.name : it->second);
  }

  // Atoms: predicates by name, then argument tuples in object order.
  atom_offset.resize(dom.predicates.size());
  std::size_t table_size = 0;
  for (std::size_t p = 0; p < dom.predicates.size(); ++p) {
    atom_offset[p] = table_size;
    table_size += power(m, dom.predicates[p].arity());
  }
  atom_table.assign(table_size, -1);
  for (std::uint32_t p : name_order(dom.predicates.size(),
                                    [&](std::uint32_t i) { return dom.predicates[i].name; })) {
    for (std::vector<ObjectId>& args : tuples(dom.predicates[p].params, false)) {
      AtomId id{static_cast<std::uint32_t>(atoms.size())};
      atom_table[atom_offset[p] + radix_index(args)] = index(id);
      std::vector<ObjectId> sorted = args;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) {
        distinct_atoms.push_back(id);
      }
      atoms.push_back({p, std::move(args)});
    }
  }
  const std::size_t atom_count = atoms.size();

  auto instantiate = [&](const ActionSchema& schema, const std::vector<ObjectId>& args,
                         const std::vector<SchemaAtom>& part) {
    std::vector<AtomId> out;
    for (const SchemaAtom& sa : part) {
      auto pred = static_cast<std::size_t>(dom.find_predicate(sa.predicate) - dom.predicates.data());
      std::vector<ObjectId> atom_args;
      for (const std::string& var : sa.args) {
        auto pos = std::find_if(schema.params.begin(), schema.params.end(),
                                [&](const TypedParam& tp) { return tp.name == var; });
        atom_args.push_back(args[static_cast<std::size_t>(pos - schema.params.begin())]);
      }
      std::int64_t id = atom_table[atom_offset[pred] + radix_index(atom_args)];
      if (id < 0) throw Error("ill-typed atom while grounding action '" + schema.name + "'");
      out.push_back(AtomId{static_cast<std::uint32_t>(id)});
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  auto mask = [&](const std::vector<AtomId>& ids) {
    State s(atom_count);
    for (AtomId a : ids) s.insert(a);
    return s;
  };

  action_offset.resize(dom.actions.size());
  table_size = 0;
  for (std::size_t a = 0; a < dom.actions.size(); ++a) {
    action_offset[a] = table_size;
    table_size += power(m, dom.actions[a].params.size());
  }
  action_table.assign(table_size, -1);
  for (std::uint32_t a : name_order(dom.actions.size(),
                                    [&](std::uint32_t i) { return dom.actions[i].name; })) {
    const ActionSchema& schema = dom.actions[a];
    for (std::vector<ObjectId>& args : tuples(schema.params, true)) {
      GroundAction g;
      g.schema = a;
      g.precondition = instantiate(schema, args, schema.precondition);
      g.add_list = instantiate(schema, args, schema.add_list);
      g.delete_list = instantiate(schema, args, schema.delete_list);
      for (AtomId added : g.add_list) {
        if (std::binary_search(g.delete_list.begin(), g.delete_list.end(), added)) {
          throw Error("action '" + schema.name + "' adds and deletes the same atom");
        }
      }
      g.pre_mask = mask(g.precondition);
      g.add_mask = mask(g.add_list);
      g.del_mask = mask(g.delete_list);
      action_table[action_offset[a] + radix_index(args)] = static_cast<std::int64_t>(actions.size());
      g.args = std::move(args);
      actions.push_back(std::move(g));
    }
  }

  trigger.resize(atom_count);
  for (std::uint32_t i = 0; i < actions.size(); ++i) {
    const GroundAction& g = actions[i];
    if (g.precondition.empty()) {
      unconditional.push_back(ActionId{i});
      continue;
    }
    // The highest-arity precondition atom is usually the most selective.
    AtomId best = g.precondition.front();
    for (AtomId a : g.precondition) {
      if (atoms[index(a)].args.size() > atoms[index(best)].args.size()) best = a;
    }
    trigger[index(best)].push_back(ActionId{i});
  }
}

// ---------------------------------------------------------------------------
// GroundTask

GroundTask::GroundTask(std::shared_ptr<const DomainSpec> domain, ObjectUniverse universe,
                       SymbolNames symbols)
    : grounding_(std::make_shared<const Grounding>(std::move(domain), universe, std::move(symbols))),
      universe_(std::move(universe)) {}

GroundTask::GroundTask(std::shared_ptr<const Grounding> grounding, ObjectUniverse universe)
    : grounding_(std::move(grounding)), universe_(std::move(universe)) {}

GroundTask GroundTask::with_universe(ObjectUniverse universe) const {
  if (universe.size() != universe_.size()) throw Error("universe size mismatch");
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (universe.objects()[i].type != grounding_->object_types[i]) {
      throw Error("universe type mismatch for object '" + universe.objects()[i].name + "'");
    }
  }
  return GroundTask(grounding_, std::move(universe));
}

const DomainSpec& GroundTask::domain() const { return *grounding_->domain; }
const std::shared_ptr<const DomainSpec>& GroundTask::domain_ptr() const { return grounding_->domain; }
std::size_t GroundTask::atom_count() const { return grounding_->atoms.size(); }
const GroundAtom& GroundTask::atom(AtomId id) const { return grounding_->atoms[index(id)]; }
const std::vector<AtomId>& GroundTask::distinct_atoms() const { return grounding_->distinct_atoms; }
std::span<const GroundAction> GroundTask::actions() const { return grounding_->actions; }
const GroundAction& GroundTask::action(ActionId id) const { return grounding_->actions[index(id)]; }

std::optional<AtomId> GroundTask::find_atom(std::uint32_t predicate,
                                            std::span<const ObjectId> args) const {
  const Grounding& g = *grounding_;
  if (predicate >= g.atom_offset.size() || args.size() != domain().predicates[predicate].arity()) {
    return std::nullopt;
  }
  for (ObjectId o : args) {
    if (index(o) >= object_count()) return std::nullopt;
  }
  std::int64_t id = g.atom_table[g.atom_offset[predicate] + g.radix_index(args)];
  if (id < 0) return std::nullopt;
  return AtomId{static_cast<std::uint32_t>(id)};
}

std::optional<ActionId> GroundTask::find_action(std::uint32_t schema,
                                                std::span<const ObjectId> args) const {
  const Grounding& g = *grounding_;
  if (schema >= g.action_offset.size() || args.size() != domain().actions[schema].params.size()) {
    return std::nullopt;
  }
  for (ObjectId o : args) {
    if (index(o) >= object_count()) return std::nullopt;
  }
  std::int64_t id = g.action_table[g.action_offset[schema] + g.radix_index(args)];
  if (id < 0) return std::nullopt;
  return ActionId{static_cast<std::uint32_t>(id)};
}

State GroundTask::make_state(std::span<const AtomId> atoms) const {
  State s = empty_state();
  for (AtomId a : atoms) {
    if (index(a) >= atom_count()) throw Error("atom id out of range");
    s.insert(a);
  }
  return s;
}

void GroundTask::applicable_actions(const State& s, std::vector<ActionId>& out) const {
  const Grounding& g = *grounding_;
  out.clear();
  std::span<const std::uint64_t> words = s.words();
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::uint64_t w = words[i];
    while (w != 0) {
      std::size_t atom = i * 64 + static_cast<std::size_t>(std::countr_zero(w));
      w &= w - 1;
      for (ActionId a : g.trigger[atom]) {
        if (s.includes(g.actions[index(a)].pre_mask)) out.push_back(a);
      }
    }
  }
  out.insert(out.end(), g.unconditional.begin(), g.unconditional.end());
  std::sort(out.begin(), out.end());
}

std::vector<ActionId> GroundTask::applicable_actions(const State& s) const {
  std::vector<ActionId> out;
  applicable_actions(s, out);
  return out;
}

const std::string& GroundTask::predicate_symbol(std::uint32_t p) const {
  return grounding_->predicate_symbols[p];
}

const std::string& GroundTask::action_symbol(std::uint32_t a) const {
  return grounding_->action_symbols[a];
}

namespace {

std::string call_text(const std::string& symbol, std::span<const ObjectId> args,
                      const ObjectUniverse& u) {
  std::string s = symbol + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ", ";
    s += u.name(args[i]);
  }
  return s + ")";
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

struct Call {
  std::string symbol;
  std::vector<std::string> args;
};

Call split_call(std::string_view text) {
  text = trim(text);
  Call c;
  std::size_t open = text.find('(');
  if (open == std::string_view::npos) {
    c.symbol = lower(text);
    return c;
  }
  if (text.back() != ')') throw Error("malformed term '" + std::string(text) + "'");
  c.symbol = lower(trim(text.substr(0, open)));
  std::string_view inner = trim(text.substr(open + 1, text.size() - open - 2));
  while (!inner.empty()) {
    std::size_t comma = inner.find(',');
    c.args.emplace_back(trim(inner.substr(0, comma)));
    if (c.args.back().empty()) throw Error("empty argument in '" + std::string(text) + "'");
    if (comma == std::string_view::npos) break;
    inner = inner.substr(comma + 1);
  }
  if (c.symbol.empty()) throw Error("missing symbol in '" + std::string(text) + "'");
  return c;
}

}  // namespace

std::string GroundTask::format_atom(AtomId id) const {
  const GroundAtom& a = atom(id);
  if (a.args.empty()) return predicate_symbol(a.predicate);
  return call_text(predicate_symbol(a.predicate), a.args, universe_);
}

std::string GroundTask::format_literal(Literal l) const {
  return (l.positive ? "" : "!") + format_atom(l.atom);
}

std::string GroundTask::format_condition(const Condition& c) const {
  std::string s = format_literal(c.first());
  if (c.second()) s += " & " + format_literal(*c.second());
  return s;
}

std::string GroundTask::format_action(ActionId id) const {
  const GroundAction& a = action(id);
  return call_text(action_symbol(a.schema), a.args, universe_);
}

AtomId GroundTask::parse_atom(std::string_view text) const {
  Call c = split_call(text);
  const DomainSpec& d = domain();
  for (std::uint32_t p = 0; p < d.predicates.size(); ++p) {
    if (d.predicates[p].name != c.symbol && lower(predicate_symbol(p)) != c.symbol) continue;
    std::vector<ObjectId> args;
    for (const std::string& name : c.args) {
      auto o = universe_.find(name);
      if (!o) throw Error("unknown object '" + name + "' in '" + std::string(text) + "'");
      args.push_back(*o);
    }
    auto id = find_atom(p, args);
    if (!id) throw Error("ill-formed atom '" + std::string(trim(text)) + "'");
    return *id;
  }
  throw Error("unknown predicate in '" + std::string(trim(text)) + "'");
}

Literal GroundTask::parse_literal(std::string_view text) const {
  text = trim(text);
  bool positive = true;
  if (!text.empty() && (text.front() == '!' || text.front() == '~')) {
    positive = false;
    text.remove_prefix(1);
  }
  return {parse_atom(text), positive};
}

Condition GroundTask::parse_condition(std::string_view text) const {
  std::size_t amp = text.find('&');
  if (amp == std::string_view::npos) return Condition::literal(parse_literal(text));
  if (text.find('&', amp + 1) != std::string_view::npos) {
    throw Error("conditions have at most two literals: '" + std::string(text) + "'");
  }
  return Condition::conjunction(parse_literal(text.substr(0, amp)),
                                parse_literal(text.substr(amp + 1)));
}

ActionId GroundTask::parse_action(std::string_view text) const {
  Call c = split_call(text);
  const DomainSpec& d = domain();
  for (std::uint32_t a = 0; a < d.actions.size(); ++a) {
    if (d.actions[a].name != c.symbol && lower(action_symbol(a)) != c.symbol) continue;
    std::vector<ObjectId> args;
    for (const std::string& name : c.args) {
      auto o = universe_.find(name);
      if (!o) throw Error("unknown object '" + name + "' in '" + std::string(text) + "'");
      args.push_back(*o);
    }
    auto id = find_action(a, args);
    if (!id) throw Error("no such ground action '" + std::string(trim(text)) + "'");
    return *id;
  }
  throw Error("unknown action in '" + std::string(trim(text)) + "'");
}

// ---------------------------------------------------------------------------
// Semantics

std::vector<GroundAction> ground_actions(std::shared_ptr<const DomainSpec> d,
                                         const ObjectUniverse& u) {
  GroundTask task(std::move(d), u);
  return {task.actions().begin(), task.actions().end()};
}

State apply_unchecked(const State& s, const GroundAction& a) {
  State out = s;
  std::span<std::uint64_t> w = out.words();
  std::span<const std::uint64_t> del = a.del_mask.words();
  std::span<const std::uint64_t> add = a.add_mask.words();
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = (w[i] & ~del[i]) | add[i];
  return out;
}

State apply(const State& s, const GroundAction& a) {
  if (!applicable(s, a)) throw PreconditionError("action is not applicable in this state");
  return apply_unchecked(s, a);
}

ExecutionResult execute(const GroundTask& task, const State& s, std::span<const ActionId> seq) {
  ExecutionResult r;
  r.state = s;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const GroundAction& a = task.action(seq[i]);
    if (!applicable(r.state, a)) {
      r.failed_index = i;
      return r;
    }
    r.state = apply_unchecked(r.state, a);
  }
  r.success = true;
  return r;
}

bool eval_condition(const State& s, const Condition& c) {
  if (!eval_literal(s, c.first())) return false;
  return !c.second() || eval_literal(s, *c.second());
}

ReachableStates reachable_states(const GroundTask& task, const State& s0, std::size_t cap) {
  ReachableStates r;
  if (cap == 0) {
    r.truncated = true;
    return r;
  }
  std::unordered_set<State, StateHash> seen{s0};
  r.states.push_back(s0);
  std::vector<ActionId> ops;
  for (std::size_t head = 0; head < r.states.size(); ++head) {
    task.applicable_actions(r.states[head], ops);
    for (ActionId a : ops) {
      State next = apply_unchecked(r.states[head], task.action(a));
      if (seen.contains(next)) continue;
      if (r.states.size() >= cap) {
        r.truncated = true;
        return r;
      }
      seen.insert(next);
      r.states.push_back(std::move(next));
    }
  }
  return r;
}

}  // namespace trac
