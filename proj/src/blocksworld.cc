#include "trac/blocksworld.h"

#include <algorithm>
#include <bit>
#include <cctype>
#include <numeric>
#include <map>
#include <mutex>
#include <set>

#include "trac_embedded_data.h"

namespace trac::blocksworld {

std::string_view builtin_pddl() { return embedded::kBlocksworldPddl; }

std::shared_ptr<const DomainSpec> builtin_domain() {
  static const std::shared_ptr<const DomainSpec> domain = load_domain(builtin_pddl());
  return domain;
}

SymbolNames symbol_names() {
  return {{"ontable", "onTable"}, {"movetotable", "moveToTable"}, {"movefromtable", "moveFromTable"}};
}

void BlockConfiguration::normalize() {
  std::sort(towers.begin(), towers.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

std::size_t BlockConfiguration::block_count() const {
  std::size_t n = 0;
  for (const auto& t : towers) n += t.size();
  return n;
}

unsigned __int128 count_configurations(std::size_t m) {
  using u128 = unsigned __int128;
  if (m > 20) throw Error("configuration count overflows beyond 20 blocks");
  u128 prev = 1;  // a(0)
  u128 cur = 1;   // a(1)
  if (m == 0) return prev;
  for (std::size_t n = 1; n < m; ++n) {
    u128 next = (2 * static_cast<u128>(n) + 1) * cur - static_cast<u128>(n - 1) * n * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

using u128 = unsigned __int128;

u128 factorial(std::size_t n) {
  u128 r = 1;
  for (std::size_t i = 2; i <= n; ++i) r *= i;
  return r;
}

u128 binomial(std::size_t n, std::size_t k) {
  u128 r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Unsigned Lah number: configurations of n labeled blocks in exactly k towers.
u128 lah(std::size_t n, std::size_t k) {
  return binomial(n - 1, k - 1) * (factorial(n) / factorial(k));
}

}  // namespace

BlockConfiguration sample_configuration(std::size_t m, SeededRng& rng) {
  if (m == 0) throw Error("need at least one block");
  u128 total = count_configurations(m);
  u128 r = rng.below(total);
  std::size_t k = 1;
  for (; k <= m; ++k) {
    u128 w = lah(m, k);
    if (r < w) break;
    r -= w;
  }

  std::vector<ObjectId> perm(m);
  for (std::uint32_t i = 0; i < m; ++i) perm[i] = ObjectId{i};
  rng.shuffle(std::span<ObjectId>(perm));

  // k - 1 distinct cut points among the m - 1 gaps (partial Fisher-Yates).
  std::vector<std::size_t> gaps(m - 1);
  std::iota(gaps.begin(), gaps.end(), std::size_t{1});
  for (std::size_t i = 0; i + 1 < k; ++i) {
    std::size_t j = i + rng.below(static_cast<std::uint64_t>(gaps.size() - i));
    std::swap(gaps[i], gaps[j]);
  }
  std::vector<std::size_t> cuts(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(k - 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(m);

  BlockConfiguration c;
  std::size_t start = 0;
  for (std::size_t cut : cuts) {
    c.towers.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(start),
                          perm.begin() + static_cast<std::ptrdiff_t>(cut));
    start = cut;
  }
  c.normalize();
  return c;
}

namespace {

struct Predicates {
  std::uint32_t clear, on, ontable;
};

Predicates predicates(const GroundTask& task) {
  const DomainSpec& d = task.domain();
  auto idx = [&](std::string_view name) {
    const PredicateSchema* p = d.find_predicate(name);
    if (p == nullptr) throw Error("domain lacks blocks-world predicate '" + std::string(name) + "'");
    return static_cast<std::uint32_t>(p - d.predicates.data());
  };
  return {idx("clear"), idx("on"), idx("ontable")};
}

AtomId require_atom(const GroundTask& task, std::uint32_t pred, std::initializer_list<ObjectId> args) {
  std::vector<ObjectId> a(args);
  auto id = task.find_atom(pred, a);
  if (!id) throw Error("missing blocks-world atom");
  return *id;
}

}  // namespace

bool satisfiable(const GroundTask& task, const Condition& g) {
  // A satisfying state exists iff one exists over the mentioned blocks plus
  // one witness per negative literal (a block on x, or the block x sits on);
  // every other block can be taken out of its tower without changing a
  // literal. So it suffices to search placements of at most 6 blocks.
  Predicates p = predicates(task);
  std::vector<std::uint32_t> mentioned;
  auto local = [&](ObjectId o) {
    std::uint32_t b = index(o);
    auto it = std::find(mentioned.begin(), mentioned.end(), b);
    if (it != mentioned.end()) return static_cast<int>(it - mentioned.begin());
    mentioned.push_back(b);
    return static_cast<int>(mentioned.size() - 1);
  };
  struct Lit {
    std::uint32_t predicate;
    int x, y;
    bool positive;
  };
  std::vector<Lit> lits;
  std::size_t witnesses = 0;
  for (const Literal& l : g.literals()) {
    const GroundAtom& a = task.atom(l.atom);
    int x = local(a.args[0]);
    int y = a.args.size() > 1 ? local(a.args[1]) : x;
    lits.push_back({a.predicate, x, y, l.positive});
    if (!l.positive) ++witnesses;
  }
  const int k = static_cast<int>(std::min(task.object_count(), mentioned.size() + witnesses));
  if (k < static_cast<int>(mentioned.size())) return false;

  std::vector<int> below(static_cast<std::size_t>(k), -1);
  auto holds = [&] {
    for (const Lit& l : lits) {
      bool v;
      if (l.predicate == p.on) {
        v = below[l.x] == l.y;
      } else if (l.predicate == p.ontable) {
        v = below[l.x] < 0;
      } else {
        v = std::find(below.begin(), below.end(), l.x) == below.end();
      }
      if (v != l.positive) return false;
    }
    return true;
  };
  auto legal = [&] {
    for (int b = 0; b < k; ++b) {
      if (below[b] == b) return false;
      for (int c = b + 1; c < k; ++c) {
        if (below[b] >= 0 && below[b] == below[c]) return false;
      }
      int steps = 0;
      for (int cur = below[b]; cur >= 0; cur = below[cur]) {
        if (++steps > k) return false;
      }
    }
    return true;
  };
  // Odometer over below[i] in {-1, 0, ..., k-1}.
  while (true) {
    if (legal() && holds()) return true;
    int i = 0;
    while (i < k && below[i] == k - 1) below[i++] = -1;
    if (i == k) return false;
    ++below[i];
  }
}

Heuristic goal_heuristic(const GroundTask& task, const Condition& g) {
  if (!satisfiable(task, g)) return [](const State&) { return kUnreachableCost; };
  const std::size_t m = task.object_count();
  if (m > 32) throw Error("goal_heuristic supports at most 32 blocks");
  Predicates p = predicates(task);
  struct OnAtom {
    AtomId atom;
    std::uint32_t x, y;
  };
  std::vector<OnAtom> on_atoms;
  for (std::uint32_t x = 0; x < m; ++x) {
    for (std::uint32_t y = 0; y < m; ++y) {
      if (x != y) on_atoms.push_back({require_atom(task, p.on, {ObjectId{x}, ObjectId{y}}), x, y});
    }
  }
  struct Goal {
    std::uint32_t predicate, x, y;
    bool positive;
  };
  std::vector<Goal> goals;
  for (const Literal& l : g.literals()) {
    const GroundAtom& a = task.atom(l.atom);
    std::uint32_t x = index(a.args[0]);
    std::uint32_t y = a.args.size() > 1 ? index(a.args[1]) : x;
    goals.push_back({a.predicate, x, y, l.positive});
  }

  return [=](const State& s) -> std::uint32_t {
    std::int32_t below[32];
    std::uint32_t above[32];
    for (std::size_t b = 0; b < m; ++b) {
      below[b] = -1;
      above[b] = 0;
    }
    for (const OnAtom& o : on_atoms) {
      if (s.contains(o.atom)) below[o.x] = static_cast<std::int32_t>(o.y);
    }
    for (std::size_t b = 0; b < m; ++b) {
      std::size_t steps = 0;
      for (std::int32_t cur = below[b]; cur >= 0 && steps < m; cur = below[cur], ++steps) {
        above[cur] |= 1U << b;
      }
    }
    std::uint32_t must_move = 0;
    bool needs_some_move = false;
    for (const Goal& gl : goals) {
      const std::uint32_t self = 1U << gl.x;
      if (gl.predicate == p.clear) {
        if (gl.positive) {
          must_move |= above[gl.x];
        } else if (above[gl.x] == 0) {
          needs_some_move = true;
        }
      } else if (gl.predicate == p.ontable) {
        if ((below[gl.x] < 0) != gl.positive) must_move |= above[gl.x] | self;
      } else {
        bool holds = below[gl.x] == static_cast<std::int32_t>(gl.y);
        if (gl.positive && !holds) must_move |= above[gl.x] | above[gl.y] | self;
        if (!gl.positive && holds) must_move |= above[gl.x] | self;
      }
    }
    auto h = static_cast<std::uint32_t>(std::popcount(must_move));
    return std::max<std::uint32_t>(h, needs_some_move ? 1 : 0);
  };
}

State configuration_to_state(const GroundTask& task, const BlockConfiguration& c) {
  Predicates p = predicates(task);
  State s = task.empty_state();
  for (const auto& tower : c.towers) {
    if (tower.empty()) throw Error("empty tower");
    s.insert(require_atom(task, p.ontable, {tower.front()}));
    for (std::size_t i = 1; i < tower.size(); ++i) {
      s.insert(require_atom(task, p.on, {tower[i], tower[i - 1]}));
    }
    s.insert(require_atom(task, p.clear, {tower.back()}));
  }
  return s;
}

std::vector<std::string> physical_violations(const GroundTask& task, const State& s) {
  Predicates p = predicates(task);
  const std::size_t m = task.object_count();
  std::vector<int> below(m, -1);
  std::vector<int> supports(m, 0);
  std::vector<bool> on_table(m, false);
  std::vector<bool> clear(m, false);
  std::vector<std::string> out;
  auto name = [&](std::size_t b) { return task.universe().name(ObjectId{static_cast<std::uint32_t>(b)}); };

  for (AtomId a : s.atoms()) {
    const GroundAtom& atom = task.atom(a);
    if (atom.predicate == p.on) {
      std::size_t x = index(atom.args[0]);
      std::size_t y = index(atom.args[1]);
      if (x == y) {
        out.push_back(name(x) + " is on itself");
        continue;
      }
      if (below[x] >= 0) out.push_back(name(x) + " is on two blocks");
      below[x] = static_cast<int>(y);
      ++supports[y];
    } else if (atom.predicate == p.ontable) {
      on_table[index(atom.args[0])] = true;
    } else if (atom.predicate == p.clear) {
      clear[index(atom.args[0])] = true;
    }
  }
  for (std::size_t b = 0; b < m; ++b) {
    bool on_block = below[b] >= 0;
    if (on_block == on_table[b]) {
      out.push_back(name(b) + (on_block ? " is both on a block and on the table"
                                        : " is neither on a block nor on the table"));
    }
    if (supports[b] > 1) out.push_back(name(b) + " has more than one block on it");
    if (clear[b] != (supports[b] == 0)) {
      out.push_back(name(b) + (clear[b] ? " is clear but supports a block" : " is not clear but nothing is on it"));
    }
  }
  for (std::size_t b = 0; b < m; ++b) {
    std::size_t steps = 0;
    for (int cur = static_cast<int>(b); cur >= 0 && steps <= m; cur = below[static_cast<std::size_t>(cur)]) ++steps;
    if (steps > m) {
      out.push_back("on-relation has a cycle through " + name(b));
      break;
    }
  }
  return out;
}

BlockConfiguration state_to_configuration(const GroundTask& task, const State& s) {
  std::vector<std::string> bad = physical_violations(task, s);
  if (!bad.empty()) throw Error("illegal blocks-world state: " + bad.front());
  Predicates p = predicates(task);
  const std::size_t m = task.object_count();
  std::vector<int> above(m, -1);
  std::vector<std::uint32_t> bottoms;
  for (AtomId a : s.atoms()) {
    const GroundAtom& atom = task.atom(a);
    if (atom.predicate == p.on) above[index(atom.args[1])] = static_cast<int>(index(atom.args[0]));
    if (atom.predicate == p.ontable) bottoms.push_back(index(atom.args[0]));
  }
  BlockConfiguration c;
  for (std::uint32_t b : bottoms) {
    std::vector<ObjectId> tower;
    for (int cur = static_cast<int>(b); cur >= 0; cur = above[static_cast<std::size_t>(cur)]) {
      tower.push_back(ObjectId{static_cast<std::uint32_t>(cur)});
    }
    c.towers.push_back(std::move(tower));
  }
  c.normalize();
  return c;
}

std::string_view to_string(PoolKind kind) { return kind == PoolKind::standard ? "standard" : "unseen"; }

PoolKind parse_pool_kind(std::string_view text) {
  if (text == "standard") return PoolKind::standard;
  if (text == "unseen") return PoolKind::unseen;
  throw Error("unknown name pool '" + std::string(text) + "'");
}

NamePool NamePool::parse(std::string_view text) {
  NamePool pool;
  std::vector<std::string>* section = nullptr;
  std::size_t line_no = 0;
  while (!text.empty()) {
    std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    if (line.empty()) continue;
    if (line == "[standard]") {
      section = &pool.standard;
    } else if (line == "[unseen]") {
      section = &pool.unseen;
    } else if (section == nullptr) {
      throw Error("name pool line " + std::to_string(line_no) + ": name outside a section");
    } else {
      for (char c : line) {
        if (!std::islower(static_cast<unsigned char>(c))) {
          throw Error("name pool line " + std::to_string(line_no) + ": names are single lowercase words");
        }
      }
      section->emplace_back(line);
    }
  }
  std::set<std::string> all;
  for (const auto* names : {&pool.standard, &pool.unseen}) {
    if (names->size() < 10) throw Error("each name pool needs at least 10 names");
    for (const std::string& n : *names) {
      if (!all.insert(n).second) throw Error("name '" + n + "' appears twice across pools");
    }
  }
  return pool;
}

std::string_view NamePool::builtin_text() { return embedded::kNamesTxt; }

const NamePool& NamePool::builtin() {
  static const NamePool pool = parse(builtin_text());
  return pool;
}

std::string capitalize(std::string_view word) {
  std::string s(word);
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::vector<std::string> assign_names(std::size_t m, PoolKind kind, SeededRng& rng, const NamePool& pool) {
  const std::vector<std::string>& names = pool.get(kind);
  if (m > names.size()) {
    throw Error("name pool exhausted: need " + std::to_string(m) + " names, pool '" +
                std::string(to_string(kind)) + "' has " + std::to_string(names.size()));
  }
  std::vector<std::size_t> idx(names.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::vector<std::string> out;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t j = i + rng.below(static_cast<std::uint64_t>(idx.size() - i));
    std::swap(idx[i], idx[j]);
    out.push_back(capitalize(names[idx[i]]));
  }
  return out;
}

std::string swap_pool_name(std::string_view name, const NamePool& pool) {
  std::string key(name);
  for (char& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  auto find_in = [&](const std::vector<std::string>& from, const std::vector<std::string>& to)
      -> std::optional<std::string> {
    auto it = std::find(from.begin(), from.end(), key);
    if (it == from.end()) return std::nullopt;
    auto i = static_cast<std::size_t>(it - from.begin());
    if (i >= to.size()) throw Error("no counterpart for '" + key + "' in the other pool");
    return capitalize(to[i]);
  };
  if (auto s = find_in(pool.standard, pool.unseen)) return *s;
  if (auto s = find_in(pool.unseen, pool.standard)) return *s;
  throw Error("name '" + std::string(name) + "' is in neither pool");
}

ObjectUniverse make_universe(std::span<const std::string> names) {
  std::vector<ObjectInfo> objects;
  for (const std::string& n : names) objects.push_back({n, "block"});
  return ObjectUniverse(std::move(objects));
}

GroundTask make_task(std::span<const std::string> names) {
  // Grounding depends only on the block count; reuse it across name sets.
  static std::mutex mu;
  static std::map<std::size_t, GroundTask> cache;
  std::unique_lock lock(mu);
  auto it = cache.find(names.size());
  if (it == cache.end()) {
    it = cache.emplace(names.size(), GroundTask(builtin_domain(), make_universe(names), symbol_names())).first;
    return it->second;
  }
  GroundTask base = it->second;
  lock.unlock();
  return base.with_universe(make_universe(names));
}

GroundTask make_task(std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m; ++i) names.push_back("B" + std::to_string(i));
  return make_task(names);
}

}  // namespace trac::blocksworld
