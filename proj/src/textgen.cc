#include "trac/textgen.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>

#include "trac_embedded_data.h"

namespace trac {

namespace {

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

std::string fnv_digest(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Splits a template into literal text and {param} references.
struct Piece {
  bool is_param = false;
  std::string text;  // literal text or parameter name
};

std::vector<Piece> split_template(std::string_view tpl) {
  std::vector<Piece> out;
  std::string literal;
  for (std::size_t i = 0; i < tpl.size(); ++i) {
    if (tpl[i] == '{') {
      std::size_t close = tpl.find('}', i);
      if (close == std::string_view::npos) throw Error("unterminated placeholder in template '" + std::string(tpl) + "'");
      if (!literal.empty()) out.push_back({false, std::move(literal)});
      literal.clear();
      out.push_back({true, lower(tpl.substr(i + 1, close - i - 1))});
      i = close;
    } else {
      literal.push_back(tpl[i]);
    }
  }
  if (!literal.empty()) out.push_back({false, std::move(literal)});
  return out;
}

std::size_t param_index(const std::vector<TypedParam>& params, const std::string& name,
                        std::string_view owner) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].name == name) return i;
  }
  throw Error("template for '" + std::string(owner) + "' uses unknown parameter {" + name + "}");
}

std::string fill(const GroundTask& task, const std::string& tpl, const std::vector<TypedParam>& params,
                 std::span<const ObjectId> args, std::string_view owner) {
  std::string out;
  for (const Piece& piece : split_template(tpl)) {
    if (!piece.is_param) {
      out += piece.text;
    } else {
      out += lower(task.universe().name(args[param_index(params, piece.text, owner)]));
    }
  }
  return out;
}

std::string sentence(std::string clause) {
  if (!clause.empty()) clause[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(clause[0])));
  clause += '.';
  return clause;
}

std::string atom_clause(const GroundTask& task, const TemplateSet& t, AtomId id, bool positive) {
  const GroundAtom& atom = task.atom(id);
  const PredicateSchema& p = task.domain().predicates[atom.predicate];
  return fill(task, t.clause(p.name, positive), p.params, atom.args, p.name);
}

void append(std::string& out, const std::string& part) {
  if (part.empty()) return;
  if (!out.empty()) out += ' ';
  out += part;
}

}  // namespace

// ---------------------------------------------------------------------------
// TemplateSet

TemplateSet TemplateSet::parse(std::string_view text) {
  TemplateSet t;
  t.digest_ = fnv_digest(text);
  std::size_t line_no = 0;
  while (!text.empty()) {
    std::size_t nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error("template line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = lower(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key == "version") {
      t.version_ = value;
    } else if (key == "goal.joiner") {
      t.joiner_ = value;
    } else if (key.rfind("pred.", 0) == 0 || key.rfind("action.", 0) == 0) {
      split_template(value);
      if (!t.entries_.emplace(key, value).second) {
        throw Error("template line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
      }
    } else {
      throw Error("template line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  if (t.joiner_.empty()) throw Error("goal.joiner must not be empty");
  return t;
}

std::string_view TemplateSet::builtin_text() { return embedded::kTemplatesTxt; }

const TemplateSet& TemplateSet::builtin() {
  static const TemplateSet t = [] {
    TemplateSet parsed = parse(builtin_text());
    parsed.check_against(*blocksworld::builtin_domain());
    return parsed;
  }();
  return t;
}

void TemplateSet::check_against(const DomainSpec& d) const {
  std::vector<std::string> problems;
  std::set<std::string> expected;
  for (const PredicateSchema& p : d.predicates) {
    for (const char* polarity : {"pos", "neg"}) {
      std::string key = "pred." + p.name + "." + polarity;
      expected.insert(key);
      auto it = entries_.find(key);
      if (it == entries_.end()) {
        problems.push_back("missing " + key);
        continue;
      }
      for (const Piece& piece : split_template(it->second)) {
        if (!piece.is_param) continue;
        try {
          param_index(p.params, piece.text, p.name);
        } catch (const Error& e) {
          problems.emplace_back(e.what());
        }
      }
    }
  }
  for (const ActionSchema& a : d.actions) {
    std::string key = "action." + a.name;
    expected.insert(key);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      problems.push_back("missing " + key);
      continue;
    }
    for (const Piece& piece : split_template(it->second)) {
      if (!piece.is_param) continue;
      try {
        param_index(a.params, piece.text, a.name);
      } catch (const Error& e) {
        problems.emplace_back(e.what());
      }
    }
  }
  for (const auto& [key, value] : entries_) {
    if (!expected.contains(key)) problems.push_back("template '" + key + "' matches nothing in the domain");
  }
  if (!problems.empty()) {
    std::string msg = "template set does not fit domain '" + d.name + "':";
    for (const std::string& p : problems) msg += "\n  " + p;
    throw Error(msg);
  }
}

const std::string& TemplateSet::clause(std::string_view predicate, bool positive) const {
  std::string key = "pred." + std::string(predicate) + (positive ? ".pos" : ".neg");
  auto it = entries_.find(key);
  if (it == entries_.end()) throw Error("no template " + key);
  return it->second;
}

const std::string& TemplateSet::action(std::string_view name) const {
  std::string key = "action." + std::string(name);
  auto it = entries_.find(key);
  if (it == entries_.end()) throw Error("no template " + key);
  return it->second;
}

// ---------------------------------------------------------------------------
// Rendering

std::string render_state(const GroundTask& task, const TemplateSet& t, std::span<const AtomId> order) {
  std::string out;
  for (AtomId a : order) append(out, sentence(atom_clause(task, t, a, true)));
  return out;
}

std::string render_actions(const GroundTask& task, const TemplateSet& t, std::span<const ActionId> seq) {
  std::string out;
  for (ActionId id : seq) {
    const GroundAction& a = task.action(id);
    const ActionSchema& schema = task.domain().actions[a.schema];
    append(out, sentence(fill(task, t.action(schema.name), schema.params, a.args, schema.name)));
  }
  return out;
}

std::string render_condition(const GroundTask& task, const TemplateSet& t, const Condition& c,
                             ConditionStyle style) {
  std::string out;
  if (style == ConditionStyle::projection) {
    for (const Literal& l : c.literals()) append(out, sentence(atom_clause(task, t, l.atom, l.positive)));
    return out;
  }
  for (const Literal& l : c.literals()) {
    if (!out.empty()) out += " " + t.joiner() + " ";
    out += atom_clause(task, t, l.atom, l.positive);
  }
  return out + ".";
}

RenderedInstance render_instance(const ProblemInstance& p, const TemplateSet& t) {
  const GroundTask& w = p.world;
  std::string state = render_state(w, t, p.initial_state);
  std::string actions = render_actions(w, t, p.actions);
  RenderedInstance r;
  r.label = p.label;
  switch (p.kind) {
    case TaskKind::projection:
      r.context = state;
      append(r.context, actions);
      r.query = render_condition(w, t, p.condition.value(), ConditionStyle::projection);
      break;
    case TaskKind::executability:
      r.context = state;
      r.query = actions;
      break;
    case TaskKind::planning:
      r.context = state;
      append(r.context, render_condition(w, t, p.condition.value(), ConditionStyle::goal));
      r.query = actions;
      break;
    case TaskKind::goal_recognition:
      r.context = state;
      append(r.context, actions);
      r.query = render_condition(w, t, p.condition.value(), ConditionStyle::goal);
      break;
  }
  return r;
}

RenderedInstance render_instance(ProblemInstance& p, SeededRng& rng, const TemplateSet& t) {
  rng.shuffle(std::span<AtomId>(p.initial_state));
  return render_instance(static_cast<const ProblemInstance&>(p), t);
}

LmStyle parse_lm_style(std::string_view text) {
  if (text == "separator") return LmStyle::separator;
  if (text == "concat") return LmStyle::concat;
  if (text == "text2text") return LmStyle::text2text;
  throw Error("unknown LM style '" + std::string(text) + "'");
}

std::string_view to_string(LmStyle style) {
  switch (style) {
    case LmStyle::separator: return "separator";
    case LmStyle::concat: return "concat";
    case LmStyle::text2text: return "text2text";
  }
  return "?";
}

LmExample format_for_lm(const RenderedInstance& r, LmStyle style) {
  switch (style) {
    case LmStyle::separator:
      return {"<s> " + r.context + " </s> " + r.query + " </s>", r.label ? "1" : "0"};
    case LmStyle::concat:
      return {r.context + " " + r.query, r.label ? "1" : "0"};
    case LmStyle::text2text:
      return {r.context + " " + r.query, r.label ? "Yes" : "No"};
  }
  throw Error("bad LM style");
}

// ---------------------------------------------------------------------------
// TextParser

struct TextParser::Pattern {
  std::uint32_t symbol = 0;  // predicate or action schema index
  bool positive = true;
  std::vector<Piece> pieces;
  std::vector<std::size_t> param_of_piece;  // for placeholder pieces
  std::size_t arity = 0;
};

TextParser::TextParser(const GroundTask& task, const TemplateSet& t) : task_(task), joiner_(t.joiner()) {
  const DomainSpec& d = task.domain();
  auto make = [&](std::uint32_t symbol, bool positive, const std::string& tpl,
                  const std::vector<TypedParam>& params, const std::string& owner) {
    Pattern p;
    p.symbol = symbol;
    p.positive = positive;
    p.pieces = split_template(tpl);
    p.arity = params.size();
    for (const Piece& piece : p.pieces) {
      p.param_of_piece.push_back(piece.is_param ? param_index(params, piece.text, owner) : 0);
    }
    return p;
  };
  for (std::uint32_t i = 0; i < d.predicates.size(); ++i) {
    const PredicateSchema& p = d.predicates[i];
    predicate_patterns_.push_back(make(i, true, t.clause(p.name, true), p.params, p.name));
    predicate_patterns_.push_back(make(i, false, t.clause(p.name, false), p.params, p.name));
  }
  for (std::uint32_t i = 0; i < d.actions.size(); ++i) {
    const ActionSchema& a = d.actions[i];
    action_patterns_.push_back(make(i, true, t.action(a.name), a.params, a.name));
  }
}

TextParser::~TextParser() = default;

std::optional<std::vector<ObjectId>> TextParser::match(const Pattern& p, std::string_view s) const {
  std::vector<std::optional<ObjectId>> args(p.arity);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < p.pieces.size(); ++i) {
    const Piece& piece = p.pieces[i];
    if (!piece.is_param) {
      if (s.substr(pos, piece.text.size()) != piece.text) return std::nullopt;
      pos += piece.text.size();
      continue;
    }
    std::size_t end = s.size();
    if (i + 1 < p.pieces.size()) {
      end = s.find(p.pieces[i + 1].text, pos);
      if (end == std::string_view::npos) return std::nullopt;
    }
    std::string_view word = s.substr(pos, end - pos);
    std::optional<ObjectId> obj;
    for (std::uint32_t o = 0; o < task_.object_count(); ++o) {
      if (lower(task_.universe().name(ObjectId{o})) == word) obj = ObjectId{o};
    }
    if (!obj) return std::nullopt;
    auto& slot = args[p.param_of_piece[i]];
    if (slot && *slot != *obj) return std::nullopt;
    slot = obj;
    pos = end;
  }
  if (pos != s.size()) return std::nullopt;
  std::vector<ObjectId> out;
  for (const auto& a : args) {
    if (!a) return std::nullopt;
    out.push_back(*a);
  }
  return out;
}

namespace {

// "A. B. C." -> {"A", "B", "C"}
std::vector<std::string_view> split_sentences(std::string_view text) {
  std::vector<std::string_view> out;
  text = trim(text);
  if (text.empty()) return out;
  if (text.back() != '.') throw Error("text must end with a period");
  text.remove_suffix(1);
  while (true) {
    std::size_t cut = text.find(". ");
    out.push_back(text.substr(0, cut));
    if (cut == std::string_view::npos) break;
    text = text.substr(cut + 2);
  }
  return out;
}

std::string decapitalize(std::string_view s) {
  std::string out(s);
  if (!out.empty()) out[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])));
  return out;
}

}  // namespace

Literal TextParser::parse_clause(std::string_view clause) const {
  std::optional<Literal> found;
  for (const Pattern& p : predicate_patterns_) {
    auto args = match(p, clause);
    if (!args) continue;
    auto atom = task_.find_atom(p.symbol, *args);
    if (!atom) continue;
    if (found) throw Error("ambiguous sentence '" + std::string(clause) + "'");
    found = Literal{*atom, p.positive};
  }
  if (!found) throw Error("unrecognized sentence '" + std::string(clause) + "'");
  return *found;
}

std::vector<AtomId> TextParser::parse_state(std::string_view text) const {
  std::vector<AtomId> out;
  for (std::string_view s : split_sentences(text)) {
    Literal l = parse_clause(decapitalize(s));
    if (!l.positive) throw Error("negated sentence in a state: '" + std::string(s) + "'");
    out.push_back(l.atom);
  }
  return out;
}

ActionSequence TextParser::parse_actions(std::string_view text) const {
  ActionSequence out;
  for (std::string_view s : split_sentences(text)) {
    std::optional<ActionId> found;
    for (const Pattern& p : action_patterns_) {
      auto args = match(p, s);
      if (!args) continue;
      auto id = task_.find_action(p.symbol, *args);
      if (!id) continue;
      if (found) throw Error("ambiguous action sentence '" + std::string(s) + "'");
      found = id;
    }
    if (!found) throw Error("unrecognized action sentence '" + std::string(s) + "'");
    out.push_back(*found);
  }
  return out;
}

Condition TextParser::parse_condition(std::string_view text, ConditionStyle style) const {
  std::vector<Literal> lits;
  if (style == ConditionStyle::projection) {
    for (std::string_view s : split_sentences(text)) lits.push_back(parse_clause(decapitalize(s)));
  } else {
    text = trim(text);
    if (text.empty() || text.back() != '.') throw Error("goal must end with a period");
    text.remove_suffix(1);
    std::string sep = " " + joiner_ + " ";
    while (true) {
      std::size_t cut = text.find(sep);
      lits.push_back(parse_clause(text.substr(0, cut)));
      if (cut == std::string_view::npos) break;
      text = text.substr(cut + sep.size());
    }
  }
  if (lits.size() == 1) return Condition::literal(lits[0]);
  if (lits.size() == 2) return Condition::conjunction(lits[0], lits[1]);
  throw Error("conditions have one or two literals");
}

}  // namespace trac
