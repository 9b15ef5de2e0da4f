#include "trac/domain.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "trac/sexpr.h"

namespace trac {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_variable(const SExpr& e) {
  return e.is_atom() && e.atom.size() > 1 && e.atom[0] == '?';
}

const SExpr& expect_list(const SExpr& e, const char* what) {
  if (!e.is_list) throw ParseError(e.pos, std::string("expected ") + what);
  return e;
}

std::string expect_symbol(const SExpr& e, const char* what) {
  if (e.is_list || e.atom.empty()) {
    throw ParseError(e.pos, std::string("expected ") + what);
  }
  return lower(e.atom);
}

// `?a ?b - t ?c` style lists. Untyped trailing entries get "object".
std::vector<TypedParam> parse_typed_list(const std::vector<SExpr>& items,
                                         std::size_t begin, bool variables) {
  std::vector<TypedParam> out;
  std::size_t pending = 0;
  for (std::size_t i = begin; i < items.size(); ++i) {
    const SExpr& e = items[i];
    if (e.is_atom("-")) {
      if (pending == 0) throw ParseError(e.pos, "type marker without names");
      if (i + 1 >= items.size()) throw ParseError(e.pos, "missing type after '-'");
      const SExpr& t = items[++i];
      if (t.is_list) {
        throw ParseError(t.pos, "'either' types are not supported");
      }
      std::string type = lower(t.atom);
      for (std::size_t k = out.size() - pending; k < out.size(); ++k) {
        out[k].type = type;
      }
      pending = 0;
      continue;
    }
    if (e.is_list) throw ParseError(e.pos, "unexpected list in typed list");
    if (variables && !is_variable(e)) {
      throw ParseError(e.pos, "expected a variable, got '" + e.atom + "'");
    }
    if (!variables && e.atom[0] == '?') {
      throw ParseError(e.pos, "unexpected variable '" + e.atom + "'");
    }
    std::string name = lower(variables ? e.atom.substr(1) : e.atom);
    out.push_back({name, "object"});
    ++pending;
  }
  return out;
}

class DomainParser {
 public:
  DomainSpec parse(std::string_view source) {
    std::vector<SExpr> top = parse_sexprs(source);
    if (top.empty()) throw ParseError({}, "empty domain source");
    if (top.size() > 1) {
      throw ParseError(top[1].pos, "trailing expression after domain definition");
    }
    const SExpr& def = top[0];
    if (!def.is_list || def.items.empty() || !def.items[0].is_atom() ||
        lower(def.items[0].atom) != "define") {
      throw ParseError(def.pos, "expected (define ...)");
    }
    if (def.items.size() < 2) throw ParseError(def.pos, "missing (domain <name>)");
    const SExpr& head = expect_list(def.items[1], "(domain <name>)");
    if (head.items.size() != 2 || !head.items[0].is_atom() ||
        lower(head.items[0].atom) != "domain") {
      if (!head.items.empty() && head.items[0].is_atom() &&
          lower(head.items[0].atom) == "problem") {
        throw ParseError(head.pos, "problem files are not supported");
      }
      throw ParseError(head.pos, "expected (domain <name>)");
    }
    d_.name = expect_symbol(head.items[1], "domain name");

    for (std::size_t i = 2; i < def.items.size(); ++i) {
      section(expect_list(def.items[i], "a domain section"));
    }
    return std::move(d_);
  }

 private:
  void section(const SExpr& s) {
    if (s.items.empty() || !s.items[0].is_atom()) {
      throw ParseError(s.pos, "expected a section keyword");
    }
    std::string key = lower(s.items[0].atom);
    if (key == ":requirements") {
      requirements(s);
    } else if (key == ":types") {
      for (const TypedParam& t : parse_typed_list(s.items, 1, false)) {
        if (t.name == "object") continue;
        d_.types.push_back({t.name, t.type});
      }
    } else if (key == ":predicates") {
      for (std::size_t i = 1; i < s.items.size(); ++i) {
        const SExpr& p = expect_list(s.items[i], "a predicate declaration");
        if (p.items.empty()) throw ParseError(p.pos, "empty predicate declaration");
        PredicateSchema schema;
        schema.name = expect_symbol(p.items[0], "predicate name");
        schema.params = parse_typed_list(p.items, 1, true);
        schema.pos = p.pos;
        d_.predicates.push_back(std::move(schema));
      }
    } else if (key == ":action") {
      action(s);
    } else {
      throw ParseError(s.items[0].pos, "unsupported section '" + s.items[0].atom + "'");
    }
  }

  void requirements(const SExpr& s) {
    for (std::size_t i = 1; i < s.items.size(); ++i) {
      std::string flag = expect_symbol(s.items[i], "a requirement flag");
      if (flag != ":strips" && flag != ":typing") {
        throw ParseError(s.items[i].pos, "unsupported requirement '" + flag + "'");
      }
      d_.requirements.push_back(flag);
    }
  }

  void action(const SExpr& s) {
    if (s.items.size() < 2) throw ParseError(s.pos, "missing action name");
    ActionSchema a;
    a.name = expect_symbol(s.items[1], "action name");
    a.pos = s.pos;
    bool seen_params = false;
    for (std::size_t i = 2; i < s.items.size(); i += 2) {
      std::string key = expect_symbol(s.items[i], "an action keyword");
      if (i + 1 >= s.items.size()) {
        throw ParseError(s.items[i].pos, "missing value for " + key);
      }
      const SExpr& value = s.items[i + 1];
      if (key == ":parameters") {
        a.params = parse_typed_list(expect_list(value, "a parameter list").items, 0, true);
        seen_params = true;
      } else if (key == ":precondition") {
        precondition(a, value);
      } else if (key == ":effect") {
        effect(a, value);
      } else {
        throw ParseError(s.items[i].pos, "unsupported action keyword '" + key + "'");
      }
    }
    if (!seen_params) a.params.clear();
    d_.actions.push_back(std::move(a));
  }

  static bool is_connective(const std::string& head) {
    return head == "and" || head == "not" || head == "or" || head == "imply" ||
           head == "exists" || head == "forall" || head == "when" || head == "=";
  }

  void precondition(ActionSchema& a, const SExpr& e) {
    const SExpr& list = expect_list(e, "a precondition");
    if (list.items.empty()) return;
    std::string head = expect_symbol(list.items[0], "a precondition");
    if (head == "and") {
      for (std::size_t i = 1; i < list.items.size(); ++i) {
        a.precondition.push_back(positive_atom(a, list.items[i], "precondition"));
      }
    } else {
      a.precondition.push_back(positive_atom(a, list, "precondition"));
    }
  }

  void effect(ActionSchema& a, const SExpr& e) {
    const SExpr& list = expect_list(e, "an effect");
    if (list.items.empty()) return;
    std::string head = expect_symbol(list.items[0], "an effect");
    auto one = [&](const SExpr& item) {
      const SExpr& l = expect_list(item, "an effect literal");
      if (!l.items.empty() && l.items[0].is_atom() && lower(l.items[0].atom) == "not") {
        if (l.items.size() != 2) throw ParseError(l.pos, "'not' takes one atom");
        a.delete_list.push_back(positive_atom(a, l.items[1], "effect"));
      } else {
        a.add_list.push_back(positive_atom(a, l, "effect"));
      }
    };
    if (head == "and") {
      for (std::size_t i = 1; i < list.items.size(); ++i) one(list.items[i]);
    } else {
      one(list);
    }
  }

  SchemaAtom positive_atom(const ActionSchema& a, const SExpr& e, const char* where) {
    const SExpr& l = expect_list(e, "an atom");
    if (l.items.empty()) throw ParseError(l.pos, "empty atom");
    std::string head = expect_symbol(l.items[0], "a predicate name");
    if (is_connective(head)) {
      std::string what = head == "not" ? "negated " : head == "or" ? "disjunctive " : "'" + head + "' ";
      throw ParseError(l.pos, what + std::string(where) + "s are not supported (action '" +
                                  a.name + "')");
    }
    SchemaAtom atom;
    atom.predicate = head;
    atom.pos = l.pos;
    for (std::size_t i = 1; i < l.items.size(); ++i) {
      const SExpr& arg = l.items[i];
      if (!is_variable(arg)) {
        throw ParseError(arg.pos, "only variables are supported as arguments (action '" +
                                      a.name + "')");
      }
      atom.args.push_back(lower(arg.atom.substr(1)));
    }
    if (const PredicateSchema* p = d_.find_predicate(head)) {
      if (p->arity() != atom.args.size()) {
        throw ParseError(l.pos, "arity mismatch in action '" + a.name + "': predicate '" +
                                    head + "' takes " + std::to_string(p->arity()) +
                                    " arguments, got " + std::to_string(atom.args.size()));
      }
    }
    return atom;
  }

  DomainSpec d_;
};

std::string atom_text(const SchemaAtom& a) {
  std::string s = "(" + a.predicate;
  for (const std::string& v : a.args) s += " ?" + v;
  return s + ")";
}

void typed_list_to(std::ostringstream& os, const std::vector<TypedParam>& params) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) os << ' ';
    os << '?' << params[i].name << " - " << params[i].type;
  }
}

}  // namespace

const PredicateSchema* DomainSpec::find_predicate(std::string_view n) const {
  for (const PredicateSchema& p : predicates) {
    if (p.name == n) return &p;
  }
  return nullptr;
}

const ActionSchema* DomainSpec::find_action(std::string_view n) const {
  for (const ActionSchema& a : actions) {
    if (a.name == n) return &a;
  }
  return nullptr;
}

bool DomainSpec::has_type(std::string_view type) const {
  if (type == "object") return true;
  return std::any_of(types.begin(), types.end(),
                     [&](const TypeDecl& t) { return t.name == type; });
}

bool DomainSpec::is_subtype(std::string_view type, std::string_view ancestor) const {
  std::string current(type);
  for (std::size_t hops = 0; hops <= types.size() + 1; ++hops) {
    if (current == ancestor) return true;
    if (current == "object") return false;
    auto it = std::find_if(types.begin(), types.end(),
                           [&](const TypeDecl& t) { return t.name == current; });
    if (it == types.end()) return false;
    current = it->parent;
  }
  return false;  // cyclic hierarchy
}

std::string ValidationReport::str() const {
  std::ostringstream os;
  for (const Diagnostic& e : errors) os << "error: " << e.location << ": " << e.message << "\n";
  for (const Diagnostic& w : warnings) os << "warning: " << w.location << ": " << w.message << "\n";
  return os.str();
}

DomainSpec parse_domain(std::string_view source) { return DomainParser().parse(source); }

ValidationReport validate_domain(const DomainSpec& d) {
  ValidationReport r;
  auto err = [&](std::string loc, std::string msg) {
    r.errors.push_back({std::move(loc), std::move(msg)});
  };

  std::set<std::string> seen;
  for (const TypeDecl& t : d.types) {
    if (!seen.insert(t.name).second) err("type " + t.name, "duplicate type");
    if (!d.has_type(t.parent)) err("type " + t.name, "undeclared parent type '" + t.parent + "'");
    if (!d.is_subtype(t.name, "object")) err("type " + t.name, "cyclic type hierarchy");
  }

  auto check_params = [&](const std::string& loc, const std::vector<TypedParam>& params) {
    std::set<std::string> names;
    for (const TypedParam& p : params) {
      if (!names.insert(p.name).second) err(loc, "duplicate parameter ?" + p.name);
      if (!d.has_type(p.type)) err(loc, "parameter ?" + p.name + " has undeclared type '" + p.type + "'");
    }
  };

  seen.clear();
  for (const PredicateSchema& p : d.predicates) {
    std::string loc = "predicate " + p.name + " (" + p.pos.str() + ")";
    if (!seen.insert(p.name).second) err(loc, "duplicate predicate");
    check_params(loc, p.params);
  }

  seen.clear();
  for (const ActionSchema& a : d.actions) {
    std::string loc = "action " + a.name + " (" + a.pos.str() + ")";
    if (!seen.insert(a.name).second) err(loc, "duplicate action");
    check_params(loc, a.params);

    auto check_atoms = [&](const std::vector<SchemaAtom>& atoms, const char* part) {
      for (const SchemaAtom& atom : atoms) {
        std::string where = loc + " " + part + " " + atom_text(atom);
        const PredicateSchema* p = d.find_predicate(atom.predicate);
        if (p == nullptr) {
          err(where, "undeclared predicate '" + atom.predicate + "'");
          continue;
        }
        if (p->arity() != atom.args.size()) {
          err(where, "arity mismatch: expected " + std::to_string(p->arity()));
          continue;
        }
        for (std::size_t i = 0; i < atom.args.size(); ++i) {
          auto param = std::find_if(a.params.begin(), a.params.end(),
                                    [&](const TypedParam& tp) { return tp.name == atom.args[i]; });
          if (param == a.params.end()) {
            err(where, "variable ?" + atom.args[i] + " is not a parameter");
          } else if (!d.is_subtype(param->type, p->params[i].type)) {
            err(where, "?" + atom.args[i] + " has type '" + param->type + "', predicate expects '" +
                           p->params[i].type + "'");
          }
        }
      }
    };
    check_atoms(a.precondition, "precondition");
    check_atoms(a.add_list, "add");
    check_atoms(a.delete_list, "delete");

    for (const SchemaAtom& added : a.add_list) {
      if (std::find(a.delete_list.begin(), a.delete_list.end(), added) != a.delete_list.end()) {
        err(loc, "atom " + atom_text(added) + " is in both add and delete lists");
      }
    }
    if (a.add_list.empty() && a.delete_list.empty()) {
      r.warnings.push_back({loc, "action has no effects"});
    }
  }
  return r;
}

std::shared_ptr<const DomainSpec> load_domain(std::string_view source) {
  DomainSpec d = parse_domain(source);
  ValidationReport report = validate_domain(d);
  if (!report.ok()) throw Error("invalid domain '" + d.name + "':\n" + report.str());
  return std::make_shared<const DomainSpec>(std::move(d));
}

std::string to_pddl(const DomainSpec& d) {
  std::ostringstream os;
  os << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    os << "  (:requirements";
    for (const std::string& r : d.requirements) os << ' ' << r;
    os << ")\n";
  }
  if (!d.types.empty()) {
    os << "  (:types";
    for (const TypeDecl& t : d.types) os << ' ' << t.name << " - " << t.parent;
    os << ")\n";
  }
  if (!d.predicates.empty()) {
    os << "  (:predicates";
    for (const PredicateSchema& p : d.predicates) {
      os << "\n    (" << p.name;
      if (!p.params.empty()) os << ' ';
      typed_list_to(os, p.params);
      os << ')';
    }
    os << ")\n";
  }
  for (const ActionSchema& a : d.actions) {
    os << "  (:action " << a.name << "\n    :parameters (";
    typed_list_to(os, a.params);
    os << ")\n    :precondition (and";
    for (const SchemaAtom& atom : a.precondition) os << ' ' << atom_text(atom);
    os << ")\n    :effect (and";
    for (const SchemaAtom& atom : a.add_list) os << ' ' << atom_text(atom);
    for (const SchemaAtom& atom : a.delete_list) os << " (not " << atom_text(atom) << ')';
    os << "))\n";
  }
  os << ")\n";
  return os.str();
}

}  // namespace trac
