#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "trac/error.h"

namespace trac {

struct TypedParam {
  std::string name;  // variable without the leading '?'
  std::string type;

  bool operator==(const TypedParam&) const = default;
};

struct PredicateSchema {
  std::string name;
  std::vector<TypedParam> params;
  SourcePosition pos;

  std::size_t arity() const { return params.size(); }
  bool operator==(const PredicateSchema& o) const {
    return name == o.name && params == o.params;
  }
};

// An atom inside an action schema; args are variable names (no '?').
struct SchemaAtom {
  std::string predicate;
  std::vector<std::string> args;
  SourcePosition pos;

  bool operator==(const SchemaAtom& o) const {
    return predicate == o.predicate && args == o.args;
  }
};

struct ActionSchema {
  std::string name;
  std::vector<TypedParam> params;
  std::vector<SchemaAtom> precondition;
  std::vector<SchemaAtom> add_list;
  std::vector<SchemaAtom> delete_list;
  SourcePosition pos;

  bool operator==(const ActionSchema& o) const {
    return name == o.name && params == o.params &&
           precondition == o.precondition && add_list == o.add_list &&
           delete_list == o.delete_list;
  }
};

struct TypeDecl {
  std::string name;
  std::string parent;  // "object" for roots

  bool operator==(const TypeDecl&) const = default;
};

// Typed STRIPS domain. Immutable once built; share it via
// std::shared_ptr<const DomainSpec>.
struct DomainSpec {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<TypeDecl> types;  // the implicit root "object" is not listed
  std::vector<PredicateSchema> predicates;
  std::vector<ActionSchema> actions;

  const PredicateSchema* find_predicate(std::string_view name) const;
  const ActionSchema* find_action(std::string_view name) const;
  bool has_type(std::string_view type) const;
  // True if `type` equals `ancestor` or derives from it.
  bool is_subtype(std::string_view type, std::string_view ancestor) const;

  bool operator==(const DomainSpec& o) const {
    return name == o.name && requirements == o.requirements &&
           types == o.types && predicates == o.predicates &&
           actions == o.actions;
  }
};

struct Diagnostic {
  std::string location;
  std::string message;
};

struct ValidationReport {
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;

  bool ok() const { return errors.empty(); }
  std::string str() const;
};

/// Parses the typed-STRIPS subset: `:strips` and `:typing` requirements,
/// conjunctive preconditions of positive atoms, and effects made of atoms and
/// `(not atom)`. Predicate, action, type and variable names are lowercased.
///
/// Arity is checked against predicates declared earlier in the same source;
/// references to undeclared predicates are left for validate_domain.
DomainSpec parse_domain(std::string_view source);

/// Checks every structural invariant and reports all violations.
ValidationReport validate_domain(const DomainSpec& d);

/// parse_domain + validate_domain; throws Error listing every validation
/// failure.
std::shared_ptr<const DomainSpec> load_domain(std::string_view source);

/// Canonical PDDL rendering. parse_domain(to_pddl(d)) == d.
std::string to_pddl(const DomainSpec& d);

}  // namespace trac
