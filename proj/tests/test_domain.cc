#include <doctest.h>

#include "trac/blocksworld.h"
#include "trac/domain.h"
#include "trac/error.h"
#include "trac/sexpr.h"

using namespace trac;

namespace {

std::string with_action(const std::string& action) {
  return "(define (domain t) (:requirements :strips :typing) (:types block - object)\n"
         "(:predicates (clear ?x - block) (on ?x - block ?y - block))\n" +
         action + ")";
}

std::string parse_error(const std::string& src) {
  try {
    parse_domain(src);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("s-expressions carry positions and skip comments") {
  auto top = parse_sexprs("; header\n(a (b c)\n  d)");
  REQUIRE(top.size() == 1);
  CHECK(top[0].is_list);
  REQUIRE(top[0].items.size() == 3);
  CHECK(top[0].items[1].items[1].atom == "c");
  CHECK(top[0].items[2].pos.line == 3);
  CHECK(top[0].items[2].pos.column == 3);
  CHECK_THROWS_AS(parse_sexprs("(a (b)"), ParseError);
  CHECK_THROWS_AS(parse_sexprs("a)"), ParseError);
}

TEST_CASE("bundled blocks-world domain") {
  auto d = blocksworld::builtin_domain();
  CHECK(d->name == "blocksworld");
  CHECK(d->requirements == std::vector<std::string>{":strips", ":typing"});
  REQUIRE(d->predicates.size() == 3);
  CHECK(d->predicates[0].name == "clear");
  CHECK(d->predicates[1].arity() == 2);
  CHECK(d->predicates[2].name == "ontable");
  REQUIRE(d->actions.size() == 3);

  const ActionSchema* move = d->find_action("move");
  REQUIRE(move != nullptr);
  CHECK(move->params.size() == 3);
  CHECK(move->precondition.size() == 3);
  CHECK(move->add_list.size() == 2);
  CHECK(move->delete_list.size() == 2);

  const ActionSchema* to_table = d->find_action("movetotable");
  REQUIRE(to_table != nullptr);
  CHECK(to_table->delete_list.size() == 1);
  CHECK(to_table->add_list.size() == 2);

  const ActionSchema* from_table = d->find_action("movefromtable");
  REQUIRE(from_table != nullptr);
  CHECK(from_table->precondition.size() == 3);
  CHECK(from_table->add_list.size() == 1);
  CHECK(from_table->delete_list.size() == 2);

  CHECK(validate_domain(*d).ok());
  CHECK(validate_domain(*d).warnings.empty());
}

TEST_CASE("canonical printing round-trips") {
  auto d = blocksworld::builtin_domain();
  std::string text = to_pddl(*d);
  DomainSpec again = parse_domain(text);
  CHECK(again == *d);
  CHECK(to_pddl(again) == text);
}

TEST_CASE("names are case-insensitive") {
  DomainSpec d = parse_domain(
      "(DEFINE (DOMAIN T) (:REQUIREMENTS :STRIPS) (:PREDICATES (P ?X))"
      "(:ACTION Go :PARAMETERS (?X) :PRECONDITION (P ?X) :EFFECT (NOT (P ?X))))");
  CHECK(d.name == "t");
  CHECK(d.find_action("go") != nullptr);
  CHECK(d.actions[0].delete_list[0].predicate == "p");
  CHECK(validate_domain(d).ok());
}

TEST_CASE("unsupported constructs are rejected with a position") {
  SUBCASE("negated precondition") {
    std::string msg = parse_error(with_action(
        "(:action a :parameters (?x - block) :precondition (not (clear ?x)) :effect (clear ?x))"));
    CHECK(msg.find("negated precondition") != std::string::npos);
    CHECK(msg.find("action 'a'") != std::string::npos);
    CHECK(msg.rfind("3:", 0) == 0);
  }
  SUBCASE("disjunction") {
    std::string msg = parse_error(with_action(
        "(:action a :parameters (?x - block) :precondition (or (clear ?x)) :effect (clear ?x))"));
    CHECK(msg.find("disjunctive") != std::string::npos);
  }
  SUBCASE("requirement") {
    std::string msg = parse_error("(define (domain t) (:requirements :strips :adl))");
    CHECK(msg.find(":adl") != std::string::npos);
  }
  SUBCASE("constants section") {
    std::string msg = parse_error("(define (domain t) (:constants a b))");
    CHECK(msg.find("unsupported section") != std::string::npos);
  }
  SUBCASE("problem file") {
    std::string msg = parse_error("(define (problem p) (:domain t))");
    CHECK(msg.find("problem files") != std::string::npos);
  }
  SUBCASE("arity mismatch names the action") {
    std::string msg = parse_error(with_action(
        "(:action stack :parameters (?x - block) :precondition (on ?x) :effect (clear ?x))"));
    CHECK(msg.find("arity mismatch in action 'stack'") != std::string::npos);
  }
  SUBCASE("unterminated") { CHECK_FALSE(parse_error("(define (domain t)").empty()); }
}

TEST_CASE("validation reports every structural problem") {
  DomainSpec d = parse_domain(
      "(define (domain t) (:requirements :strips :typing)\n"
      "(:types block - object block - object)\n"
      "(:predicates (clear ?x - block) (clear ?y - block))\n"
      "(:action a :parameters (?x - block ?x - block) :precondition (missing ?x)\n"
      "  :effect (and (clear ?z) (not (clear ?z))))\n"
      "(:action b :parameters (?x - widget) :precondition (clear ?x))\n"
      "(:action b :parameters () :effect (and)))");
  ValidationReport r = validate_domain(d);
  CHECK_FALSE(r.ok());
  std::string all = r.str();
  CHECK(all.find("duplicate type") != std::string::npos);
  CHECK(all.find("duplicate predicate") != std::string::npos);
  CHECK(all.find("duplicate parameter ?x") != std::string::npos);
  CHECK(all.find("undeclared predicate 'missing'") != std::string::npos);
  CHECK(all.find("?z is not a parameter") != std::string::npos);
  CHECK(all.find("both add and delete") != std::string::npos);
  CHECK(all.find("undeclared type 'widget'") != std::string::npos);
  CHECK(all.find("duplicate action") != std::string::npos);
  CHECK(all.find("warning: action b") != std::string::npos);
  CHECK_THROWS_AS(load_domain(
                      "(define (domain t) (:predicates (p ?x))"
                      "(:action a :parameters (?x) :precondition (q ?x) :effect (p ?x)))"),
                  Error);
}

TEST_CASE("type mismatch between parameter and predicate") {
  DomainSpec d = parse_domain(
      "(define (domain t) (:requirements :strips :typing) (:types block ball - object)"
      "(:predicates (clear ?x - block))"
      "(:action a :parameters (?x - ball) :precondition (clear ?x) :effect (not (clear ?x))))");
  ValidationReport r = validate_domain(d);
  // Once in the precondition, once in the effect.
  REQUIRE(r.errors.size() == 2);
  for (const auto& e : r.errors) CHECK(e.message.find("type 'ball'") != std::string::npos);
}
