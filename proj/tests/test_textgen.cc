#include <doctest.h>

#include "fixtures.h"
#include "trac/blocksworld.h"
#include "trac/error.h"
#include "trac/textgen.h"

using namespace trac;

TEST_CASE("worked examples render byte-exactly") {
  for (const fixtures::Golden& g : fixtures::table_examples()) {
    CAPTURE(to_string(g.task));
    ProblemInstance p = fixtures::build(g);
    RenderedInstance r = render_instance(p);
    CHECK(r.context == g.context);
    CHECK(r.query == g.query);
    CHECK(p.label == g.label);
    CHECK(r.label == g.label);
  }
}

TEST_CASE("model input formats") {
  const fixtures::Golden& g = fixtures::lm_example();
  ProblemInstance p = fixtures::build(g);
  RenderedInstance r = render_instance(p);
  REQUIRE(r.context == g.context);
  REQUIRE(r.query == g.query);
  CHECK_FALSE(p.label);
  LmExample sep = format_for_lm(r, LmStyle::separator);
  CHECK(sep.input == fixtures::kLmSeparatorInput);
  CHECK(sep.target == "0");
  LmExample cat = format_for_lm(r, LmStyle::concat);
  CHECK(cat.input == fixtures::kLmConcatInput);
  CHECK(cat.target == "0");
  LmExample t5 = format_for_lm(r, LmStyle::text2text);
  CHECK(t5.input == fixtures::kLmConcatInput);
  CHECK(t5.target == "No");
  CHECK(format_for_lm({"a.", "b.", true}, LmStyle::text2text).target == "Yes");
  CHECK(format_for_lm({"a.", "b.", true}, LmStyle::separator).target == "1");
  CHECK(parse_lm_style("concat") == LmStyle::concat);
  CHECK_THROWS_AS(parse_lm_style("bert"), Error);
}

TEST_CASE("condition styles") {
  GroundTask t = blocksworld::make_task(std::vector<std::string>{"Blue", "Magenta"});
  const TemplateSet& ts = TemplateSet::builtin();
  Condition c = t.parse_condition("!onTable(Blue) & clear(Magenta)");
  CHECK(render_condition(t, ts, c, ConditionStyle::projection) ==
        "The blue block is not on the table. The magenta block is clear.");
  CHECK(render_condition(t, ts, c, ConditionStyle::goal) ==
        "the blue block is not on the table and the magenta block is clear.");
  CHECK(render_condition(t, ts, t.parse_condition("!clear(Blue)"), ConditionStyle::goal) ==
        "the blue block is not clear.");
}

TEST_CASE("text parser inverts the renderers") {
  GroundTask t = blocksworld::make_task(5);
  GroundTask named = t.with_universe(blocksworld::make_universe(
      std::vector<std::string>{"Red", "Green", "Blue", "Light", "Gray"}));
  const TemplateSet& ts = TemplateSet::builtin();
  TextParser parser(named, ts);
  SeededRng rng(17);
  for (int i = 0; i < 200; ++i) {
    State s = blocksworld::configuration_to_state(named, blocksworld::sample_configuration(5, rng));
    std::vector<AtomId> order = s.atoms();
    rng.shuffle(std::span<AtomId>(order));
    CHECK(parser.parse_state(render_state(named, ts, order)) == order);

    ActionSequence seq;
    for (int k = 0; k < 3; ++k) seq.push_back(ActionId{static_cast<std::uint32_t>(rng.below(named.actions().size()))});
    CHECK(parser.parse_actions(render_actions(named, ts, seq)) == seq);

    const auto& pool = named.distinct_atoms();
    Literal a{pool[rng.below(pool.size())], rng.coin()};
    Literal b{pool[rng.below(pool.size())], rng.coin()};
    Condition c = a.atom == b.atom ? Condition::literal(a) : Condition::conjunction(a, b);
    for (ConditionStyle style : {ConditionStyle::projection, ConditionStyle::goal}) {
      CHECK(parser.parse_condition(render_condition(named, ts, c, style), style) == c);
    }
  }
  CHECK_THROWS_AS(parser.parse_state("The red block is floating."), Error);
  CHECK_THROWS_AS(parser.parse_state("The purple block is clear."), Error);
}

TEST_CASE("template files") {
  TemplateSet t = TemplateSet::parse(TemplateSet::builtin_text());
  CHECK(t.clause("on", false) == "the {x} block is not on top of the {y} block");
  CHECK(t.action("movetotable") == "Jane moves the {x} block from the {y} block onto the table");
  CHECK(t.joiner() == "and");
  CHECK(t.digest() == TemplateSet::builtin().digest());
  CHECK_NOTHROW(t.check_against(*blocksworld::builtin_domain()));

  TemplateSet partial = TemplateSet::parse("version = 1\npred.clear.pos = the {x} block is clear\n");
  try {
    partial.check_against(*blocksworld::builtin_domain());
    FAIL("expected missing templates to be reported");
  } catch (const Error& e) {
    std::string msg = e.what();
    CHECK(msg.find("pred.clear.neg") != std::string::npos);
    CHECK(msg.find("action.move") != std::string::npos);
  }
  CHECK_THROWS_AS(TemplateSet::parse("no equals sign here\n"), Error);
}

TEST_CASE("fresh display order is a permutation") {
  ProblemInstance p = fixtures::build(fixtures::lm_example());
  std::vector<AtomId> before = p.initial_state;
  SeededRng rng(4);
  RenderedInstance r = render_instance(p, rng);
  std::vector<AtomId> after = p.initial_state;
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  CHECK(before == after);
  CHECK(r.query == fixtures::lm_example().query);
}
