#pragma once

// Worked examples with known renderings and answers, shared by the unit and
// acceptance tests.

#include <optional>
#include <string>
#include <vector>

#include "trac/instance.h"

namespace trac::fixtures {

struct Golden {
  TaskKind task;
  std::vector<std::string> names;
  std::vector<std::string> state;  // display order
  std::vector<std::string> actions;
  std::optional<std::string> condition;
  std::string context;
  std::string query;
  bool label;
};

inline const std::vector<Golden>& table_examples() {
  static const std::vector<Golden> examples = {
      {TaskKind::projection,
       {"Green", "Red", "Blue"},
       {"onTable(Green)", "clear(Red)", "clear(Blue)", "clear(Green)", "onTable(Red)", "onTable(Blue)"},
       {"moveFromTable(Green, Red)"},
       "on(Blue, Red)",
       "The green block is on the table. The red block is clear. The blue block is clear. "
       "The green block is clear. The red block is on the table. The blue block is on the table. "
       "Jane moves the green block from the table to the red block.",
       "The blue block is on top of the red block.",
       false},
      {TaskKind::executability,
       {"Olive", "Yellow", "Indigo"},
       {"onTable(Olive)", "on(Yellow, Olive)", "clear(Indigo)", "on(Indigo, Yellow)"},
       {"moveToTable(Indigo, Yellow)"},
       std::nullopt,
       "The olive block is on the table. The yellow block is on top of the olive block. "
       "The indigo block is clear. The indigo block is on top of the yellow block.",
       "Jane moves the indigo block from the yellow block onto the table.",
       true},
      // Goals always end with a period.
      {TaskKind::planning,
       {"Blue", "Magenta", "White"},
       {"clear(Blue)", "on(Blue, Magenta)", "on(Magenta, White)", "onTable(White)"},
       {"moveToTable(Blue, Magenta)"},
       "!on(Blue, Magenta)",
       "The blue block is clear. The blue block is on top of the magenta block. "
       "The magenta block is on top of the white block. The white block is on the table. "
       "the blue block is not on top of the magenta block.",
       "Jane moves the blue block from the magenta block onto the table.",
       true},
      {TaskKind::goal_recognition,
       {"Blue", "Magenta", "White"},
       {"clear(Blue)", "on(Blue, Magenta)", "on(Magenta, White)", "onTable(White)"},
       {"moveToTable(Blue, Magenta)"},
       "on(Blue, Magenta)",
       "The blue block is clear. The blue block is on top of the magenta block. "
       "The magenta block is on top of the white block. The white block is on the table. "
       "Jane moves the blue block from the magenta block onto the table.",
       "the blue block is on top of the magenta block.",
       false},
  };
  return examples;
}

// A projection example with a two-literal query, in three model formats.
inline const Golden& lm_example() {
  static const Golden g{
      TaskKind::projection,
      {"Yellow", "Magenta", "Pink", "Gray", "Green"},
      {"onTable(Yellow)", "on(Magenta, Pink)", "clear(Gray)", "onTable(Gray)", "clear(Magenta)",
       "on(Pink, Green)", "onTable(Green)", "clear(Yellow)"},
      {"moveFromTable(Yellow, Gray)"},
      "clear(Green) & !on(Gray, Yellow)",
      "The yellow block is on the table. The magenta block is on top of the pink block. "
      "The gray block is clear. The gray block is on the table. The magenta block is clear. "
      "The pink block is on top of the green block. The green block is on the table. "
      "The yellow block is clear. Jane moves the yellow block from the table to the gray block.",
      "The green block is clear. The gray block is not on top of the yellow block.",
      false};
  return g;
}

inline const std::string kLmSeparatorInput =
    "<s> The yellow block is on the table. The magenta block is on top of the pink block. "
    "The gray block is clear. The gray block is on the table. The magenta block is clear. "
    "The pink block is on top of the green block. The green block is on the table. "
    "The yellow block is clear. Jane moves the yellow block from the table to the gray block. "
    "</s> The green block is clear. The gray block is not on top of the yellow block. </s>";
inline const std::string kLmConcatInput =
    "The yellow block is on the table. The magenta block is on top of the pink block. "
    "The gray block is clear. The gray block is on the table. The magenta block is clear. "
    "The pink block is on top of the green block. The green block is on the table. "
    "The yellow block is clear. Jane moves the yellow block from the table to the gray block. "
    "The green block is clear. The gray block is not on top of the yellow block.";

inline ProblemInstance build(const Golden& g) {
  return make_instance(g.task, g.names, g.state, g.actions, g.condition);
}

}  // namespace trac::fixtures
