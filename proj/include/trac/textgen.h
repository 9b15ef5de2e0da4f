#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trac/instance.h"
#include "trac/strips.h"

namespace trac {

/// Sentence templates keyed by predicate/action name. Predicate templates are
/// lowercase clauses ("the {x} block is clear"); `{x}` stands for the schema
/// parameter ?x and renders as the lowercased object name.
class TemplateSet {
 public:
  // `key = value` lines: pred.<name>.pos, pred.<name>.neg, action.<name>,
  // goal.joiner, version. '#' starts a comment line.
  static TemplateSet parse(std::string_view text);
  static const TemplateSet& builtin();
  static std::string_view builtin_text();

  // Every predicate needs .pos and .neg, every action a template. Throws
  // Error naming everything missing or unknown.
  void check_against(const DomainSpec& d) const;

  const std::string& clause(std::string_view predicate, bool positive) const;
  const std::string& action(std::string_view name) const;
  const std::string& joiner() const { return joiner_; }
  const std::string& version() const { return version_; }
  // FNV-1a digest of the source text.
  const std::string& digest() const { return digest_; }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
  std::string joiner_ = "and";
  std::string version_;
  std::string digest_;
};

enum class ConditionStyle { projection, goal };

// "The green block is clear." etc., one sentence per atom, single-space joined.
std::string render_state(const GroundTask& task, const TemplateSet& t, std::span<const AtomId> order);
std::string render_actions(const GroundTask& task, const TemplateSet& t, std::span<const ActionId> seq);
// projection style: one capitalized sentence per literal.
// goal style: lowercase clauses joined by " and ", one terminal period.
std::string render_condition(const GroundTask& task, const TemplateSet& t, const Condition& c,
                             ConditionStyle style);

struct RenderedInstance {
  std::string context;
  std::string query;
  bool label = false;
};

// Uses the instance's recorded display order.
RenderedInstance render_instance(const ProblemInstance& p, const TemplateSet& t = TemplateSet::builtin());
// Draws a fresh display order for the state first.
RenderedInstance render_instance(ProblemInstance& p, SeededRng& rng,
                                 const TemplateSet& t = TemplateSet::builtin());

enum class LmStyle { separator, concat, text2text };
LmStyle parse_lm_style(std::string_view text);
std::string_view to_string(LmStyle style);

struct LmExample {
  std::string input;
  std::string target;
};

/// separator: "<s> context </s> query </s>" -> "0"/"1"
/// concat:    "context query"               -> "0"/"1"
/// text2text: "context query"               -> "No"/"Yes"
LmExample format_for_lm(const RenderedInstance& r, LmStyle style);

/// Template-aware reader that inverts the renderers. Throws Error on any
/// sentence that matches no template or matches ambiguously.
class TextParser {
 public:
  TextParser(const GroundTask& task, const TemplateSet& t);
  ~TextParser();
  TextParser(const TextParser&) = delete;
  TextParser& operator=(const TextParser&) = delete;

  std::vector<AtomId> parse_state(std::string_view text) const;
  ActionSequence parse_actions(std::string_view text) const;
  Condition parse_condition(std::string_view text, ConditionStyle style) const;

 private:
  struct Pattern;
  std::optional<std::vector<ObjectId>> match(const Pattern& p, std::string_view s) const;
  Literal parse_clause(std::string_view clause) const;

  const GroundTask& task_;
  std::vector<Pattern> predicate_patterns_;
  std::vector<Pattern> action_patterns_;
  std::string joiner_;
};

}  // namespace trac
