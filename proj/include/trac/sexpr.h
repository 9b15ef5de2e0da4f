#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "trac/error.h"

namespace trac {

// A parsed s-expression node: either an atom (symbol) or a list.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  SourcePosition pos;

  bool is_atom() const { return !is_list; }
  bool is_atom(std::string_view text) const;
};

// Parses every top-level expression in `source`. ';' starts a comment that
// runs to end of line. Throws ParseError on unbalanced parentheses.
std::vector<SExpr> parse_sexprs(std::string_view source);

}  // namespace trac
