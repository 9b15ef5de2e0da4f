#include "trac/sexpr.h"

#include <cctype>

namespace trac {

bool SExpr::is_atom(std::string_view text) const {
  return !is_list && atom == text;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view src) : src_(src) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_space();
    while (i_ < src_.size()) {
      out.push_back(read());
      skip_space();
    }
    return out;
  }

 private:
  SExpr read() {
    SourcePosition start = pos_;
    char c = src_[i_];
    if (c == ')') throw ParseError(start, "unexpected ')'");
    if (c == '(') {
      advance();
      SExpr list;
      list.is_list = true;
      list.pos = start;
      skip_space();
      while (true) {
        if (i_ >= src_.size()) throw ParseError(start, "unterminated list");
        if (src_[i_] == ')') {
          advance();
          return list;
        }
        list.items.push_back(read());
        skip_space();
      }
    }
    SExpr atom;
    atom.pos = start;
    while (i_ < src_.size() && !is_delim(src_[i_])) {
      unsigned char ch = static_cast<unsigned char>(src_[i_]);
      if (ch < 0x20 || ch == 0x7f) {
        throw ParseError(pos_, "invalid character in symbol");
      }
      atom.atom.push_back(src_[i_]);
      advance();
    }
    return atom;
  }

  static bool is_delim(char c) {
    return c == '(' || c == ')' || c == ';' ||
           std::isspace(static_cast<unsigned char>(c));
  }

  void skip_space() {
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (c == ';') {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (src_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++i_;
  }

  std::string_view src_;
  std::size_t i_ = 0;
  SourcePosition pos_;
};

}  // namespace

std::vector<SExpr> parse_sexprs(std::string_view source) {
  return Reader(source).read_all();
}

}  // namespace trac
