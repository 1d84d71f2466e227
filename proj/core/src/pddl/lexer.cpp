#include <cctype>

#include "findplan/error.hpp"
#include "findplan/pddl/parser.hpp"

namespace findplan::pddl {

std::vector<SExpr> read_sexprs(std::string_view text) {
  std::vector<SExpr> top;
  std::vector<SExpr> stack;  // open lists
  int line = 1;
  int column = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const char ch = text[i];
    ++column;
    if (ch == '\n') {
      ++line;
      column = 0;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    if (ch == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (ch == '(') {
      SExpr list;
      list.is_list = true;
      list.line = line;
      list.column = column;
      stack.push_back(std::move(list));
      ++i;
      continue;
    }
    if (ch == ')') {
      if (stack.empty()) throw ParseError("unmatched ')'", line, column);
      SExpr done = std::move(stack.back());
      stack.pop_back();
      (stack.empty() ? top : stack.back().items).push_back(std::move(done));
      ++i;
      continue;
    }
    SExpr tok;
    tok.line = line;
    tok.column = column;
    const std::size_t start = i;
    while (i < text.size()) {
      const char c = text[i];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';') break;
      if (static_cast<unsigned char>(c) < 0x20) throw ParseError("control character in input", line, column);
      tok.token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      ++i;
    }
    column += static_cast<int>(i - start) - 1;
    if (stack.empty()) throw ParseError("token '" + tok.token + "' outside of any list", tok.line, tok.column);
    stack.back().items.push_back(std::move(tok));
  }
  if (!stack.empty()) {
    throw ParseError("unclosed '('", stack.back().line, stack.back().column);
  }
  return top;
}

}  // namespace findplan::pddl
