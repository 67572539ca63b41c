#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hml/ast.hpp"
#include "hml/lexer.hpp"

namespace hml {

class ParseError : public Error {
 public:
  ParseError(Position pos, std::vector<std::string> expected, std::string found);
  ParseError(Position pos, const std::string& message);

  Position position() const { return pos_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  Position pos_;
  std::vector<std::string> expected_;
};

// Parses a token stream into a Program. Stops at the first error.
ast::Program parse(std::span<const Token> tokens);

// tokenize + parse.
ast::Program parse_source(std::string_view source);

// Canonical source text. parse_source(pretty_print(p)) == p.
std::string pretty_print(const ast::Program& program);
std::string pretty_print(const ast::Expr& expr);
std::string pretty_print(const ast::TypeSyntax& type);

}  // namespace hml
