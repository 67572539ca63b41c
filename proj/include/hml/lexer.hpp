#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hml/common.hpp"

namespace hml {

enum class TokenKind {
  // keywords
  Val, Input, From, Output, While, If, Then, Else, Skip, Fun, Bound, Eval, Int, Bool, True, False,
  Reduce, Pow, Array, Parties, Max, Min,
  // literals
  Ident, Num,
  // punctuation
  Colon, Semi, Comma, Dot, At, LParen, RParen, LBrace, RBrace, LBracket, RBracket, Assign,
  // operators
  EqEq, NotEq, Lt, Le, Gt, Ge, Plus, Minus, Star, Slash, Percent, AndAnd, OrOr,
};

const char* token_name(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string text;  // identifier name or numeral digits; empty otherwise
  Position pos;

  friend bool operator==(const Token&, const Token&) = default;
};

class LexError : public Error {
 public:
  LexError(Position pos, const std::string& message);
  Position position() const { return pos_; }

 private:
  Position pos_;
};

// Splits source text into tokens. `// ...` comments run to end of line and
// are dropped.
std::vector<Token> tokenize(std::string_view source);

}  // namespace hml
