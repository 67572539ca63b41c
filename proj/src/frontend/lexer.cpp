#include "hml/lexer.hpp"

#include <cctype>
#include <unordered_map>

namespace hml {

namespace {

const std::unordered_map<std::string_view, TokenKind>& keywords() {
  static const std::unordered_map<std::string_view, TokenKind> table = {
      {"val", TokenKind::Val},       {"input", TokenKind::Input},   {"from", TokenKind::From},
      {"output", TokenKind::Output}, {"while", TokenKind::While},   {"if", TokenKind::If},
      {"then", TokenKind::Then},     {"else", TokenKind::Else},     {"skip", TokenKind::Skip},
      {"fun", TokenKind::Fun},       {"bound", TokenKind::Bound},   {"eval", TokenKind::Eval},
      {"int", TokenKind::Int},       {"bool", TokenKind::Bool},     {"true", TokenKind::True},
      {"false", TokenKind::False},   {"reduce", TokenKind::Reduce}, {"pow", TokenKind::Pow},
      {"array", TokenKind::Array},   {"parties", TokenKind::Parties}, {"max", TokenKind::Max},
      {"min", TokenKind::Min},
  };
  return table;
}

}  // namespace

const char* token_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Val: return "VAL";
    case TokenKind::Input: return "INPUT";
    case TokenKind::From: return "FROM";
    case TokenKind::Output: return "OUTPUT";
    case TokenKind::While: return "WHILE";
    case TokenKind::If: return "IF";
    case TokenKind::Then: return "THEN";
    case TokenKind::Else: return "ELSE";
    case TokenKind::Skip: return "SKIP";
    case TokenKind::Fun: return "FUN";
    case TokenKind::Bound: return "BOUND";
    case TokenKind::Eval: return "EVAL";
    case TokenKind::Int: return "INT";
    case TokenKind::Bool: return "BOOL";
    case TokenKind::True: return "TRUE";
    case TokenKind::False: return "FALSE";
    case TokenKind::Reduce: return "REDUCE";
    case TokenKind::Pow: return "POW";
    case TokenKind::Array: return "ARRAY";
    case TokenKind::Parties: return "PARTIES";
    case TokenKind::Max: return "MAX";
    case TokenKind::Min: return "MIN";
    case TokenKind::Ident: return "IDENT";
    case TokenKind::Num: return "NUM";
    case TokenKind::Colon: return "COLON";
    case TokenKind::Semi: return "SEMI";
    case TokenKind::Comma: return "COMMA";
    case TokenKind::Dot: return "DOT";
    case TokenKind::At: return "AT";
    case TokenKind::LParen: return "LPAREN";
    case TokenKind::RParen: return "RPAREN";
    case TokenKind::LBrace: return "LBRACE";
    case TokenKind::RBrace: return "RBRACE";
    case TokenKind::LBracket: return "LBRACKET";
    case TokenKind::RBracket: return "RBRACKET";
    case TokenKind::Assign: return "ASSIGN";
    case TokenKind::EqEq: return "EQEQ";
    case TokenKind::NotEq: return "NOTEQ";
    case TokenKind::Lt: return "LT";
    case TokenKind::Le: return "LE";
    case TokenKind::Gt: return "GT";
    case TokenKind::Ge: return "GE";
    case TokenKind::Plus: return "PLUS";
    case TokenKind::Minus: return "MINUS";
    case TokenKind::Star: return "STAR";
    case TokenKind::Slash: return "SLASH";
    case TokenKind::Percent: return "PERCENT";
    case TokenKind::AndAnd: return "ANDAND";
    case TokenKind::OrOr: return "OROR";
  }
  return "?";
}

LexError::LexError(Position pos, const std::string& message)
    : Error(to_string(pos) + ": " + message), pos_(pos) {}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  Position pos{1, 1};

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
  };
  auto emit = [&](TokenKind kind, std::size_t len, std::string text = {}) {
    out.push_back(Token{kind, std::move(text), pos});
    advance(len);
  };

  while (i < src.size()) {
    const char c = src[i];
    const char next = i + 1 < src.size() ? src[i + 1] : '\0';
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && next == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      std::string_view word = src.substr(i, j - i);
      auto kw = keywords().find(word);
      if (kw != keywords().end())
        emit(kw->second, word.size());
      else
        emit(TokenKind::Ident, word.size(), std::string(word));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j - i > 18) throw LexError(pos, "integer literal too long");
      emit(TokenKind::Num, j - i, std::string(src.substr(i, j - i)));
      continue;
    }
    switch (c) {
      case ':':
        if (next == '=') emit(TokenKind::Assign, 2);
        else emit(TokenKind::Colon, 1);
        continue;
      case ';': emit(TokenKind::Semi, 1); continue;
      case ',': emit(TokenKind::Comma, 1); continue;
      case '.': emit(TokenKind::Dot, 1); continue;
      case '@': emit(TokenKind::At, 1); continue;
      case '(': emit(TokenKind::LParen, 1); continue;
      case ')': emit(TokenKind::RParen, 1); continue;
      case '{': emit(TokenKind::LBrace, 1); continue;
      case '}': emit(TokenKind::RBrace, 1); continue;
      case '[': emit(TokenKind::LBracket, 1); continue;
      case ']': emit(TokenKind::RBracket, 1); continue;
      case '+': emit(TokenKind::Plus, 1); continue;
      case '-': emit(TokenKind::Minus, 1); continue;
      case '*': emit(TokenKind::Star, 1); continue;
      case '/': emit(TokenKind::Slash, 1); continue;
      case '%': emit(TokenKind::Percent, 1); continue;
      case '<':
        if (next == '=') emit(TokenKind::Le, 2);
        else emit(TokenKind::Lt, 1);
        continue;
      case '>':
        if (next == '=') emit(TokenKind::Ge, 2);
        else emit(TokenKind::Gt, 1);
        continue;
      case '=':
        if (next == '=') {
          emit(TokenKind::EqEq, 2);
          continue;
        }
        break;
      case '!':
        if (next == '=') {
          emit(TokenKind::NotEq, 2);
          continue;
        }
        break;
      case '&':
        if (next == '&') {
          emit(TokenKind::AndAnd, 2);
          continue;
        }
        break;
      case '|':
        if (next == '|') {
          emit(TokenKind::OrOr, 2);
          continue;
        }
        break;
      default:
        break;
    }
    throw LexError(pos, std::string("illegal character '") + c + "'");
  }
  return out;
}

}  // namespace hml
