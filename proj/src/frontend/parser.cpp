#include "hml/parser.hpp"

#include <set>
#include <utility>

namespace hml {

using namespace ast;

namespace {

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += xs[i];
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::span<const Token> tokens) : toks_(tokens) {}

  Program parse_program() {
    Program prog;
    bool have_header = false;
    if (at(TokenKind::Parties)) {
      have_header = true;
      next();
      std::vector<Party> ps;
      ps.push_back(parse_party());
      while (accept(TokenKind::Comma)) ps.push_back(parse_party());
      expect(TokenKind::Semi);
      prog.declared_parties = OwnerSet(std::move(ps));
    }
    std::set<std::string> names;
    while (!eof()) {
      if (at(TokenKind::Fun)) {
        FuncDef f = parse_function();
        if (!names.insert(f.name).second)
          throw ParseError(f.pos, "duplicate function '" + f.name + "'");
        prog.functions.push_back(std::move(f));
      } else {
        prog.main.stmts.push_back(parse_stmt());
      }
    }
    for (const auto& [pos, party] : owner_refs_) {
      if (!prog.declared_parties.contains(party)) {
        throw ParseError(pos, have_header ? "party " + std::to_string(party) + " is not declared"
                                          : "owner annotations require a 'parties' declaration");
      }
    }
    return prog;
  }

 private:
  std::span<const Token> toks_;
  std::size_t i_ = 0;
  std::vector<std::pair<Position, Party>> owner_refs_;

  bool eof() const { return i_ >= toks_.size(); }
  const Token* peek(std::size_t ahead = 0) const {
    return i_ + ahead < toks_.size() ? &toks_[i_ + ahead] : nullptr;
  }
  bool at(TokenKind k, std::size_t ahead = 0) const {
    const Token* t = peek(ahead);
    return t && t->kind == k;
  }
  Position here() const {
    if (!eof()) return toks_[i_].pos;
    if (toks_.empty()) return {};
    Position p = toks_.back().pos;
    ++p.column;
    return p;
  }
  const Token& next() { return toks_[i_++]; }
  bool accept(TokenKind k) {
    if (!at(k)) return false;
    ++i_;
    return true;
  }
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string found = eof() ? "end of input" : token_name(toks_[i_].kind);
    throw ParseError(here(), std::move(expected), found);
  }
  const Token& expect(TokenKind k) {
    if (!at(k)) fail({token_name(k)});
    return next();
  }
  std::string expect_ident() { return expect(TokenKind::Ident).text; }
  std::int64_t expect_num() { return std::stoll(expect(TokenKind::Num).text); }

  Party parse_party() {
    Position pos = here();
    std::int64_t v = expect_num();
    if (v > 0xFFFFFFFFLL) throw ParseError(pos, "party id out of range");
    return static_cast<Party>(v);
  }

  OwnerSet parse_owner_set() {
    expect(TokenKind::LBrace);
    std::vector<Party> ps;
    do {
      Position pos = here();
      Party p = parse_party();
      owner_refs_.emplace_back(pos, p);
      ps.push_back(p);
    } while (accept(TokenKind::Comma));
    expect(TokenKind::RBrace);
    return OwnerSet(std::move(ps));
  }

  TypeSyntax parse_type(bool allow_owners = true) {
    TypeSyntax t;
    if (accept(TokenKind::Int)) {
      t.base = Atomic::Int;
    } else if (accept(TokenKind::Bool)) {
      t.base = Atomic::Bool;
    } else {
      fail({"INT", "BOOL"});
    }
    if (accept(TokenKind::LBracket)) {
      t.is_array = true;
      if (at(TokenKind::Num)) t.length = expect_num();
      expect(TokenKind::RBracket);
    }
    if (allow_owners && accept(TokenKind::At)) t.owners = parse_owner_set();
    return t;
  }

  FuncDef parse_function() {
    FuncDef f;
    f.pos = here();
    expect(TokenKind::Fun);
    f.name = expect_ident();
    expect(TokenKind::LParen);
    if (!at(TokenKind::RParen)) {
      do {
        Param p;
        p.name = expect_ident();
        expect(TokenKind::Colon);
        p.type = parse_type();
        f.params.push_back(std::move(p));
      } while (accept(TokenKind::Comma));
    }
    expect(TokenKind::RParen);
    expect(TokenKind::Colon);
    f.return_type = parse_type();
    if (accept(TokenKind::Bound)) f.bound = parse_expr();
    f.body = parse_block(/*want_result=*/true);
    return f;
  }

  // '{' item* '}'. With want_result the final item must be an expression.
  Block parse_block(bool want_result) {
    expect(TokenKind::LBrace);
    Block b;
    while (!at(TokenKind::RBrace)) {
      if (eof()) fail({"RBRACE"});
      if (starts_stmt()) {
        Position pos = here();
        if (at(TokenKind::If)) {
          // Either an if-statement or a trailing if-expression.
          next();
          Expr cond = parse_expr();
          if (at(TokenKind::Then)) {
            if (!want_result) fail({"LBRACE"});
            Expr e = finish_if_expr(std::move(cond), pos);
            b.result = Box<Expr>(std::move(e));
            expect(TokenKind::RBrace);
            return b;
          }
          b.stmts.push_back(finish_if_stmt(std::move(cond), pos));
          continue;
        }
        b.stmts.push_back(parse_stmt());
        continue;
      }
      if (!want_result) fail({"statement"});
      b.result = Box<Expr>(parse_expr());
      expect(TokenKind::RBrace);
      return b;
    }
    if (want_result) fail({"expression"});
    next();
    return b;
  }

  bool starts_stmt() const {
    if (eof()) return false;
    switch (toks_[i_].kind) {
      case TokenKind::Skip:
      case TokenKind::Val:
      case TokenKind::Output:
      case TokenKind::While:
      case TokenKind::If:
        return true;
      case TokenKind::Input:
        return at(TokenKind::Ident, 1);
      case TokenKind::Ident:
        return at(TokenKind::Assign, 1) ||
               (at(TokenKind::Dot, 1) && at(TokenKind::Ident, 2) && peek(2)->text == "update");
      default:
        return false;
    }
  }

  Stmt parse_stmt() {
    Position pos = here();
    const Token* t = peek();
    if (!t) fail({"statement"});
    switch (t->kind) {
      case TokenKind::Skip:
        next();
        expect(TokenKind::Semi);
        return Stmt{Skip{}, pos};
      case TokenKind::Val: {
        next();
        ValDecl d{expect_ident(), {}, make_int(0)};
        expect(TokenKind::Colon);
        d.type = parse_type();
        expect(TokenKind::Assign);
        d.init = parse_expr();
        expect(TokenKind::Semi);
        return Stmt{std::move(d), pos};
      }
      case TokenKind::Input: {
        // input x : T from p;   sugar for   val x : T@{p} := input T from p;
        next();
        std::string name = expect_ident();
        expect(TokenKind::Colon);
        Position tpos = here();
        TypeSyntax ty = parse_type(/*allow_owners=*/false);
        expect(TokenKind::From);
        Position ppos = here();
        Party p = parse_party();
        owner_refs_.emplace_back(ppos, p);
        expect(TokenKind::Semi);
        TypeSyntax declared = ty;
        declared.owners = OwnerSet{p};
        return Stmt{ValDecl{std::move(name), declared, Expr{Input{p, ty}, tpos}}, pos};
      }
      case TokenKind::Output: {
        next();
        Expr e = parse_expr();
        expect(TokenKind::Semi);
        return Stmt{Output{std::move(e)}, pos};
      }
      case TokenKind::While: {
        next();
        expect(TokenKind::LParen);
        std::string var = expect_ident();
        expect(TokenKind::Lt);
        Expr bound = parse_additive();
        expect(TokenKind::RParen);
        Block body = parse_block(false);
        return Stmt{While{std::move(var), std::move(bound), std::move(body)}, pos};
      }
      case TokenKind::If: {
        next();
        Expr cond = parse_expr();
        if (at(TokenKind::Then)) fail({"LBRACE"});
        return finish_if_stmt(std::move(cond), pos);
      }
      case TokenKind::Ident: {
        std::string name = next().text;
        if (accept(TokenKind::Assign)) {
          Expr e = parse_expr();
          expect(TokenKind::Semi);
          return Stmt{Assign{std::move(name), std::move(e)}, pos};
        }
        if (accept(TokenKind::Dot)) {
          const Token& m = expect(TokenKind::Ident);
          if (m.text != "update") throw ParseError(m.pos, {"update"}, m.text);
          expect(TokenKind::LParen);
          Expr idx = parse_expr();
          expect(TokenKind::Comma);
          Expr val = parse_expr();
          expect(TokenKind::RParen);
          expect(TokenKind::Semi);
          return Stmt{ArrUpdate{std::move(name), std::move(idx), std::move(val)}, pos};
        }
        fail({"ASSIGN", "DOT"});
      }
      default:
        fail({"statement"});
    }
  }

  Stmt finish_if_stmt(Expr cond, Position pos) {
    Block then_block = parse_block(false);
    std::optional<Block> else_block;
    if (accept(TokenKind::Else)) {
      if (at(TokenKind::If)) {
        Position ipos = here();
        next();
        Expr c2 = parse_expr();
        if (at(TokenKind::Then)) fail({"LBRACE"});
        Block nested;
        nested.stmts.push_back(finish_if_stmt(std::move(c2), ipos));
        else_block = std::move(nested);
      } else {
        else_block = parse_block(false);
      }
    }
    return Stmt{IfStmt{std::move(cond), std::move(then_block), std::move(else_block)}, pos};
  }

  Expr finish_if_expr(Expr cond, Position pos) {
    expect(TokenKind::Then);
    Block t = parse_block(true);
    expect(TokenKind::Else);
    Block e = parse_block(true);
    return Expr{If{std::move(cond), std::move(t), std::move(e)}, pos};
  }

  // Precedence climbing, lowest first.
  Expr parse_expr() { return parse_or(); }

  Expr parse_or() {
    Expr lhs = parse_and();
    while (at(TokenKind::OrOr)) {
      Position pos = next().pos;
      lhs = make_binop(BinaryOp::Or, std::move(lhs), parse_and(), pos);
    }
    return lhs;
  }
  Expr parse_and() {
    Expr lhs = parse_equality();
    while (at(TokenKind::AndAnd)) {
      Position pos = next().pos;
      lhs = make_binop(BinaryOp::And, std::move(lhs), parse_equality(), pos);
    }
    return lhs;
  }
  Expr parse_equality() {
    Expr lhs = parse_relational();
    for (;;) {
      BinaryOp op;
      if (at(TokenKind::EqEq)) op = BinaryOp::Eq;
      else if (at(TokenKind::NotEq)) op = BinaryOp::Neq;
      else return lhs;
      Position pos = next().pos;
      lhs = make_binop(op, std::move(lhs), parse_relational(), pos);
    }
  }
  Expr parse_relational() {
    Expr lhs = parse_additive();
    for (;;) {
      BinaryOp op;
      if (at(TokenKind::Lt)) op = BinaryOp::Lt;
      else if (at(TokenKind::Le)) op = BinaryOp::Leq;
      else if (at(TokenKind::Gt)) op = BinaryOp::Gt;
      else if (at(TokenKind::Ge)) op = BinaryOp::Geq;
      else return lhs;
      Position pos = next().pos;
      lhs = make_binop(op, std::move(lhs), parse_additive(), pos);
    }
  }
  Expr parse_additive() {
    Expr lhs = parse_multiplicative();
    for (;;) {
      BinaryOp op;
      if (at(TokenKind::Plus)) op = BinaryOp::Add;
      else if (at(TokenKind::Minus)) op = BinaryOp::Sub;
      else return lhs;
      Position pos = next().pos;
      lhs = make_binop(op, std::move(lhs), parse_multiplicative(), pos);
    }
  }
  Expr parse_multiplicative() {
    Expr lhs = parse_primary();
    for (;;) {
      BinaryOp op;
      if (at(TokenKind::Star)) op = BinaryOp::Mul;
      else if (at(TokenKind::Slash)) op = BinaryOp::Div;
      else if (at(TokenKind::Percent)) op = BinaryOp::Mod;
      else return lhs;
      Position pos = next().pos;
      lhs = make_binop(op, std::move(lhs), parse_primary(), pos);
    }
  }

  Expr parse_primary() {
    Position pos = here();
    const Token* t = peek();
    if (!t) fail({"expression"});
    switch (t->kind) {
      case TokenKind::Num:
        return make_int(expect_num(), pos);
      case TokenKind::Minus:
        next();
        return make_int(-expect_num(), pos);
      case TokenKind::True:
        next();
        return make_bool(true, pos);
      case TokenKind::False:
        next();
        return make_bool(false, pos);
      case TokenKind::LParen: {
        next();
        Expr e = parse_expr();
        expect(TokenKind::RParen);
        return e;
      }
      case TokenKind::Eval: {
        next();
        expect(TokenKind::LParen);
        OwnerSet o = parse_owner_set();
        expect(TokenKind::Comma);
        Expr e = parse_expr();
        expect(TokenKind::RParen);
        return Expr{Eval{std::move(o), std::move(e)}, pos};
      }
      case TokenKind::If: {
        next();
        Expr cond = parse_expr();
        return finish_if_expr(std::move(cond), pos);
      }
      case TokenKind::Pow: {
        next();
        expect(TokenKind::LParen);
        Expr base = parse_expr();
        expect(TokenKind::Comma);
        std::int64_t n = expect_num();
        expect(TokenKind::RParen);
        return Expr{Pow{std::move(base), n}, pos};
      }
      case TokenKind::Reduce: {
        next();
        expect(TokenKind::LParen);
        ReduceOp op;
        if (accept(TokenKind::Plus)) op = ReduceOp::Add;
        else if (accept(TokenKind::Star)) op = ReduceOp::Mul;
        else if (accept(TokenKind::Max)) op = ReduceOp::Max;
        else if (accept(TokenKind::Min)) op = ReduceOp::Min;
        else fail({"PLUS", "STAR", "MAX", "MIN"});
        expect(TokenKind::Comma);
        Expr arr = parse_expr();
        expect(TokenKind::RParen);
        return Expr{Reduce{op, std::move(arr)}, pos};
      }
      case TokenKind::Input: {
        next();
        TypeSyntax ty = parse_type(false);
        expect(TokenKind::From);
        Position ppos = here();
        Party p = parse_party();
        owner_refs_.emplace_back(ppos, p);
        return Expr{Input{p, ty}, pos};
      }
      case TokenKind::LBracket: {
        next();
        ArrLit lit;
        if (!at(TokenKind::RBracket)) {
          do {
            lit.elements.push_back(parse_expr());
          } while (accept(TokenKind::Comma));
        }
        expect(TokenKind::RBracket);
        return Expr{std::move(lit), pos};
      }
      case TokenKind::Array: {
        next();
        expect(TokenKind::LParen);
        Expr n = parse_expr();
        expect(TokenKind::RParen);
        return Expr{ArrNew{std::move(n)}, pos};
      }
      case TokenKind::Ident: {
        std::string name = next().text;
        if (accept(TokenKind::LParen)) {
          Call c{std::move(name), {}};
          if (!at(TokenKind::RParen)) {
            do {
              c.args.push_back(parse_expr());
            } while (accept(TokenKind::Comma));
          }
          expect(TokenKind::RParen);
          return Expr{std::move(c), pos};
        }
        if (accept(TokenKind::LBracket)) {
          Expr idx = parse_expr();
          expect(TokenKind::RBracket);
          return Expr{ArrIndex{std::move(name), std::move(idx)}, pos};
        }
        if (at(TokenKind::Dot) && at(TokenKind::Ident, 1)) {
          const std::string& member = peek(1)->text;
          if (member == "length") {
            i_ += 2;
            return Expr{ArrLen{std::move(name)}, pos};
          }
          if (member == "slice") {
            i_ += 2;
            expect(TokenKind::LParen);
            Expr from = parse_expr();
            expect(TokenKind::Comma);
            Expr until = parse_expr();
            expect(TokenKind::RParen);
            return Expr{ArrSlice{std::move(name), std::move(from), std::move(until)}, pos};
          }
        }
        return make_var(std::move(name), pos);
      }
      default:
        fail({"expression"});
    }
  }
};

}  // namespace

ParseError::ParseError(Position pos, std::vector<std::string> expected, std::string found)
    : Error(to_string(pos) + ": expected " + join(expected) + ", found " + found),
      pos_(pos),
      expected_(std::move(expected)) {}

ParseError::ParseError(Position pos, const std::string& message)
    : Error(to_string(pos) + ": " + message), pos_(pos) {}

Program parse(std::span<const Token> tokens) { return Parser(tokens).parse_program(); }

Program parse_source(std::string_view source) {
  auto toks = tokenize(source);
  return parse(toks);
}

}  // namespace hml

// ---------------------------------------------------------------------------
// Pretty printer. Output re-parses to a structurally equal AST: binary
// operators are fully parenthesized and negative literals are wrapped.

namespace hml {

namespace {

class Printer {
 public:
  std::string out;

  void program(const Program& p) {
    if (!p.declared_parties.empty()) {
      out += "parties ";
      bool first = true;
      for (Party q : p.declared_parties) {
        if (!first) out += ", ";
        first = false;
        out += std::to_string(q);
      }
      out += ";\n";
    }
    for (const auto& f : p.functions) function(f);
    for (const auto& s : p.main.stmts) stmt(s);
  }

  void function(const FuncDef& f) {
    line("fun " + f.name + "(");
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      if (i) out += ", ";
      out += f.params[i].name + " : " + type(f.params[i].type);
    }
    out += ") : " + type(f.return_type);
    if (f.bound) out += " bound " + expr(**f.bound);
    out += " ";
    out += block(f.body);
    out += "\n";
  }

  static std::string type(const TypeSyntax& t) {
    std::string s = t.base == Atomic::Int ? "int" : "bool";
    if (t.is_array) s += t.length ? "[" + std::to_string(*t.length) + "]" : "[]";
    if (t.owners) s += "@" + to_string(*t.owners);
    return s;
  }

  std::string expr(const Expr& e) {
    return std::visit(
        overloaded{
            [](const IntLit& x) {
              return x.value < 0 ? "(" + std::to_string(x.value) + ")" : std::to_string(x.value);
            },
            [](const BoolLit& x) { return std::string(x.value ? "true" : "false"); },
            [](const Var& x) { return x.name; },
            [&](const Eval& x) {
              return "eval(" + to_string(x.audience) + ", " + expr(*x.value) + ")";
            },
            [&](const BinOp& x) {
              return "(" + expr(*x.lhs) + " " + spelling(x.op) + " " + expr(*x.rhs) + ")";
            },
            [&](const If& x) {
              return "if " + expr(*x.cond) + " then " + block(x.then_block) + " else " +
                     block(x.else_block);
            },
            [&](const Call& x) { return x.callee + "(" + list(x.args) + ")"; },
            [&](const ArrIndex& x) { return x.array + "[" + expr(*x.index) + "]"; },
            [&](const ArrSlice& x) {
              return x.array + ".slice(" + expr(*x.from) + ", " + expr(*x.until) + ")";
            },
            [](const ArrLen& x) { return x.array + ".length"; },
            [&](const Reduce& x) {
              return std::string("reduce(") + spelling(x.op) + ", " + expr(*x.array) + ")";
            },
            [&](const Pow& x) {
              return "pow(" + expr(*x.base) + ", " + std::to_string(x.exponent) + ")";
            },
            [](const Input& x) {
              return "input " + type(x.type) + " from " + std::to_string(x.party);
            },
            [&](const ArrLit& x) { return "[" + list(x.elements) + "]"; },
            [&](const ArrNew& x) { return "array(" + expr(*x.length) + ")"; },
        },
        e.node);
  }

 private:
  int depth_ = 0;

  void line(const std::string& s) { out += std::string(2 * depth_, ' ') + s; }

  std::string list(const std::vector<Expr>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) s += ", ";
      s += expr(xs[i]);
    }
    return s;
  }

  // Renders "{ ... }" starting at the current column; the closing brace is
  // indented to the current depth and no trailing newline is written.
  std::string block(const Block& b) {
    std::string saved = std::move(out);
    out.clear();
    out += "{\n";
    ++depth_;
    for (const auto& s : b.stmts) stmt(s);
    if (b.result) {
      line(expr(**b.result));
      out += "\n";
    }
    --depth_;
    line("}");
    std::string text = std::move(out);
    out = std::move(saved);
    return text;
  }

  std::string condition(const Expr& c) {
    std::string s = expr(c);
    return std::holds_alternative<BinOp>(c.node) ? s : "(" + s + ")";
  }

  void stmt(const Stmt& s) {
    std::visit(
        overloaded{
            [&](const Skip&) { line("skip;\n"); },
            [&](const ValDecl& d) {
              if (const auto* in = std::get_if<Input>(&d.init->node)) {
                TypeSyntax bare = d.type;
                bare.owners.reset();
                if (!in->type.owners && bare == in->type && d.type.owners &&
                    *d.type.owners == OwnerSet{in->party}) {
                  line("input " + d.name + " : " + type(in->type) + " from " +
                       std::to_string(in->party) + ";\n");
                  return;
                }
              }
              line("val " + d.name + " : " + type(d.type) + " := " + expr(*d.init) + ";\n");
            },
            [&](const Assign& a) { line(a.name + " := " + expr(*a.value) + ";\n"); },
            [&](const While& w) {
              line("while (" + w.var + " < " + expr(*w.bound) + ") " + block(w.body) + "\n");
            },
            [&](const IfStmt& i) {
              std::string text = "if " + condition(*i.cond) + " " + block(i.then_block);
              if (i.else_block) text += " else " + block(*i.else_block);
              line(text + "\n");
            },
            [&](const ArrUpdate& u) {
              line(u.array + ".update(" + expr(*u.index) + ", " + expr(*u.value) + ");\n");
            },
            [&](const Output& o) { line("output " + expr(*o.value) + ";\n"); },
        },
        s.node);
  }
};

}  // namespace

std::string pretty_print(const Program& program) {
  Printer p;
  p.program(program);
  return p.out;
}

std::string pretty_print(const Expr& expr) { return Printer().expr(expr); }

std::string pretty_print(const TypeSyntax& type) { return Printer::type(type); }

}  // namespace hml
