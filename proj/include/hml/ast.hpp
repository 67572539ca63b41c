#pragma once

// Abstract syntax of the `.hml` language.
//
// Equality on every node is structural: source positions are carried for
// diagnostics but ignored by operator==, so a program and its pretty-printed
// re-parse compare equal.

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "hml/common.hpp"

namespace hml::ast {

enum class Atomic { Int, Bool };

// Written type: `int`, `bool@{1}`, `int[4]@{0,1}`, `int[]`.
struct TypeSyntax {
  Atomic base = Atomic::Int;
  bool is_array = false;
  std::optional<std::int64_t> length;  // arrays only; required for inputs
  std::optional<OwnerSet> owners;      // absent => plaintext

  friend bool operator==(const TypeSyntax&, const TypeSyntax&) = default;
};

enum class BinaryOp { Eq, Neq, Add, Sub, Mul, Div, Mod, Lt, Leq, Gt, Geq, And, Or };
enum class ReduceOp { Add, Mul, Max, Min };

const char* spelling(BinaryOp op);
const char* spelling(ReduceOp op);
bool is_comparison(BinaryOp op);

struct Expr;
struct Stmt;

// `{ stmt* [expr] }`. Function bodies and if-expression arms carry a result.
struct Block {
  std::vector<Stmt> stmts;
  std::optional<Box<Expr>> result;

  friend bool operator==(const Block&, const Block&) = default;
};

struct IntLit {
  std::int64_t value;
  friend bool operator==(const IntLit&, const IntLit&) = default;
};
struct BoolLit {
  bool value;
  friend bool operator==(const BoolLit&, const BoolLit&) = default;
};
struct Var {
  std::string name;
  friend bool operator==(const Var&, const Var&) = default;
};
// eval(o, e): declassify e to the audience o.
struct Eval {
  OwnerSet audience;
  Box<Expr> value;
  friend bool operator==(const Eval&, const Eval&) = default;
};
struct BinOp {
  BinaryOp op;
  Box<Expr> lhs;
  Box<Expr> rhs;
  friend bool operator==(const BinOp&, const BinOp&) = default;
};
struct If {
  Box<Expr> cond;
  Block then_block;
  Block else_block;
  friend bool operator==(const If&, const If&) = default;
};
struct Call {
  std::string callee;
  std::vector<Expr> args;
  friend bool operator==(const Call&, const Call&) = default;
};
struct ArrIndex {
  std::string array;
  Box<Expr> index;
  friend bool operator==(const ArrIndex&, const ArrIndex&) = default;
};
// a.slice(from, until), both plaintext.
struct ArrSlice {
  std::string array;
  Box<Expr> from;
  Box<Expr> until;
  friend bool operator==(const ArrSlice&, const ArrSlice&) = default;
};
struct ArrLen {
  std::string array;
  friend bool operator==(const ArrLen&, const ArrLen&) = default;
};
struct Reduce {
  ReduceOp op;
  Box<Expr> array;
  friend bool operator==(const Reduce&, const Reduce&) = default;
};
struct Pow {
  Box<Expr> base;
  std::int64_t exponent;
  friend bool operator==(const Pow&, const Pow&) = default;
};
// `input T from p`; only valid as a declaration initializer.
struct Input {
  Party party;
  TypeSyntax type;
  friend bool operator==(const Input&, const Input&) = default;
};
// `[e1, ..., en]`
struct ArrLit {
  std::vector<Expr> elements;
  friend bool operator==(const ArrLit&, const ArrLit&) = default;
};
// `array(n)`: n zeros, n plaintext.
struct ArrNew {
  Box<Expr> length;
  friend bool operator==(const ArrNew&, const ArrNew&) = default;
};

struct Expr {
  using Node = std::variant<IntLit, BoolLit, Var, Eval, BinOp, If, Call, ArrIndex, ArrSlice, ArrLen,
                            Reduce, Pow, Input, ArrLit, ArrNew>;
  Node node;
  Position pos;

  friend bool operator==(const Expr& a, const Expr& b) { return a.node == b.node; }
};

struct Skip {
  friend bool operator==(const Skip&, const Skip&) = default;
};
struct ValDecl {
  std::string name;
  TypeSyntax type;
  Box<Expr> init;
  friend bool operator==(const ValDecl&, const ValDecl&) = default;
};
struct Assign {
  std::string name;
  Box<Expr> value;
  friend bool operator==(const Assign&, const Assign&) = default;
};
// while (var < bound) { body }
struct While {
  std::string var;
  Box<Expr> bound;
  Block body;
  friend bool operator==(const While&, const While&) = default;
};
struct IfStmt {
  Box<Expr> cond;
  Block then_block;
  std::optional<Block> else_block;
  friend bool operator==(const IfStmt&, const IfStmt&) = default;
};
// name.update(index, value);
struct ArrUpdate {
  std::string array;
  Box<Expr> index;
  Box<Expr> value;
  friend bool operator==(const ArrUpdate&, const ArrUpdate&) = default;
};
struct Output {
  Box<Expr> value;
  friend bool operator==(const Output&, const Output&) = default;
};

struct Stmt {
  using Node = std::variant<Skip, ValDecl, Assign, While, IfStmt, ArrUpdate, Output>;
  Node node;
  Position pos;

  friend bool operator==(const Stmt& a, const Stmt& b) { return a.node == b.node; }
};

struct Param {
  std::string name;
  TypeSyntax type;
  friend bool operator==(const Param&, const Param&) = default;
};

struct FuncDef {
  std::string name;
  std::vector<Param> params;
  TypeSyntax return_type;
  std::optional<Box<Expr>> bound;
  Block body;
  Position pos;

  friend bool operator==(const FuncDef& a, const FuncDef& b) {
    return a.name == b.name && a.params == b.params && a.return_type == b.return_type &&
           a.bound == b.bound && a.body == b.body;
  }
};

struct Program {
  OwnerSet declared_parties;
  std::vector<FuncDef> functions;
  Block main;

  const FuncDef* find_function(const std::string& name) const;

  friend bool operator==(const Program&, const Program&) = default;
};

// Convenience constructors used by tests and generators.
Expr make_int(std::int64_t v, Position pos = {});
Expr make_bool(bool v, Position pos = {});
Expr make_var(std::string name, Position pos = {});
Expr make_binop(BinaryOp op, Expr lhs, Expr rhs, Position pos = {});

// True if `e` (or anything under it) calls `callee`.
bool calls(const Expr& e, const std::string& callee);
bool calls(const Block& b, const std::string& callee);

// Pre-order walk over every expression, descending into nested blocks.
void for_each_expr(const Expr& e, const std::function<void(const Expr&)>& f);
void for_each_expr(const Block& b, const std::function<void(const Expr&)>& f);

// Pre-order walk over statements of the block and nested statement blocks
// (while bodies, if branches). Expression blocks are not entered.
void for_each_stmt(const Block& b, const std::function<void(const Stmt&)>& f);

// Names targeted by `x := e` or `x.update(...)` under the block.
std::set<std::string> assigned_names(const Block& b);

}  // namespace hml::ast
