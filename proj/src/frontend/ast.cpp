#include "hml/ast.hpp"

namespace hml::ast {

const char* spelling(BinaryOp op) {
  switch (op) {
    case BinaryOp::Eq: return "==";
    case BinaryOp::Neq: return "!=";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Leq: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Geq: return ">=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

const char* spelling(ReduceOp op) {
  switch (op) {
    case ReduceOp::Add: return "+";
    case ReduceOp::Mul: return "*";
    case ReduceOp::Max: return "max";
    case ReduceOp::Min: return "min";
  }
  return "?";
}

bool is_comparison(BinaryOp op) {
  switch (op) {
    case BinaryOp::Eq:
    case BinaryOp::Neq:
    case BinaryOp::Lt:
    case BinaryOp::Leq:
    case BinaryOp::Gt:
    case BinaryOp::Geq:
      return true;
    default:
      return false;
  }
}

const FuncDef* Program::find_function(const std::string& name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

Expr make_int(std::int64_t v, Position pos) { return Expr{IntLit{v}, pos}; }
Expr make_bool(bool v, Position pos) { return Expr{BoolLit{v}, pos}; }
Expr make_var(std::string name, Position pos) { return Expr{Var{std::move(name)}, pos}; }
Expr make_binop(BinaryOp op, Expr lhs, Expr rhs, Position pos) {
  return Expr{BinOp{op, std::move(lhs), std::move(rhs)}, pos};
}

namespace {

bool calls_stmt(const Stmt& s, const std::string& callee) {
  return std::visit(
      overloaded{
          [](const Skip&) { return false; },
          [&](const ValDecl& d) { return calls(*d.init, callee); },
          [&](const Assign& a) { return calls(*a.value, callee); },
          [&](const While& w) { return calls(*w.bound, callee) || calls(w.body, callee); },
          [&](const IfStmt& i) {
            return calls(*i.cond, callee) || calls(i.then_block, callee) ||
                   (i.else_block && calls(*i.else_block, callee));
          },
          [&](const ArrUpdate& u) { return calls(*u.index, callee) || calls(*u.value, callee); },
          [&](const Output& o) { return calls(*o.value, callee); },
      },
      s.node);
}

}  // namespace

bool calls(const Block& b, const std::string& callee) {
  for (const auto& s : b.stmts)
    if (calls_stmt(s, callee)) return true;
  return b.result && calls(**b.result, callee);
}

bool calls(const Expr& e, const std::string& callee) {
  return std::visit(
      overloaded{
          [](const IntLit&) { return false; },
          [](const BoolLit&) { return false; },
          [](const Var&) { return false; },
          [&](const Eval& x) { return calls(*x.value, callee); },
          [&](const BinOp& x) { return calls(*x.lhs, callee) || calls(*x.rhs, callee); },
          [&](const If& x) {
            return calls(*x.cond, callee) || calls(x.then_block, callee) ||
                   calls(x.else_block, callee);
          },
          [&](const Call& x) {
            if (x.callee == callee) return true;
            for (const auto& a : x.args)
              if (calls(a, callee)) return true;
            return false;
          },
          [&](const ArrIndex& x) { return calls(*x.index, callee); },
          [&](const ArrSlice& x) { return calls(*x.from, callee) || calls(*x.until, callee); },
          [](const ArrLen&) { return false; },
          [&](const Reduce& x) { return calls(*x.array, callee); },
          [&](const Pow& x) { return calls(*x.base, callee); },
          [](const Input&) { return false; },
          [&](const ArrLit& x) {
            for (const auto& a : x.elements)
              if (calls(a, callee)) return true;
            return false;
          },
          [&](const ArrNew& x) { return calls(*x.length, callee); },
      },
      e.node);
}

namespace {

void walk_block(const Block& b, const std::function<void(const Expr&)>& f);

void walk_stmt(const Stmt& s, const std::function<void(const Expr&)>& f) {
  std::visit(overloaded{
                 [](const Skip&) {},
                 [&](const ValDecl& d) { for_each_expr(*d.init, f); },
                 [&](const Assign& a) { for_each_expr(*a.value, f); },
                 [&](const While& w) {
                   for_each_expr(*w.bound, f);
                   walk_block(w.body, f);
                 },
                 [&](const IfStmt& i) {
                   for_each_expr(*i.cond, f);
                   walk_block(i.then_block, f);
                   if (i.else_block) walk_block(*i.else_block, f);
                 },
                 [&](const ArrUpdate& u) {
                   for_each_expr(*u.index, f);
                   for_each_expr(*u.value, f);
                 },
                 [&](const Output& o) { for_each_expr(*o.value, f); },
             },
             s.node);
}

void walk_block(const Block& b, const std::function<void(const Expr&)>& f) {
  for (const auto& s : b.stmts) walk_stmt(s, f);
  if (b.result) for_each_expr(**b.result, f);
}

}  // namespace

void for_each_expr(const Expr& e, const std::function<void(const Expr&)>& f) {
  f(e);
  std::visit(overloaded{
                 [&](const Eval& x) { for_each_expr(*x.value, f); },
                 [&](const BinOp& x) {
                   for_each_expr(*x.lhs, f);
                   for_each_expr(*x.rhs, f);
                 },
                 [&](const If& x) {
                   for_each_expr(*x.cond, f);
                   walk_block(x.then_block, f);
                   walk_block(x.else_block, f);
                 },
                 [&](const Call& x) {
                   for (const auto& a : x.args) for_each_expr(a, f);
                 },
                 [&](const ArrIndex& x) { for_each_expr(*x.index, f); },
                 [&](const ArrSlice& x) {
                   for_each_expr(*x.from, f);
                   for_each_expr(*x.until, f);
                 },
                 [&](const Reduce& x) { for_each_expr(*x.array, f); },
                 [&](const Pow& x) { for_each_expr(*x.base, f); },
                 [&](const ArrLit& x) {
                   for (const auto& a : x.elements) for_each_expr(a, f);
                 },
                 [&](const ArrNew& x) { for_each_expr(*x.length, f); },
                 [](const auto&) {},
             },
             e.node);
}

void for_each_expr(const Block& b, const std::function<void(const Expr&)>& f) {
  walk_block(b, f);
}

void for_each_stmt(const Block& b, const std::function<void(const Stmt&)>& f) {
  for (const auto& s : b.stmts) {
    f(s);
    if (const auto* w = std::get_if<While>(&s.node)) {
      for_each_stmt(w->body, f);
    } else if (const auto* i = std::get_if<IfStmt>(&s.node)) {
      for_each_stmt(i->then_block, f);
      if (i->else_block) for_each_stmt(*i->else_block, f);
    }
  }
}

std::set<std::string> assigned_names(const Block& b) {
  std::set<std::string> out;
  for_each_stmt(b, [&](const Stmt& s) {
    if (const auto* a = std::get_if<Assign>(&s.node)) out.insert(a->name);
    if (const auto* u = std::get_if<ArrUpdate>(&s.node)) out.insert(u->array);
  });
  return out;
}

}  // namespace hml::ast
