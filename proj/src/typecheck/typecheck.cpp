#include "hml/typecheck.hpp"

#include <algorithm>
#include <set>

namespace hml {

using namespace ast;

Scheme Scheme::additive(Party n) {
  if (n < 2) throw Error("additive scheme needs at least 2 parties");
  return {Kind::AdditiveShare, n};
}

std::string to_string(const Scheme& s) {
  switch (s.kind) {
    case Scheme::Kind::Generic: return "generic";
    case Scheme::Kind::Tfhe: return "tfhe";
    case Scheme::Kind::AdditiveShare: return "additive(" + std::to_string(s.parties) + ")";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name, Party parties) {
  if (name == "generic") return Scheme::generic();
  if (name == "tfhe") return Scheme::tfhe();
  if (name == "additive") return Scheme::additive(parties);
  throw Error("unknown scheme '" + name + "' (expected generic, tfhe or additive)");
}

std::string to_string(const SecType& t) {
  const char* a = t.base == Atomic::Int ? "int" : "bool";
  if (t.is_array) return t.owners ? "arr(int," + to_string(*t.owners) + ")" : "arr(int)";
  return t.owners ? std::string("(") + a + "," + to_string(*t.owners) + ")" : a;
}

bool valid(const OwnerSet& o, const OwnerSet& audience, const Scheme& scheme) {
  if (scheme.kind == Scheme::Kind::Tfhe) return o == audience && o.size() == 1;
  return o.subset_of(audience);
}

std::string format_diagnostic(const std::string& file, const Diagnostic& d) {
  return file + ":" + to_string(d.pos) + ": error[" + d.rule + "]: " + d.message;
}

TypeError::TypeError(Diagnostic d)
    : Error(to_string(d.pos) + ": error[" + d.rule + "]: " + d.message), diag_(std::move(d)) {}

TypeErrors::TypeErrors(std::vector<Diagnostic> diags)
    : Error(diags.empty() ? "type errors"
                          : std::to_string(diags.size()) + " type error(s); first: " +
                                to_string(diags.front().pos) + ": error[" + diags.front().rule +
                                "]: " + diags.front().message),
      diags_(std::move(diags)) {}

TypedProgram::TypedProgram(std::unique_ptr<Program> program, Scheme scheme,
                           std::unordered_map<const Expr*, SecType> types)
    : program_(std::move(program)), scheme_(scheme), types_(std::move(types)) {}

const SecType& TypedProgram::type_of(const Expr& e) const {
  auto it = types_.find(&e);
  if (it == types_.end()) throw Error("expression at " + to_string(e.pos) + " has no type");
  return it->second;
}

namespace {

[[noreturn]] void fail(Position pos, std::string rule, std::string message) {
  throw TypeError(Diagnostic{pos, std::move(rule), std::move(message)});
}

void check_parties(const OwnerSet& o, const Scheme& scheme, Position pos) {
  if (scheme.kind != Scheme::Kind::AdditiveShare) return;
  for (Party p : o)
    if (p >= scheme.parties)
      fail(pos, "party-range",
           "party " + std::to_string(p) + " outside the " + std::to_string(scheme.parties) +
               "-party scheme");
}

bool has_output(const Block& b) {
  for (const auto& s : b.stmts) {
    bool found = std::visit(overloaded{
                                [](const Output&) { return true; },
                                [](const While& w) { return has_output(w.body); },
                                [](const IfStmt& i) {
                                  return has_output(i.then_block) ||
                                         (i.else_block && has_output(*i.else_block));
                                },
                                [](const auto&) { return false; },
                            },
                            s.node);
    if (found) return true;
  }
  return false;
}

class Checker {
 public:
  Checker(const Scheme& scheme, const Program* program,
          std::unordered_map<const Expr*, SecType>* record, std::vector<Diagnostic>* sink)
      : scheme_(scheme), program_(program), record_(record), sink_(sink) {}

  SecType expr(const TypeEnv& env, const Expr& e) {
    SecType t = std::visit([&](const auto& node) { return check(env, node, e.pos); }, e.node);
    if (record_) (*record_)[&e] = t;
    return t;
  }

  void stmt(TypeEnv& env, const Stmt& s) {
    std::visit([&](const auto& node) { check(env, node, s.pos); }, s.node);
  }

  // Statement sequence; with a sink, errors are collected per statement.
  void stmts(TypeEnv& env, const std::vector<Stmt>& list) {
    for (const auto& s : list) {
      try {
        stmt(env, s);
      } catch (const TypeError& err) {
        if (!sink_) throw;
        sink_->push_back(err.diagnostic());
        recover(env, s);
      }
    }
  }

  void function(const FuncDef& f) {
    TypeEnv env;
    for (const auto& p : f.params) {
      if (env.count(p.name))
        fail(f.pos, "function", "duplicate parameter '" + p.name + "' in '" + f.name + "'");
      env.emplace(p.name, resolve_type(p.type, scheme_, f.pos));
    }
    SecType ret = resolve_type(f.return_type, scheme_, f.pos);
    if (f.bound) {
      TypeEnv plain_env;
      for (const auto& [name, t] : env)
        if (t.is_plain() && !t.is_array) plain_env.emplace(name, t);
      SecType bt;
      try {
        bt = expr(plain_env, **f.bound);
      } catch (const TypeError& err) {
        fail((*f.bound)->pos, "bound", "bound must use plaintext integer parameters only: " +
                                           err.diagnostic().message);
      }
      if (bt != SecType::plain(Atomic::Int))
        fail((*f.bound)->pos, "bound", "bound must be a plaintext int, found " + to_string(bt));
    }
    SecType body = expr_block(env, f.body, /*protect_outer=*/false, f.pos);
    if (!assignable(body, ret))
      fail(f.pos, "function",
           "body of '" + f.name + "' has type " + to_string(body) + ", declared " +
               to_string(ret));
  }

 private:
  const Scheme& scheme_;
  const Program* program_;
  std::unordered_map<const Expr*, SecType>* record_;
  std::vector<Diagnostic>* sink_;

  bool tfhe() const { return scheme_.kind == Scheme::Kind::Tfhe; }

  // Owned parts are united; under Tfhe they must all be one singleton.
  SecType combine(Atomic result, std::initializer_list<const SecType*> parts, Position pos,
                  const char* rule) {
    std::optional<OwnerSet> o;
    for (const SecType* t : parts) {
      if (!t->owners) continue;
      if (tfhe() && o && *o != *t->owners)
        fail(pos, rule,
             "owner sets " + to_string(*o) + " and " + to_string(*t->owners) +
                 " differ under tfhe");
      o = o ? o->unite(*t->owners) : *t->owners;
    }
    return o ? SecType::owned(result, *o) : SecType::plain(result);
  }

  static SecType as_array(SecType t) {
    t.is_array = true;
    t.base = Atomic::Int;
    return t;
  }

  bool assignable(const SecType& from, const SecType& to) const {
    if (from.base != to.base || from.is_array != to.is_array) return false;
    if (!from.owners) return true;
    if (!to.owners) return false;
    return tfhe() ? *from.owners == *to.owners : from.owners->subset_of(*to.owners);
  }

  SecType join(const SecType& a, const SecType& b, Position pos, const char* rule) {
    if (!a.owners) return b;
    if (!b.owners) return a;
    SecType out = a;
    out.owners = a.owners->unite(*b.owners);
    if (tfhe() && out.owners->size() != 1)
      fail(pos, rule, "owner set " + to_string(*out.owners) + " is not a singleton under tfhe");
    return out;
  }

  void recover(TypeEnv& env, const Stmt& s) {
    if (const auto* d = std::get_if<ValDecl>(&s.node)) {
      if (env.count(d->name)) return;
      try {
        env.emplace(d->name, resolve_type(d->type, scheme_, s.pos));
      } catch (const TypeError&) {
      }
    }
  }

  const SecType& lookup(const TypeEnv& env, const std::string& name, Position pos) {
    auto it = env.find(name);
    if (it == env.end()) fail(pos, "var", "unbound variable '" + name + "'");
    return it->second;
  }

  const SecType& lookup_array(const TypeEnv& env, const std::string& name, Position pos,
                              const char* rule) {
    const SecType& t = lookup(env, name, pos);
    if (!t.is_array) fail(pos, rule, "'" + name + "' is not an array");
    return t;
  }

  SecType scalar(const TypeEnv& env, const Expr& e, Atomic want, const char* rule) {
    SecType t = expr(env, e);
    if (t.is_array || t.base != want)
      fail(e.pos, rule,
           std::string("expected ") + (want == Atomic::Int ? "int" : "bool") + ", found " +
               to_string(t));
    return t;
  }

  void plain_int(const TypeEnv& env, const Expr& e, const char* rule) {
    SecType t = expr(env, e);
    if (t != SecType::plain(Atomic::Int))
      fail(e.pos, rule, "expected a plaintext int, found " + to_string(t));
  }

  // Expression block: statements are local, the result is the value.
  SecType expr_block(const TypeEnv& env, const Block& b, bool protect_outer, Position pos) {
    if (protect_outer) {
      for (const auto& n : assigned_names(b))
        if (env.count(n))
          fail(pos, "expr-block", "expression block assigns outer variable '" + n + "'");
    }
    if (has_output(b)) fail(pos, "expr-block", "output inside an expression block");
    if (!b.result) fail(pos, "expr-block", "expression block has no result");
    TypeEnv local = env;
    Checker inner(scheme_, program_, record_, nullptr);
    inner.stmts(local, b.stmts);
    return inner.expr(local, **b.result);
  }

  SecType input_type(const Input& in, Position pos) {
    if (in.type.owners) fail(pos, "input", "input type carries no owner annotation");
    if (in.type.is_array && in.type.base != Atomic::Int)
      fail(pos, "input", "arrays hold int only");
    if (in.type.is_array && !in.type.length)
      fail(pos, "input", "input arrays need a literal length");
    TypeSyntax t = in.type;
    t.owners = OwnerSet{in.party};
    return resolve_type(t, scheme_, pos);
  }

  // ---- expressions --------------------------------------------------------

  SecType check(const TypeEnv&, const IntLit&, Position) { return SecType::plain(Atomic::Int); }
  SecType check(const TypeEnv&, const BoolLit&, Position) { return SecType::plain(Atomic::Bool); }
  SecType check(const TypeEnv& env, const Var& v, Position pos) { return lookup(env, v.name, pos); }

  SecType check(const TypeEnv& env, const Eval& x, Position pos) {
    check_parties(x.audience, scheme_, pos);
    SecType t = expr(env, *x.value);
    if (tfhe() && x.audience.size() != 1)
      fail(pos, "eval", "tfhe eval audience must be a single party");
    if (t.owners && !valid(*t.owners, x.audience, scheme_))
      fail(pos, "eval",
           "data owned by " + to_string(*t.owners) + " cannot be revealed to " +
               to_string(x.audience));
    t.owners.reset();
    return t;
  }

  SecType check(const TypeEnv& env, const BinOp& x, Position pos) {
    SecType l = expr(env, *x.lhs);
    SecType r = expr(env, *x.rhs);
    if (l.is_array || r.is_array)
      fail(pos, "binop", std::string("operator ") + spelling(x.op) + " on an array");
    auto need = [&](Atomic a) {
      if (l.base != a || r.base != a)
        fail(pos, "binop",
             std::string("operator ") + spelling(x.op) + " expects " +
                 (a == Atomic::Int ? "int" : "bool") + " operands, found " + to_string(l) +
                 " and " + to_string(r));
    };
    Atomic result = Atomic::Int;
    switch (x.op) {
      case BinaryOp::Add:
      case BinaryOp::Sub:
      case BinaryOp::Mul:
      case BinaryOp::Mod:
        need(Atomic::Int);
        break;
      case BinaryOp::Div:
        need(Atomic::Int);
        if (l.owners || r.owners) fail(pos, "binop", "division requires plaintext operands");
        break;
      case BinaryOp::Lt:
      case BinaryOp::Leq:
      case BinaryOp::Gt:
      case BinaryOp::Geq:
        need(Atomic::Int);
        result = Atomic::Bool;
        break;
      case BinaryOp::Eq:
      case BinaryOp::Neq:
        need(l.base);
        result = Atomic::Bool;
        break;
      case BinaryOp::And:
      case BinaryOp::Or:
        need(Atomic::Bool);
        result = Atomic::Bool;
        break;
    }
    return combine(result, {&l, &r}, pos, "binop");
  }

  SecType check(const TypeEnv& env, const If& x, Position pos) {
    SecType c = scalar(env, *x.cond, Atomic::Bool, "if-expr");
    SecType a = expr_block(env, x.then_block, true, pos);
    SecType b = expr_block(env, x.else_block, true, pos);
    if (a.base != b.base || a.is_array != b.is_array)
      fail(pos, "if-expr", "branches have types " + to_string(a) + " and " + to_string(b));
    SecType out = combine(a.base, {&c, &a, &b}, pos, "if-expr");
    return a.is_array ? as_array(out) : out;
  }

  SecType check(const TypeEnv& env, const Call& x, Position pos) {
    const FuncDef* f = program_ ? program_->find_function(x.callee) : nullptr;
    if (!f) fail(pos, "call", "unknown function '" + x.callee + "'");
    if (f->params.size() != x.args.size())
      fail(pos, "call",
           "'" + x.callee + "' takes " + std::to_string(f->params.size()) + " argument(s), " +
               std::to_string(x.args.size()) + " given");
    for (std::size_t i = 0; i < x.args.size(); ++i) {
      SecType a = expr(env, x.args[i]);
      SecType p = resolve_type(f->params[i].type, scheme_, f->pos);
      if (!assignable(a, p))
        fail(x.args[i].pos, "call",
             "argument " + std::to_string(i + 1) + " of '" + x.callee + "' has type " +
                 to_string(a) + ", expected " + to_string(p));
    }
    return resolve_type(f->return_type, scheme_, f->pos);
  }

  SecType check(const TypeEnv& env, const ArrIndex& x, Position pos) {
    SecType a = lookup_array(env, x.array, pos, "index");
    SecType i = scalar(env, *x.index, Atomic::Int, "index");
    return combine(Atomic::Int, {&a, &i}, pos, "index");
  }

  SecType check(const TypeEnv& env, const ArrSlice& x, Position pos) {
    SecType a = lookup_array(env, x.array, pos, "slice");
    plain_int(env, *x.from, "slice");
    plain_int(env, *x.until, "slice");
    return a;
  }

  SecType check(const TypeEnv& env, const ArrLen& x, Position pos) {
    lookup_array(env, x.array, pos, "length");
    return SecType::plain(Atomic::Int);
  }

  SecType check(const TypeEnv& env, const Reduce& x, Position pos) {
    SecType a = expr(env, *x.array);
    if (!a.is_array) fail(pos, "reduce", "reduce over a non-array " + to_string(a));
    return combine(Atomic::Int, {&a}, pos, "reduce");
  }

  SecType check(const TypeEnv& env, const Pow& x, Position pos) {
    if (x.exponent < 0) fail(pos, "pow", "negative exponent");
    return scalar(env, *x.base, Atomic::Int, "pow");
  }

  SecType check(const TypeEnv&, const Input&, Position pos) {
    fail(pos, "input", "input is only allowed as a declaration initializer");
  }

  SecType check(const TypeEnv& env, const ArrLit& x, Position pos) {
    SecType acc = SecType::plain(Atomic::Int);
    for (const auto& e : x.elements) {
      SecType t = scalar(env, e, Atomic::Int, "array-lit");
      acc = combine(Atomic::Int, {&acc, &t}, pos, "array-lit");
    }
    return as_array(acc);
  }

  SecType check(const TypeEnv& env, const ArrNew& x, Position) {
    plain_int(env, *x.length, "array-new");
    return SecType::plain_array();
  }

  // ---- statements ---------------------------------------------------------

  void check(TypeEnv&, const Skip&, Position) {}

  void check(TypeEnv& env, const ValDecl& d, Position pos) {
    if (env.count(d.name)) fail(pos, "redeclaration", "'" + d.name + "' is already declared");
    SecType declared = resolve_type(d.type, scheme_, pos);
    SecType actual;
    if (const auto* in = std::get_if<Input>(&d.init->node)) {
      actual = input_type(*in, d.init->pos);
      if (record_) (*record_)[d.init.get()] = actual;
    } else {
      actual = expr(env, *d.init);
    }
    if (!assignable(actual, declared))
      fail(pos, "decl",
           "'" + d.name + "' declared " + to_string(declared) + " but initializer has type " +
               to_string(actual));
    env.emplace(d.name, declared);
  }

  void check(TypeEnv& env, const Assign& a, Position pos) {
    auto it = env.find(a.name);
    if (it == env.end()) fail(pos, "var", "unbound variable '" + a.name + "'");
    SecType t = expr(env, *a.value);
    if (t.base != it->second.base || t.is_array != it->second.is_array)
      fail(pos, "assign",
           "'" + a.name + "' has type " + to_string(it->second) + ", assigned " + to_string(t));
    it->second = join(it->second, t, pos, "assign");
  }

  void check(TypeEnv& env, const While& w, Position pos) {
    const SecType& var = lookup(env, w.var, pos);
    if (var != SecType::plain(Atomic::Int))
      fail(pos, "while", "loop variable '" + w.var + "' must be a plaintext int");
    plain_int(env, *w.bound, "while");
    // Owner sets only grow, so this terminates.
    TypeEnv cur = env;
    for (;;) {
      TypeEnv inner = cur;
      Checker body(scheme_, program_, record_, nullptr);
      body.stmts(inner, w.body.stmts);
      TypeEnv next = cur;
      for (auto& [name, t] : next) t = join(t, inner.at(name), pos, "while");
      if (next == cur) break;
      cur = std::move(next);
    }
    if (cur.at(w.var) != SecType::plain(Atomic::Int))
      fail(pos, "while", "loop variable '" + w.var + "' becomes private in the body");
    env = std::move(cur);
  }

  void check(TypeEnv& env, const IfStmt& i, Position pos) {
    SecType c = scalar(env, *i.cond, Atomic::Bool, "if-stmt");
    TypeEnv t = env, e = env;
    Checker branch(scheme_, program_, record_, nullptr);
    branch.stmts(t, i.then_block.stmts);
    if (i.else_block) branch.stmts(e, i.else_block->stmts);
    std::set<std::string> names = assigned_names(i.then_block);
    if (i.else_block) names.merge(assigned_names(*i.else_block));
    for (auto& [name, ty] : env) {
      SecType merged = join(t.at(name), e.at(name), pos, "if-stmt");
      if (c.owners && names.count(name)) merged = join(merged, c, pos, "if-stmt");
      merged.base = ty.base;
      merged.is_array = ty.is_array;
      ty = merged;
    }
  }

  void check(TypeEnv& env, const ArrUpdate& u, Position pos) {
    auto it = env.find(u.array);
    if (it == env.end()) fail(pos, "var", "unbound variable '" + u.array + "'");
    if (!it->second.is_array) fail(pos, "update", "'" + u.array + "' is not an array");
    SecType i = scalar(env, *u.index, Atomic::Int, "update");
    SecType v = scalar(env, *u.value, Atomic::Int, "update");
    SecType merged = combine(Atomic::Int, {&it->second, &i, &v}, pos, "update");
    it->second = as_array(merged);
  }

  void check(TypeEnv& env, const Output& o, Position pos) {
    SecType t = expr(env, *o.value);
    if (t.owners)
      fail(pos, "output",
           "output of private value of type " + to_string(t) + " (declassify with eval)");
  }
};

}  // namespace

SecType resolve_type(const TypeSyntax& t, const Scheme& scheme, Position pos) {
  if (t.is_array && t.base != Atomic::Int) fail(pos, "type", "arrays hold int only");
  if (t.length && *t.length < 0) fail(pos, "type", "negative array length");
  SecType out{t.base, t.is_array, t.owners};
  if (t.owners) {
    if (t.owners->empty()) fail(pos, "type", "empty owner set");
    if (scheme.kind == Scheme::Kind::Tfhe && t.owners->size() != 1)
      fail(pos, "tfhe-singleton",
           "owner set " + to_string(*t.owners) + " is not a single party under tfhe");
    check_parties(*t.owners, scheme, pos);
  }
  return out;
}

SecType check_expr(const TypeEnv& env, const Expr& e, const Scheme& scheme,
                   const Program* functions) {
  return Checker(scheme, functions, nullptr, nullptr).expr(env, e);
}

TypeEnv check_stmt(const TypeEnv& env, const Stmt& s, const Scheme& scheme,
                   const Program* functions) {
  TypeEnv out = env;
  Checker(scheme, functions, nullptr, nullptr).stmt(out, s);
  return out;
}

TypedProgram check_program(const Program& p, const Scheme& scheme) {
  auto owned = std::make_unique<Program>(p);
  std::unordered_map<const Expr*, SecType> types;
  std::vector<Diagnostic> diags;
  Checker checker(scheme, owned.get(), &types, &diags);
  for (const auto& f : owned->functions) {
    try {
      checker.function(f);
    } catch (const TypeError& err) {
      diags.push_back(err.diagnostic());
    }
  }
  TypeEnv env;
  checker.stmts(env, owned->main.stmts);
  if (!diags.empty()) {
    std::stable_sort(diags.begin(), diags.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.pos < b.pos; });
    diags.erase(std::unique(diags.begin(), diags.end()), diags.end());
    throw TypeErrors(std::move(diags));
  }
  return TypedProgram(std::move(owned), scheme, std::move(types));
}

}  // namespace hml
