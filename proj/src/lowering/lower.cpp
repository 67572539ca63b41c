#include "hml/lower.hpp"

#include <map>
#include <memory>
#include <set>

#include "hml/optimizer.hpp"

namespace hml {

using namespace ast;

const char* to_string(ComparisonEncoding e) {
  switch (e) {
    case ComparisonEncoding::Direct: return "direct";
    case ComparisonEncoding::RewriteGeq: return "rewrite";
    case ComparisonEncoding::Auto: return "auto";
  }
  return "?";
}

ComparisonEncoding parse_comparison_encoding(const std::string& name) {
  if (name == "direct") return ComparisonEncoding::Direct;
  if (name == "rewrite") return ComparisonEncoding::RewriteGeq;
  if (name == "auto") return ComparisonEncoding::Auto;
  throw Error("unknown comparison encoding '" + name + "' (expected direct, rewrite or auto)");
}

const char* to_string(LowerError::Code c) {
  switch (c) {
    case LowerError::Code::BoundMissing: return "BoundMissing";
    case LowerError::Code::BoundNegative: return "BoundNegative";
    case LowerError::Code::NonConstBound: return "NonConstBound";
    case LowerError::Code::NonConstLength: return "NonConstLength";
    case LowerError::Code::SideEffectUndetectable: return "SideEffectUndetectable";
    case LowerError::Code::EmptyArray: return "EmptyArray";
    case LowerError::Code::FuelExhausted: return "FuelExhausted";
    case LowerError::Code::IndexOutOfRange: return "IndexOutOfRange";
    case LowerError::Code::Unsupported: return "Unsupported";
    case LowerError::Code::Internal: return "Internal";
  }
  return "?";
}

LowerError::LowerError(Code code, Position pos, const std::string& message)
    : Error(to_string(pos) + ": " + hml::to_string(code) + ": " + message), code_(code), pos_(pos) {}

namespace {

NodeId gate(Circuit& c, const Scheme& scheme, GateKind k, std::vector<NodeId> ops,
            std::optional<std::int64_t> payload = std::nullopt) {
  Meta m = Meta::plain();
  for (NodeId o : ops) m = combine_meta(m, c.nodes.at(o).meta, scheme);
  return c.add_node(k, std::move(ops), std::move(m), payload);
}

NodeId select_range(Circuit& c, const Scheme& scheme, const std::vector<NodeId>& arr, NodeId idx,
                    std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return arr[lo];
  const std::size_t mid = lo + (hi - lo + 1) / 2;
  NodeId left = select_range(c, scheme, arr, idx, lo, mid);
  NodeId right = select_range(c, scheme, arr, idx, mid, hi);
  NodeId bound = c.add_const(static_cast<std::int64_t>(mid));
  NodeId below = gate(c, scheme, GateKind::Lt, {idx, bound});
  return gate(c, scheme, GateKind::Mux, {below, left, right});
}

}  // namespace

NodeId lower_private_index(Circuit& c, const std::vector<NodeId>& arr, NodeId idx,
                           const Scheme& scheme) {
  if (arr.empty()) throw LowerError(LowerError::Code::EmptyArray, {}, "index into empty array");
  return select_range(c, scheme, arr, idx, 0, arr.size());
}

std::vector<NodeId> lower_private_update(Circuit& c, const std::vector<NodeId>& arr, NodeId idx,
                                         NodeId val, const Scheme& scheme) {
  if (arr.empty()) throw LowerError(LowerError::Code::EmptyArray, {}, "update of empty array");
  std::vector<NodeId> out;
  out.reserve(arr.size());
  for (std::size_t k = 0; k < arr.size(); ++k) {
    NodeId pos = c.add_const(static_cast<std::int64_t>(k));
    NodeId hit = gate(c, scheme, GateKind::Eq, {idx, pos});
    out.push_back(gate(c, scheme, GateKind::Mux, {hit, val, arr[k]}));
  }
  return out;
}

namespace {

// Gate recipe of a compile-time value, replayed when it must become a wire.
struct Recipe {
  GateKind kind = GateKind::Const;  // Const leaf, or Add/Sub/Mul
  std::int64_t value = 0;
  std::shared_ptr<const Recipe> lhs, rhs;
  std::size_t size = 1;
};
using RecipePtr = std::shared_ptr<const Recipe>;

constexpr std::size_t kMaxRecipe = 16;

struct Value {
  enum class Tag { Known, Wire, Array };

  Tag tag = Tag::Known;
  std::int64_t known = 0;
  RecipePtr recipe;
  NodeId wire = 0;
  std::vector<Value> elems;

  static Value of_known(std::int64_t v, RecipePtr r = nullptr) {
    Value out;
    out.known = v;
    out.recipe = r ? std::move(r) : std::make_shared<Recipe>(Recipe{GateKind::Const, v, nullptr, nullptr, 1});
    return out;
  }
  static Value of_wire(NodeId id) {
    Value out;
    out.tag = Tag::Wire;
    out.wire = id;
    return out;
  }
  static Value of_array(std::vector<Value> xs) {
    Value out;
    out.tag = Tag::Array;
    out.elems = std::move(xs);
    return out;
  }

  bool is_known() const { return tag == Tag::Known; }
  bool is_wire() const { return tag == Tag::Wire; }
  bool is_array() const { return tag == Tag::Array; }

  // Same compile-time value or same wire.
  bool same(const Value& o) const {
    if (tag != o.tag) return false;
    switch (tag) {
      case Tag::Known: return known == o.known;
      case Tag::Wire: return wire == o.wire;
      case Tag::Array:
        if (elems.size() != o.elems.size()) return false;
        for (std::size_t i = 0; i < elems.size(); ++i)
          if (!elems[i].same(o.elems[i])) return false;
        return true;
    }
    return false;
  }
};

using Env = std::map<std::string, Value>;
using Code = LowerError::Code;

bool has_effect(const Block& b) {
  bool found = false;
  for_each_stmt(b, [&](const Stmt& s) { found = found || std::holds_alternative<Output>(s.node); });
  for_each_expr(b, [&](const Expr& e) { found = found || std::holds_alternative<Eval>(e.node); });
  return found;
}

class Lowerer {
 public:
  Lowerer(const Program& prog, const LowerConfig& cfg)
      : prog_(prog), cfg_(cfg), c_(Level::Arith, cfg.bitwidth) {
    compute_recursion();
  }

  Circuit run() {
    Env env;
    stmts(env, prog_.main.stmts);
    return std::move(c_);
  }

 private:
  const Program& prog_;
  const LowerConfig& cfg_;
  Circuit c_;
  std::set<std::string> recursive_;
  std::map<std::string, std::int64_t> fuel_;
  std::set<std::string> input_names_, output_names_;
  std::size_t output_count_ = 0;
  int inline_depth_ = 0;

  // ---- call graph ---------------------------------------------------------

  void compute_recursion() {
    std::map<std::string, std::set<std::string>> edges;
    for (const auto& f : prog_.functions) {
      auto& out = edges[f.name];
      for_each_expr(f.body, [&](const Expr& e) {
        if (const auto* c = std::get_if<Call>(&e.node)) out.insert(c->callee);
      });
      if (f.bound) for_each_expr(**f.bound, [&](const Expr& e) {
          if (const auto* c = std::get_if<Call>(&e.node)) out.insert(c->callee);
        });
    }
    for (const auto& f : prog_.functions) {
      std::set<std::string> seen;
      std::vector<std::string> stack(edges[f.name].begin(), edges[f.name].end());
      while (!stack.empty()) {
        std::string n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        for (const auto& m : edges[n]) stack.push_back(m);
      }
      if (seen.count(f.name)) recursive_.insert(f.name);
    }
  }

  // ---- values -------------------------------------------------------------

  std::int64_t w(std::int64_t v) const { return wrap(v, cfg_.bitwidth); }

  NodeId emit_recipe(const Recipe& r) {
    if (r.kind == GateKind::Const) return c_.add_const(w(r.value));
    NodeId a = emit_recipe(*r.lhs);
    NodeId b = emit_recipe(*r.rhs);
    return gate(c_, cfg_.scheme, r.kind, {a, b});
  }

  NodeId wire(const Value& v, Position pos) {
    switch (v.tag) {
      case Value::Tag::Known: return emit_recipe(*v.recipe);
      case Value::Tag::Wire: return v.wire;
      case Value::Tag::Array: break;
    }
    throw LowerError(Code::Internal, pos, "array used as a scalar");
  }

  Value op(GateKind k, std::vector<NodeId> ops, std::optional<std::int64_t> payload = {}) {
    return Value::of_wire(gate(c_, cfg_.scheme, k, std::move(ops), payload));
  }

  Value known(std::int64_t v) { return Value::of_known(w(v)); }

  // Word arithmetic on values; Known x Known folds, keeping a replay recipe.
  Value arith(GateKind k, const Value& a, const Value& b, Position pos) {
    if (a.is_known() && b.is_known()) {
      const std::int64_t args[] = {a.known, b.known};
      std::int64_t v = eval_gate(k, args, std::nullopt, cfg_.bitwidth);
      std::size_t size = a.recipe->size + b.recipe->size + 1;
      if (size > kMaxRecipe) return Value::of_known(v);
      return Value::of_known(v, std::make_shared<Recipe>(Recipe{k, v, a.recipe, b.recipe, size}));
    }
    if (k == GateKind::Mul && (a.is_known() || b.is_known())) {
      const Value& x = a.is_known() ? b : a;
      const Value& s = a.is_known() ? a : b;
      return op(GateKind::MulPlain, {wire(x, pos)}, s.known);
    }
    return op(k, {wire(a, pos), wire(b, pos)});
  }

  Value one() { return known(1); }

  Value lt(const Value& a, const Value& b, Position pos) {
    if (a.is_known() && b.is_known()) {
      const std::int64_t args[] = {a.known, b.known};
      return known(eval_gate(GateKind::Lt, args, std::nullopt, cfg_.bitwidth));
    }
    return op(GateKind::Lt, {wire(a, pos), wire(b, pos)});
  }

  Value eq(const Value& a, const Value& b, Position pos) {
    if (a.is_known() && b.is_known()) return known(w(a.known) == w(b.known) ? 1 : 0);
    return op(GateKind::Eq, {wire(a, pos), wire(b, pos)});
  }

  Value logical_not(const Value& x, Position pos) {
    if (x.is_known()) return known(1 - x.known);
    return arith(GateKind::Sub, one(), x, pos);
  }

  // a <= b
  Value leq(const Value& a, const Value& b, Position pos) {
    if (a.is_known() && b.is_known()) return logical_not(lt(b, a, pos), pos);
    if (cfg_.comparison_encoding == ComparisonEncoding::Direct)
      return arith(GateKind::Add, lt(a, b, pos), eq(a, b, pos), pos);
    return logical_not(lt(b, a, pos), pos);
  }

  Value compare(BinaryOp o, const Value& a, const Value& b, Position pos) {
    switch (o) {
      case BinaryOp::Lt: return lt(a, b, pos);
      case BinaryOp::Gt: return lt(b, a, pos);
      case BinaryOp::Leq: return leq(a, b, pos);
      case BinaryOp::Geq: return leq(b, a, pos);
      case BinaryOp::Eq: return eq(a, b, pos);
      case BinaryOp::Neq: return logical_not(eq(a, b, pos), pos);
      default: break;
    }
    throw LowerError(Code::Internal, pos, "not a comparison");
  }

  Value select(const Value& b, const Value& x, const Value& y, Position pos) {
    if (b.is_known()) return (b.known & 1) ? x : y;
    if (x.is_array() || y.is_array()) {
      if (!x.is_array() || !y.is_array() || x.elems.size() != y.elems.size())
        throw LowerError(Code::Unsupported, pos, "branches yield arrays of different lengths");
      std::vector<Value> out;
      for (std::size_t i = 0; i < x.elems.size(); ++i)
        out.push_back(x.elems[i].same(y.elems[i]) ? x.elems[i]
                                                  : select(b, x.elems[i], y.elems[i], pos));
      return Value::of_array(std::move(out));
    }
    if (cfg_.keep_mux) return op(GateKind::Mux, {wire(b, pos), wire(x, pos), wire(y, pos)});
    Value t = arith(GateKind::Mul, b, x, pos);
    Value e = arith(GateKind::Mul, logical_not(b, pos), y, pos);
    return arith(GateKind::Add, t, e, pos);
  }

  // Bounded restoring division for nonnegative operands: r = x mod d.
  Value modulo(const Value& x, const Value& d, Position pos) {
    if (x.is_known() && d.is_known())
      return known(d.known == 0 ? x.known : x.known % d.known);
    if (d.is_known() && d.known == 0) return x;
    const std::uint32_t width = cfg_.bitwidth;
    const std::int64_t limit = std::int64_t{1} << (width - 2);  // operand contract bound
    Value r = x;
    for (int k = static_cast<int>(width) - 3; k >= 0; --k) {
      const std::int64_t scale = std::int64_t{1} << k;
      if (d.is_known()) {
        if (d.known < 0 || d.known >= (limit + scale - 1) / scale) continue;
        Value t = known(d.known * scale);
        r = select(lt(r, t, pos), r, arith(GateKind::Sub, r, t, pos), pos);
      } else {
        Value ok = lt(d, known((limit + scale - 1) / scale), pos);
        Value t = arith(GateKind::Mul, d, known(scale), pos);
        Value reduced = select(lt(r, t, pos), r, arith(GateKind::Sub, r, t, pos), pos);
        r = select(ok, reduced, r, pos);
      }
    }
    return r;
  }

  Value binop(BinaryOp o, const Value& a, const Value& b, Position pos) {
    if (a.is_array() || b.is_array())
      throw LowerError(Code::Internal, pos, "binary operator on an array");
    switch (o) {
      case BinaryOp::Add: return arith(GateKind::Add, a, b, pos);
      case BinaryOp::Sub: return arith(GateKind::Sub, a, b, pos);
      case BinaryOp::Mul: return arith(GateKind::Mul, a, b, pos);
      case BinaryOp::And: return arith(GateKind::Mul, a, b, pos);
      case BinaryOp::Or: {
        if (a.is_known() && b.is_known()) return known((a.known | b.known) & 1);
        Value sum = arith(GateKind::Add, a, b, pos);
        return arith(GateKind::Sub, sum, arith(GateKind::Mul, a, b, pos), pos);
      }
      case BinaryOp::Div:
        if (!a.is_known() || !b.is_known())
          throw LowerError(Code::Unsupported, pos, "division needs compile-time operands");
        if (b.known == 0) throw LowerError(Code::Unsupported, pos, "division by zero");
        return known(a.known / b.known);
      case BinaryOp::Mod: return modulo(a, b, pos);
      default: return compare(o, a, b, pos);
    }
  }

  std::int64_t need_known(const Value& v, Code code, Position pos, const char* what) {
    if (!v.is_known())
      throw LowerError(code, pos, std::string(what) + " is not known at compile time");
    return v.known;
  }

  // ---- I/O ----------------------------------------------------------------

  Meta input_meta(Party p) const {
    if (cfg_.scheme.kind == Scheme::Kind::AdditiveShare) {
      OwnerSet all = OwnerSet::range(cfg_.scheme.parties);
      return Meta::shared(OwnerSet{p}, all, all, cfg_.scheme.parties);
    }
    return Meta::enc(OwnerSet{p});
  }

  std::string unique(std::set<std::string>& used, const std::string& base) {
    std::string name = base;
    for (int k = 2; used.count(name); ++k) name = base + "#" + std::to_string(k);
    used.insert(name);
    return name;
  }

  Value input(const std::string& name, const Input& in, Position pos) {
    if (!in.type.is_array)
      return Value::of_wire(c_.add_input(in.party, unique(input_names_, name), input_meta(in.party)));
    if (!in.type.length) throw LowerError(Code::NonConstLength, pos, "input array without length");
    std::vector<Value> xs;
    for (std::int64_t i = 0; i < *in.type.length; ++i)
      xs.push_back(Value::of_wire(c_.add_input(
          in.party, unique(input_names_, name + "[" + std::to_string(i) + "]"),
          input_meta(in.party))));
    return Value::of_array(std::move(xs));
  }

  Value reveal(const Value& v, const OwnerSet& audience, Position pos) {
    switch (v.tag) {
      case Value::Tag::Known: return v;
      case Value::Tag::Wire: {
        const Node& n = c_.nodes[v.wire];
        if (n.kind == GateKind::Reveal && n.audience == audience) return v;
        return Value::of_wire(c_.add_reveal(v.wire, audience));
      }
      case Value::Tag::Array: {
        std::vector<Value> xs;
        for (const auto& e : v.elems) xs.push_back(reveal(e, audience, pos));
        return Value::of_array(std::move(xs));
      }
    }
    return v;
  }

  void emit_output(const std::string& name, const Value& v, Position pos) {
    NodeId id = wire(v, pos);
    if (c_.nodes[id].kind != GateKind::Reveal) id = c_.add_reveal(id, prog_.declared_parties);
    c_.add_output(id, unique(output_names_, name));
  }

  void output(const Expr& e, const Value& v, Position pos) {
    std::string name;
    const Expr* inner = &e;
    if (const auto* ev = std::get_if<Eval>(&e.node)) inner = ev->value.get();
    if (const auto* var = std::get_if<Var>(&inner->node))
      name = var->name;
    else
      name = "out" + std::to_string(output_count_);
    ++output_count_;
    if (v.is_array()) {
      for (std::size_t i = 0; i < v.elems.size(); ++i)
        emit_output(name + "[" + std::to_string(i) + "]", v.elems[i], pos);
    } else {
      emit_output(name, v, pos);
    }
  }

  // ---- fuel ---------------------------------------------------------------

  enum class Forced { None, Then, Else };

  // With some function at fuel 0, an if whose branches differ in calling it
  // takes the branch that does not.
  Forced forced_branch(const Block& then_block, const Block* else_block) const {
    for (const auto& [name, fuel] : fuel_) {
      if (fuel != 0) continue;
      const bool t = calls(then_block, name);
      const bool e = else_block && calls(*else_block, name);
      if (t && !e) return Forced::Else;
      if (e && !t) return Forced::Then;
    }
    return Forced::None;
  }

  Value call(Env& env, const Call& x, Position pos) {
    const FuncDef* f = prog_.find_function(x.callee);
    if (!f) throw LowerError(Code::Internal, pos, "unknown function '" + x.callee + "'");
    Env fenv;
    for (std::size_t i = 0; i < f->params.size(); ++i)
      fenv[f->params[i].name] = expr(env, x.args[i]);
    if (++inline_depth_ > 4096)
      throw LowerError(Code::Unsupported, pos, "inlining depth limit reached");
    std::optional<std::int64_t> saved;
    bool installed = false;
    auto it = fuel_.find(f->name);
    if (it != fuel_.end()) {
      if (it->second == 0)
        throw LowerError(Code::FuelExhausted, pos, "recursive call to '" + f->name + "' at fuel 0");
      saved = it->second;
      --it->second;
    } else if (recursive_.count(f->name)) {
      if (!f->bound)
        throw LowerError(Code::BoundMissing, f->pos, "recursive function '" + f->name +
                                                         "' has no bound");
      Value d = expr(fenv, **f->bound);
      std::int64_t fuel = need_known(d, Code::NonConstBound, (*f->bound)->pos, "bound");
      if (fuel < 0)
        throw LowerError(Code::BoundNegative, (*f->bound)->pos,
                         "bound evaluates to " + std::to_string(fuel));
      fuel_[f->name] = fuel;
      installed = true;
    }
    Value result = block_value(fenv, f->body);
    if (saved) fuel_[f->name] = *saved;
    if (installed) fuel_.erase(f->name);
    --inline_depth_;
    return result;
  }

  // ---- expressions --------------------------------------------------------

  Value block_value(const Env& env, const Block& b) {
    Env local = env;
    stmts(local, b.stmts);
    return expr(local, **b.result);
  }

  const Value& lookup(Env& env, const std::string& name, Position pos) {
    auto it = env.find(name);
    if (it == env.end()) throw LowerError(Code::Internal, pos, "unbound variable '" + name + "'");
    return it->second;
  }

  const Value& lookup_array(Env& env, const std::string& name, Position pos) {
    const Value& v = lookup(env, name, pos);
    if (!v.is_array()) throw LowerError(Code::Internal, pos, "'" + name + "' is not an array");
    return v;
  }

  Value index(const Value& arr, const Value& idx, Position pos) {
    if (arr.elems.empty()) throw LowerError(Code::EmptyArray, pos, "index into empty array");
    if (idx.is_known()) {
      if (idx.known < 0 || static_cast<std::size_t>(idx.known) >= arr.elems.size())
        throw LowerError(Code::IndexOutOfRange, pos,
                         "index " + std::to_string(idx.known) + " outside length " +
                             std::to_string(arr.elems.size()));
      return arr.elems[static_cast<std::size_t>(idx.known)];
    }
    std::vector<NodeId> wires;
    for (const auto& e : arr.elems) wires.push_back(wire(e, pos));
    return Value::of_wire(lower_private_index(c_, wires, wire(idx, pos), cfg_.scheme));
  }

  Value reduce(ReduceOp o, const Value& arr, Position pos) {
    if (!arr.is_array()) throw LowerError(Code::Internal, pos, "reduce over a scalar");
    if (arr.elems.empty()) {
      if (o == ReduceOp::Add) return known(0);
      if (o == ReduceOp::Mul) return known(1);
      throw LowerError(Code::EmptyArray, pos, "max/min of an empty array");
    }
    auto combine = [&](const Value& a, const Value& b) -> Value {
      switch (o) {
        case ReduceOp::Add: return arith(GateKind::Add, a, b, pos);
        case ReduceOp::Mul: return arith(GateKind::Mul, a, b, pos);
        case ReduceOp::Max: return select(lt(a, b, pos), b, a, pos);
        case ReduceOp::Min: return select(lt(a, b, pos), a, b, pos);
      }
      return a;
    };
    return tree_reduce(std::span<const Value>(arr.elems), combine);
  }

  Value if_expr(Env& env, const If& x, Position pos) {
    switch (forced_branch(x.then_block, &x.else_block)) {
      case Forced::Then: return block_value(env, x.then_block);
      case Forced::Else: return block_value(env, x.else_block);
      case Forced::None: break;
    }
    Value c = expr(env, *x.cond);
    if (c.is_known()) return block_value(env, (c.known & 1) ? x.then_block : x.else_block);
    if (has_effect(x.then_block) || has_effect(x.else_block))
      throw LowerError(Code::SideEffectUndetectable, pos,
                       "eval or output under a private condition");
    Value a = block_value(env, x.then_block);
    Value b = block_value(env, x.else_block);
    return select(c, a, b, pos);
  }

  Value expr(Env& env, const Expr& e) {
    const Position pos = e.pos;
    return std::visit(
        overloaded{
            [&](const IntLit& x) { return known(x.value); },
            [&](const BoolLit& x) { return known(x.value ? 1 : 0); },
            [&](const Var& x) { return lookup(env, x.name, pos); },
            [&](const Eval& x) { return reveal(expr(env, *x.value), x.audience, pos); },
            [&](const BinOp& x) {
              Value a = expr(env, *x.lhs);
              Value b = expr(env, *x.rhs);
              return binop(x.op, a, b, pos);
            },
            [&](const If& x) { return if_expr(env, x, pos); },
            [&](const Call& x) { return call(env, x, pos); },
            [&](const ArrIndex& x) {
              Value idx = expr(env, *x.index);
              return index(lookup_array(env, x.array, pos), idx, pos);
            },
            [&](const ArrSlice& x) {
              Value from = expr(env, *x.from);
              Value until = expr(env, *x.until);
              const Value& arr = lookup_array(env, x.array, pos);
              std::int64_t i = need_known(from, Code::NonConstLength, pos, "slice start");
              std::int64_t j = need_known(until, Code::NonConstLength, pos, "slice end");
              if (i < 0 || j < i || static_cast<std::size_t>(j) > arr.elems.size())
                throw LowerError(Code::IndexOutOfRange, pos,
                                 "slice [" + std::to_string(i) + ", " + std::to_string(j) +
                                     ") outside length " + std::to_string(arr.elems.size()));
              return Value::of_array(
                  std::vector<Value>(arr.elems.begin() + i, arr.elems.begin() + j));
            },
            [&](const ArrLen& x) {
              return known(static_cast<std::int64_t>(lookup_array(env, x.array, pos).elems.size()));
            },
            [&](const Reduce& x) { return reduce(x.op, expr(env, *x.array), pos); },
            [&](const Pow& x) {
              Value base = expr(env, *x.base);
              if (x.exponent == 0) return known(1);
              Value acc = base;
              for (std::int64_t i = 1; i < x.exponent; ++i) acc = arith(GateKind::Mul, acc, base, pos);
              return acc;
            },
            [&](const Input&) -> Value {
              throw LowerError(Code::Internal, pos, "input outside a declaration");
            },
            [&](const ArrLit& x) {
              std::vector<Value> xs;
              for (const auto& el : x.elements) xs.push_back(expr(env, el));
              return Value::of_array(std::move(xs));
            },
            [&](const ArrNew& x) {
              std::int64_t n = need_known(expr(env, *x.length), Code::NonConstLength, pos,
                                          "array length");
              if (n < 0) throw LowerError(Code::NonConstLength, pos, "negative array length");
              return Value::of_array(std::vector<Value>(static_cast<std::size_t>(n), known(0)));
            },
        },
        e.node);
  }

  // ---- statements ---------------------------------------------------------

  void stmts(Env& env, const std::vector<Stmt>& list) {
    for (const auto& s : list) stmt(env, s);
  }

  // Runs `b` in a child scope; only bindings of `env` survive.
  void scoped(Env& env, const Block& b) {
    Env inner = env;
    stmts(inner, b.stmts);
    for (auto& [name, v] : env) v = inner.at(name);
  }

  void if_stmt(Env& env, const IfStmt& i, Position pos) {
    const Block* else_block = i.else_block ? &*i.else_block : nullptr;
    switch (forced_branch(i.then_block, else_block)) {
      case Forced::Then: scoped(env, i.then_block); return;
      case Forced::Else:
        if (else_block) scoped(env, *else_block);
        return;
      case Forced::None: break;
    }
    Value c = expr(env, *i.cond);
    if (c.is_known()) {
      if (c.known & 1)
        scoped(env, i.then_block);
      else if (else_block)
        scoped(env, *else_block);
      return;
    }
    if (has_effect(i.then_block) || (else_block && has_effect(*else_block)))
      throw LowerError(Code::SideEffectUndetectable, pos,
                       "eval or output under a private condition");
    Env t = env, e = env;
    scoped(t, i.then_block);
    if (else_block) scoped(e, *else_block);
    std::set<std::string> names = assigned_names(i.then_block);
    if (else_block) names.merge(assigned_names(*else_block));
    for (const auto& name : names) {
      auto it = env.find(name);
      if (it == env.end()) continue;
      it->second = select(c, t.at(name), e.at(name), pos);
    }
  }

  void stmt(Env& env, const Stmt& s) {
    const Position pos = s.pos;
    std::visit(
        overloaded{
            [](const Skip&) {},
            [&](const ValDecl& d) {
              if (const auto* in = std::get_if<Input>(&d.init->node))
                env[d.name] = input(d.name, *in, d.init->pos);
              else
                env[d.name] = expr(env, *d.init);
            },
            [&](const Assign& a) {
              Value v = expr(env, *a.value);
              env[a.name] = std::move(v);
            },
            [&](const While& w) {
              for (std::size_t iter = 0;; ++iter) {
                Value i = lookup(env, w.var, pos);
                Value n = expr(env, *w.bound);
                std::int64_t iv = need_known(i, Code::NonConstBound, pos, "loop variable");
                std::int64_t nv = need_known(n, Code::NonConstBound, pos, "loop bound");
                if (iv >= nv) break;
                if (iter >= (1u << 20))
                  throw LowerError(Code::NonConstBound, pos, "loop exceeds 2^20 iterations");
                scoped(env, w.body);
              }
            },
            [&](const IfStmt& i) { if_stmt(env, i, pos); },
            [&](const ArrUpdate& u) {
              Value idx = expr(env, *u.index);
              Value val = expr(env, *u.value);
              Value& arr = env.at(u.array);
              if (!arr.is_array())
                throw LowerError(Code::Internal, pos, "'" + u.array + "' is not an array");
              if (idx.is_known()) {
                if (idx.known < 0 || static_cast<std::size_t>(idx.known) >= arr.elems.size())
                  throw LowerError(Code::IndexOutOfRange, pos,
                                   "update at " + std::to_string(idx.known) + " outside length " +
                                       std::to_string(arr.elems.size()));
                arr.elems[static_cast<std::size_t>(idx.known)] = val;
                return;
              }
              if (arr.elems.empty()) throw LowerError(Code::EmptyArray, pos, "update of empty array");
              std::vector<NodeId> wires;
              for (const auto& e : arr.elems) wires.push_back(wire(e, pos));
              auto updated = lower_private_update(c_, wires, wire(idx, pos), wire(val, pos),
                                                  cfg_.scheme);
              for (std::size_t k = 0; k < updated.size(); ++k)
                arr.elems[k] = Value::of_wire(updated[k]);
            },
            [&](const Output& o) { output(*o.value, expr(env, *o.value), pos); },
        },
        s.node);
  }
};

}  // namespace

Circuit lower_program(const TypedProgram& p, const LowerConfig& cfg) {
  if (cfg.bitwidth < 2 || cfg.bitwidth > 64)
    throw LowerError(Code::Unsupported, {}, "bitwidth must lie in [2, 64]");
  Circuit c = Lowerer(p.program(), cfg).run();
  auto problems = validate(c, cfg.scheme);
  if (!problems.empty())
    throw LowerError(Code::Internal, {}, "lowered circuit is invalid: " + problems.front());
  if (cfg.target_level == Level::Bool) return bitblast(c);
  return c;
}

}  // namespace hml
