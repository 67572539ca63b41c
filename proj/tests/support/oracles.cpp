#include "oracles.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "hml/pipeline.hpp"

#ifndef HML_CORPUS_DIR
#error "HML_CORPUS_DIR must be defined"
#endif

namespace hml::testing {

std::int64_t euclid_gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::vector<std::int64_t> sorted_copy(std::vector<std::int64_t> xs) {
  std::sort(xs.begin(), xs.end());
  return xs;
}

AuctionResult second_price(const std::vector<std::int64_t>& bids) {
  if (bids.size() < 2) throw std::invalid_argument("second_price: need two bids");
  auto top = std::max_element(bids.begin(), bids.end());  // first maximum
  AuctionResult r{top - bids.begin(), 0};
  bool first = true;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (static_cast<std::int64_t>(i) == r.winner) continue;
    if (first || bids[i] > r.price) r.price = bids[i];
    first = false;
  }
  return r;
}

namespace {

using namespace ast;

struct Val {
  bool is_array = false;
  std::int64_t word = 0;
  std::vector<std::int64_t> elems;
};

class Interp {
 public:
  Interp(const Program& p, const InputMap& in, std::uint32_t w) : p_(p), in_(in), w_(w) {}

  OutputMap run() {
    Env env;
    block(env, p_.main);
    return out_;
  }

 private:
  using Env = std::map<std::string, Val>;
  const Program& p_;
  const InputMap& in_;
  std::uint32_t w_;
  OutputMap out_;
  std::set<std::string> out_names_;
  int output_count_ = 0;

  std::int64_t wr(std::int64_t v) const { return wrap(v, w_); }
  Val scalar(std::int64_t v) const { return Val{false, wr(v), {}}; }
  bool lt(std::int64_t a, std::int64_t b) const {
    return wr(static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b))) < 0;
  }
  std::int64_t add(std::int64_t a, std::int64_t b) const {
    return wr(static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b)));
  }
  std::int64_t sub(std::int64_t a, std::int64_t b) const {
    return wr(static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b)));
  }
  std::int64_t mul(std::int64_t a, std::int64_t b) const {
    return wr(static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b)));
  }

  std::int64_t input(Party p, const std::string& name) const {
    auto it = in_.find({p, name});
    if (it == in_.end()) throw std::runtime_error("oracle: missing input " + name);
    return wr(it->second);
  }

  std::int64_t binop(BinaryOp o, std::int64_t a, std::int64_t b) const {
    switch (o) {
      case BinaryOp::Add: return add(a, b);
      case BinaryOp::Sub: return sub(a, b);
      case BinaryOp::Mul:
      case BinaryOp::And: return mul(a, b);
      case BinaryOp::Or: return sub(add(a, b), mul(a, b));
      case BinaryOp::Div:
        if (b == 0) throw std::runtime_error("oracle: division by zero");
        return wr(a / b);
      case BinaryOp::Mod: return b == 0 ? a : wr(a % b);
      case BinaryOp::Lt: return lt(a, b);
      case BinaryOp::Gt: return lt(b, a);
      case BinaryOp::Leq: return 1 - lt(b, a);
      case BinaryOp::Geq: return 1 - lt(a, b);
      case BinaryOp::Eq: return a == b;
      case BinaryOp::Neq: return a != b;
    }
    return 0;
  }

  Val block_value(Env env, const Block& b) {
    for (const auto& s : b.stmts) stmt(env, s);
    return b.result ? expr(env, **b.result) : scalar(0);
  }

  // Child scope: only bindings of `env` survive.
  void block(Env& env, const Block& b) {
    Env inner = env;
    for (const auto& s : b.stmts) stmt(inner, s);
    for (auto& [name, v] : env) v = inner.at(name);
  }

  // Remaining recursion budget of each bounded function currently active.
  std::map<std::string, std::int64_t> fuel_;

  // With a function out of fuel, a branch calling it is never taken.
  bool take_then(Env& env, const Expr& cond, const Block& then_block, const Block* else_block) {
    for (const auto& [name, fuel] : fuel_) {
      if (fuel != 0) continue;
      const bool t = calls(then_block, name);
      const bool e = else_block && calls(*else_block, name);
      if (t != e) return e;
    }
    return expr(env, cond).word & 1;
  }

  Val call(Env& env, const Call& x) {
    const FuncDef* f = p_.find_function(x.callee);
    Env fenv;
    for (std::size_t i = 0; i < f->params.size(); ++i) fenv[f->params[i].name] = expr(env, x.args[i]);
    if (!f->bound) return block_value(fenv, f->body);
    auto it = fuel_.find(f->name);
    if (it == fuel_.end()) {
      fuel_[f->name] = expr(fenv, **f->bound).word;
      Val v = block_value(fenv, f->body);
      fuel_.erase(f->name);
      return v;
    }
    if (it->second == 0) throw std::runtime_error("oracle: " + f->name + " called without fuel");
    --it->second;
    Val v = block_value(fenv, f->body);
    ++fuel_[f->name];
    return v;
  }

  Val expr(Env& env, const Expr& e) {
    return std::visit(
        overloaded{
            [&](const IntLit& x) { return scalar(x.value); },
            [&](const BoolLit& x) { return scalar(x.value ? 1 : 0); },
            [&](const Var& x) { return env.at(x.name); },
            [&](const Eval& x) { return expr(env, *x.value); },
            [&](const BinOp& x) {
              Val a = expr(env, *x.lhs), b = expr(env, *x.rhs);
              return scalar(binop(x.op, a.word, b.word));
            },
            [&](const If& x) {
              return take_then(env, *x.cond, x.then_block, &x.else_block) ? block_value(env, x.then_block)
                                                                           : block_value(env, x.else_block);
            },
            [&](const Call& x) { return call(env, x); },
            [&](const ArrIndex& x) {
              const auto& xs = env.at(x.array).elems;
              std::int64_t i = expr(env, *x.index).word;
              i = std::clamp<std::int64_t>(i, 0, static_cast<std::int64_t>(xs.size()) - 1);
              return scalar(xs.at(static_cast<std::size_t>(i)));
            },
            [&](const ArrSlice& x) {
              const auto& xs = env.at(x.array).elems;
              auto i = expr(env, *x.from).word, j = expr(env, *x.until).word;
              return Val{true, 0, std::vector<std::int64_t>(xs.begin() + i, xs.begin() + j)};
            },
            [&](const ArrLen& x) { return scalar(static_cast<std::int64_t>(env.at(x.array).elems.size())); },
            [&](const Reduce& x) {
              Val a = expr(env, *x.array);
              std::int64_t acc = x.op == ReduceOp::Mul ? 1 : 0;
              for (std::size_t i = 0; i < a.elems.size(); ++i) {
                const std::int64_t v = a.elems[i];
                switch (x.op) {
                  case ReduceOp::Add: acc = add(acc, v); break;
                  case ReduceOp::Mul: acc = mul(acc, v); break;
                  case ReduceOp::Max: acc = i == 0 || lt(acc, v) ? v : acc; break;
                  case ReduceOp::Min: acc = i == 0 || lt(v, acc) ? v : acc; break;
                }
              }
              return scalar(acc);
            },
            [&](const Pow& x) {
              std::int64_t b = expr(env, *x.base).word, acc = 1;
              for (std::int64_t i = 0; i < x.exponent; ++i) acc = mul(acc, b);
              return scalar(acc);
            },
            [&](const Input&) -> Val { throw std::runtime_error("oracle: stray input"); },
            [&](const ArrLit& x) {
              Val v{true, 0, {}};
              for (const auto& el : x.elements) v.elems.push_back(expr(env, el).word);
              return v;
            },
            [&](const ArrNew& x) {
              return Val{true, 0, std::vector<std::int64_t>(static_cast<std::size_t>(expr(env, *x.length).word), 0)};
            },
        },
        e.node);
  }

  std::string unique(const std::string& base) {
    std::string name = base;
    for (int k = 2; out_names_.count(name); ++k) name = base + "#" + std::to_string(k);
    out_names_.insert(name);
    return name;
  }

  void output(const Expr& e, const Val& v) {
    const Expr* inner = &e;
    if (const auto* ev = std::get_if<Eval>(&e.node)) inner = ev->value.get();
    std::string name;
    if (const auto* var = std::get_if<Var>(&inner->node)) name = var->name;
    else name = "out" + std::to_string(output_count_);
    ++output_count_;
    if (!v.is_array) {
      out_[unique(name)] = v.word;
      return;
    }
    for (std::size_t i = 0; i < v.elems.size(); ++i)
      out_[unique(name + "[" + std::to_string(i) + "]")] = v.elems[i];
  }

  void stmt(Env& env, const Stmt& s) {
    std::visit(
        overloaded{
            [](const Skip&) {},
            [&](const ValDecl& d) {
              if (const auto* in = std::get_if<Input>(&d.init->node)) {
                if (!in->type.is_array) {
                  env[d.name] = scalar(input(in->party, d.name));
                  return;
                }
                Val v{true, 0, {}};
                for (std::int64_t i = 0; i < *in->type.length; ++i)
                  v.elems.push_back(input(in->party, d.name + "[" + std::to_string(i) + "]"));
                env[d.name] = v;
                return;
              }
              env[d.name] = expr(env, *d.init);
            },
            [&](const Assign& a) { env[a.name] = expr(env, *a.value); },
            [&](const While& w) {
              while (env.at(w.var).word < expr(env, *w.bound).word) block(env, w.body);
            },
            [&](const IfStmt& i) {
              const Block* e = i.else_block ? &*i.else_block : nullptr;
              if (take_then(env, *i.cond, i.then_block, e)) block(env, i.then_block);
              else if (i.else_block) block(env, *i.else_block);
            },
            [&](const ArrUpdate& u) {
              std::int64_t i = expr(env, *u.index).word;
              std::int64_t v = expr(env, *u.value).word;
              auto& xs = env.at(u.array).elems;
              if (i >= 0 && static_cast<std::size_t>(i) < xs.size()) xs[static_cast<std::size_t>(i)] = v;
            },
            [&](const Output& o) { output(*o.value, expr(env, *o.value)); },
        },
        s.node);
  }
};

}  // namespace

OutputMap run_ast(const ast::Program& p, const InputMap& inputs, std::uint32_t bitwidth) {
  return Interp(p, inputs, bitwidth).run();
}

std::string corpus_path(const std::string& file) { return std::string(HML_CORPUS_DIR) + "/" + file; }

std::string corpus_source(const std::string& name) { return read_file(corpus_path(name + ".hml")); }

InputMap corpus_inputs(const std::string& name) {
  return parse_inputs_json(read_file(corpus_path(name + ".inputs.json")));
}

}  // namespace hml::testing
