#include "generators.hpp"

#include <vector>

namespace hml::testing {

namespace {

template <typename T>
T pick(std::mt19937_64& rng, std::initializer_list<T> xs) {
  std::uniform_int_distribution<std::size_t> d(0, xs.size() - 1);
  return *(xs.begin() + d(rng));
}

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

Circuit random_circuit(std::mt19937_64& rng, std::size_t size, std::uint32_t bitwidth) {
  Circuit c(Level::Arith, bitwidth);
  std::vector<NodeId> pool;
  pool.push_back(c.add_input(0, "x", Meta::enc(OwnerSet{0})));
  pool.push_back(c.add_input(1, "y", Meta::enc(OwnerSet{1})));
  for (std::int64_t k : {0, 1, 2}) pool.push_back(c.add_const(k));
  auto any = [&] { return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]; };
  const Scheme scheme = Scheme::generic();
  auto meta_of = [&](const std::vector<NodeId>& ops) {
    Meta m = Meta::plain();
    for (NodeId o : ops) m = combine_meta(m, c.nodes[o].meta, scheme);
    return m;
  };
  std::vector<NodeId> gates;
  while (gates.size() < size) {
    if (uniform(rng, 0, 7) == 0) {
      pool.push_back(c.add_const(uniform(rng, -3, 3)));
      continue;
    }
    const GateKind k = pick(rng, {GateKind::Add, GateKind::Sub, GateKind::Mul, GateKind::Mul, GateKind::MulPlain,
                                  GateKind::Lt, GateKind::Leq, GateKind::Eq, GateKind::Mux});
    std::vector<NodeId> ops;
    std::optional<std::int64_t> payload;
    if (k == GateKind::MulPlain) {
      ops = {any()};
      payload = uniform(rng, -2, 3);
    } else if (k == GateKind::Mux) {
      // Selector from a comparison when one exists keeps it 0/1.
      NodeId sel = any();
      for (auto it = gates.rbegin(); it != gates.rend(); ++it)
        if (c.nodes[*it].kind == GateKind::Lt || c.nodes[*it].kind == GateKind::Eq) {
          sel = *it;
          break;
        }
      ops = {sel, any(), any()};
    } else {
      NodeId a = any();
      ops = {a, uniform(rng, 0, 4) == 0 ? a : any()};  // repeated operands feed pow_rewrite and peephole
    }
    Meta m = meta_of(ops);
    NodeId id = c.add_node(k, ops, m, payload);
    // Exact duplicates give cse work.
    if (uniform(rng, 0, 9) == 0) pool.push_back(c.add_node(k, ops, m, payload));
    pool.push_back(id);
    gates.push_back(id);
  }
  const std::size_t outs = std::min<std::size_t>(3, gates.size());
  for (std::size_t i = 0; i < outs; ++i)
    c.add_output(c.add_reveal(gates[gates.size() - 1 - i], OwnerSet{0, 1}), "o" + std::to_string(i));
  return c;
}

InputMap random_inputs(std::mt19937_64& rng, std::uint32_t bitwidth, std::int64_t magnitude) {
  const std::int64_t limit = (std::int64_t{1} << (bitwidth - 2)) - 1;
  magnitude = std::min(magnitude, limit);
  std::uniform_int_distribution<std::int64_t> d(-magnitude, magnitude);
  InputMap in;
  in[{0, "x"}] = d(rng);
  in[{1, "y"}] = d(rng);
  in[{0, "a"}] = d(rng);
  in[{1, "b"}] = d(rng);
  return in;
}

namespace {

class ProgramGen {
 public:
  explicit ProgramGen(std::mt19937_64& rng) : rng_(rng) {}

  std::string run() {
    std::string s = "parties 0, 1;\ninput a : int from 0;\ninput b : int from 1;\n";
    s += "val p : int := " + std::to_string(uniform(rng_, -4, 4)) + ";\n";
    ints_ = {"a", "b", "p"};
    s += "val s : int@{0, 1} := " + int_expr(2) + ";\n";
    ints_.push_back("s");
    if (uniform(rng_, 0, 1) == 0) {
      s += "val i : int := 0;\nwhile (i < " + std::to_string(uniform(rng_, 1, 3)) + ") {\n";
      ints_.push_back("i");
      s += "  s := " + int_expr(2) + ";\n  i := i + 1;\n}\n";
    }
    const int outputs = uniform(rng_, 1, 3);
    for (int k = 0; k < outputs && budget_ > 0; ++k) {
      const bool boolean = uniform(rng_, 0, 3) == 0;
      const std::string name = "o" + std::to_string(k);
      s += "val " + name + " : " + (boolean ? "bool" : "int") + " := eval({0, 1}, " +
           (boolean ? bool_expr(3) : int_expr(3)) + ");\noutput " + name + ";\n";
    }
    return s;
  }

 private:
  std::mt19937_64& rng_;
  std::vector<std::string> ints_;
  int budget_ = 22;  // expression nodes left; the fixed scaffold adds the rest

  std::string leaf() {
    --budget_;
    if (uniform(rng_, 0, 3) == 0) return std::to_string(uniform(rng_, 0, 5));
    return ints_[std::uniform_int_distribution<std::size_t>(0, ints_.size() - 1)(rng_)];
  }

  std::string int_expr(int depth) {
    if (depth == 0 || budget_ < 6) return leaf();
    --budget_;
    switch (uniform(rng_, 0, 6)) {
      case 0: return "(" + int_expr(depth - 1) + " + " + int_expr(depth - 1) + ")";
      case 1: return "(" + int_expr(depth - 1) + " - " + int_expr(depth - 1) + ")";
      case 2: return "(" + int_expr(depth - 1) + " * " + int_expr(depth - 1) + ")";
      case 3: return "pow(" + int_expr(depth - 1) + ", " + std::to_string(uniform(rng_, 2, 4)) + ")";
      case 4: {
        std::string c = bool_expr(depth - 1);
        std::string t = int_expr(depth - 1);
        return "if " + c + " then { " + t + " } else { " + int_expr(depth - 1) + " }";
      }
      default: ++budget_; return leaf();
    }
  }

  std::string bool_expr(int depth) {
    if (depth == 0 || budget_ < 6) {
      --budget_;
      return "(" + leaf() + " < " + leaf() + ")";
    }
    --budget_;
    switch (uniform(rng_, 0, 3)) {
      case 0: return "(" + bool_expr(depth - 1) + " && " + bool_expr(depth - 1) + ")";
      case 1: return "(" + bool_expr(depth - 1) + " || " + bool_expr(depth - 1) + ")";
      default: {
        const char* op = pick<const char*>(rng_, {"<", "<=", ">", ">=", "==", "!="});
        return "(" + int_expr(depth - 1) + " " + op + " " + int_expr(depth - 1) + ")";
      }
    }
  }
};

}  // namespace

std::string random_program(std::mt19937_64& rng) { return ProgramGen(rng).run(); }

}  // namespace hml::testing
