#include "hml/optimizer.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <sstream>
#include <tuple>

#include "hml/estimator.hpp"

namespace hml {

namespace {

constexpr NodeId kDropped = ~NodeId{0};

// Rebuilds a circuit node by node. `rewrite(id, node_with_mapped_operands)`
// returns the new id standing for `id`; it may emit nodes through `out`.
class Rebuild {
 public:
  explicit Rebuild(const Circuit& src) : src(src), out(src.level, src.bitwidth), map(src.nodes.size(), kDropped) {
    for (const auto& in : src.inputs) port_of[in.node] = &in;
  }

  const Circuit& src;
  Circuit out;
  std::vector<NodeId> map;
  std::map<NodeId, const InputPort*> port_of;

  // Copies `n` (operands already mapped) into the output.
  NodeId emit(const Node& n, NodeId old_id) {
    if (n.kind == GateKind::Input || n.kind == GateKind::InputBit) {
      const InputPort* p = port_of.at(old_id);
      return out.add_input(p->party, p->name, n.meta, p->bit);
    }
    NodeId id = out.add_node(n.kind, n.operands, n.meta, n.payload);
    out.nodes[id].audience = n.audience;
    return id;
  }

  NodeId constant(std::int64_t v, bool bit) {
    if (bit) return out.add_node(GateKind::ConstBit, {}, Meta::plain(), v ? 1 : 0);
    return out.add_const(v);
  }

  Node mapped(NodeId id) const {
    Node n = src.nodes[id];
    for (NodeId& o : n.operands) o = map[o];
    return n;
  }

  template <typename F>
  Circuit run(F&& rewrite) {
    for (NodeId id = 0; id < src.nodes.size(); ++id) map[id] = rewrite(id, mapped(id));
    for (const auto& o : src.outputs) out.outputs.push_back({map[o.node], o.audience, o.name, o.bit});
    return std::move(out);
  }
};

std::optional<std::int64_t> const_value(const Circuit& c, NodeId id) {
  const Node& n = c.nodes[id];
  if (n.kind == GateKind::Const || n.kind == GateKind::ConstBit) return n.payload;
  return std::nullopt;
}

std::vector<std::uint32_t> use_counts(const Circuit& c) {
  std::vector<std::uint32_t> uses(c.nodes.size(), 0);
  for (const Node& n : c.nodes)
    for (NodeId o : n.operands) ++uses[o];
  for (const auto& o : c.outputs) ++uses[o.node];
  return uses;
}

}  // namespace

Circuit const_fold(const Circuit& c) {
  Rebuild rb(c);
  return rb.run([&](NodeId id, const Node& n) {
    if (is_structural(n.kind) || is_reveal(n.kind) || n.operands.empty()) return rb.emit(n, id);
    std::vector<std::int64_t> args;
    for (NodeId o : n.operands) {
      auto v = const_value(rb.out, o);
      if (!v) return rb.emit(n, id);
      args.push_back(*v);
    }
    return rb.constant(eval_gate(n.kind, args, n.payload, c.bitwidth), is_bool_kind(n.kind));
  });
}

Circuit peephole(const Circuit& c) {
  Rebuild rb(c);
  return rb.run([&](NodeId id, const Node& n) -> NodeId {
    auto cv = [&](std::size_t i) { return const_value(rb.out, n.operands[i]); };
    auto is = [&](std::size_t i, std::int64_t v) { return cv(i) == v; };
    switch (n.kind) {
      case GateKind::And:
        if (is(1, 1)) return n.operands[0];
        if (is(0, 1)) return n.operands[1];
        if (is(1, 0)) return n.operands[1];
        if (is(0, 0)) return n.operands[0];
        break;
      case GateKind::Or:
      case GateKind::Xor:
      case GateKind::Add:
        if (is(1, 0)) return n.operands[0];
        if (is(0, 0)) return n.operands[1];
        break;
      case GateKind::Sub:
        if (is(1, 0)) return n.operands[0];
        break;
      case GateKind::Mul:
        if (is(1, 1)) return n.operands[0];
        if (is(0, 1)) return n.operands[1];
        break;
      case GateKind::MulPlain:
        if (n.payload == 1) return n.operands[0];
        break;
      case GateKind::Mux:
      case GateKind::MuxBit:
        if (n.operands[1] == n.operands[2]) return n.operands[1];
        if (auto b = cv(0)) return (*b & 1) ? n.operands[1] : n.operands[2];
        break;
      case GateKind::Not: {
        const Node& inner = rb.out.nodes[n.operands[0]];
        if (inner.kind == GateKind::Not) return inner.operands[0];
        break;
      }
      default: break;
    }
    return rb.emit(n, id);
  });
}

Circuit strength_reduce(const Circuit& c) {
  Rebuild rb(c);
  return rb.run([&](NodeId id, const Node& n) -> NodeId {
    if (n.kind == GateKind::MulPlain) {
      if (n.payload == 0) return rb.constant(0, false);
      if (n.payload == 1) return n.operands[0];
    }
    if (n.kind == GateKind::Mul) {
      for (std::size_t i = 0; i < 2; ++i) {
        auto v = const_value(rb.out, n.operands[i]);
        if (!v) continue;
        if (*v == 0) return rb.constant(0, false);
        if (*v == 1) return n.operands[1 - i];
        return rb.out.add_node(GateKind::MulPlain, {n.operands[1 - i]}, n.meta, *v);
      }
    }
    return rb.emit(n, id);
  });
}

// A maximal tree of Mul gates whose internal nodes have a single use and
// whose leaves are all the same node is a power of that node.
Circuit pow_rewrite(const Circuit& c) {
  const auto uses = use_counts(c);
  auto internal = [&](NodeId id) { return c.nodes[id].kind == GateKind::Mul && uses[id] == 1; };

  struct Tree {
    NodeId base;
    std::uint64_t exponent;
  };
  std::map<NodeId, Tree> roots;
  std::vector<bool> absorbed(c.nodes.size(), false);

  for (NodeId id = static_cast<NodeId>(c.nodes.size()); id-- > 0;) {
    if (c.nodes[id].kind != GateKind::Mul || absorbed[id]) continue;
    std::vector<NodeId> leaves, inner, stack{id};
    std::int64_t old_depth = 0;
    std::map<NodeId, std::int64_t> depth_of{{id, 1}};
    while (!stack.empty()) {
      NodeId x = stack.back();
      stack.pop_back();
      inner.push_back(x);
      old_depth = std::max(old_depth, depth_of[x]);
      for (NodeId o : c.nodes[x].operands) {
        if (internal(o)) {
          depth_of[o] = depth_of[x] + 1;
          stack.push_back(o);
        } else {
          leaves.push_back(o);
        }
      }
    }
    if (!std::all_of(leaves.begin(), leaves.end(), [&](NodeId l) { return l == leaves[0]; })) continue;
    const std::uint64_t n = leaves.size();
    const std::int64_t squarings = std::bit_width(n) - 1;
    const std::int64_t new_muls = squarings + std::popcount(n) - 1;
    const std::int64_t new_depth = squarings + (std::popcount(n) > 1 ? 1 : 0);
    if (std::tuple(new_muls, new_depth) >= std::tuple(static_cast<std::int64_t>(inner.size()), old_depth)) continue;
    roots[id] = Tree{leaves[0], n};
    for (NodeId x : inner)
      if (x != id) absorbed[x] = true;
  }

  Rebuild rb(c);
  return rb.run([&](NodeId id, const Node& n) -> NodeId {
    if (absorbed[id]) return kDropped;
    auto it = roots.find(id);
    if (it == roots.end()) return rb.emit(n, id);
    // Square-and-multiply: powers x^(2^k), then a product of the set bits.
    const NodeId base = rb.map[it->second.base];
    const std::uint64_t e = it->second.exponent;
    std::vector<NodeId> powers{base};
    while ((std::uint64_t{1} << powers.size()) <= e)
      powers.push_back(rb.out.add_node(GateKind::Mul, {powers.back(), powers.back()}, n.meta));
    std::optional<NodeId> acc;
    for (std::size_t k = 0; k < powers.size(); ++k) {
      if (!((e >> k) & 1)) continue;
      acc = acc ? rb.out.add_node(GateKind::Mul, {*acc, powers[k]}, n.meta) : powers[k];
    }
    return *acc;
  });
}

Circuit cse(const Circuit& c) {
  using Key = std::tuple<GateKind, std::vector<NodeId>, std::optional<std::int64_t>, Meta, OwnerSet>;
  std::map<Key, NodeId> seen;
  Rebuild rb(c);
  return rb.run([&](NodeId id, const Node& n) {
    if (n.kind == GateKind::Input || n.kind == GateKind::InputBit) return rb.emit(n, id);
    std::vector<NodeId> ops = n.operands;
    if (is_commutative(n.kind)) std::sort(ops.begin(), ops.end());
    Key key{n.kind, ops, n.payload, n.meta, n.audience};
    auto it = seen.find(key);
    if (it != seen.end()) return it->second;
    NodeId fresh = rb.emit(n, id);
    seen.emplace(std::move(key), fresh);
    return fresh;
  });
}

Circuit dce(const Circuit& c) {
  std::vector<bool> live(c.nodes.size(), false);
  for (const auto& o : c.outputs) live[o.node] = true;
  for (const auto& in : c.inputs) live[in.node] = true;
  for (NodeId id = static_cast<NodeId>(c.nodes.size()); id-- > 0;)
    if (live[id])
      for (NodeId o : c.nodes[id].operands) live[o] = true;
  Rebuild rb(c);
  return rb.run([&](NodeId id, const Node& n) { return live[id] ? rb.emit(n, id) : kDropped; });
}

namespace {

double form_cost(const std::vector<GateKind>& kinds, const CostModel& m, const std::string& objective) {
  double sum = 0;
  for (GateKind k : kinds) sum += objective.empty() ? m.total_cost(k) : m.cost(k, objective);
  return sum;
}

}  // namespace

// Equivalent pairs, with inner gates used only by the root:
//   a<=b : Add(Lt(a,b), Eq(a,b))  <->  Sub(1, Lt(b,a))
//   a!=b : Sub(1, Eq(a,b))        <->  Add(Lt(a,b), Lt(b,a))
Circuit cmp_rewrite(const Circuit& c, const CostModel& model, const std::string& objective) {
  if (c.level == Level::Bool) return c;
  const auto uses = use_counts(c);
  const double leq_direct = form_cost({GateKind::Add, GateKind::Lt, GateKind::Eq}, model, objective);
  const double leq_rewrite = form_cost({GateKind::Sub, GateKind::Lt}, model, objective);
  const double neq_eq = form_cost({GateKind::Sub, GateKind::Eq}, model, objective);
  const double neq_lt = form_cost({GateKind::Add, GateKind::Lt, GateKind::Lt}, model, objective);

  auto single = [&](NodeId id, GateKind k) { return c.nodes[id].kind == k && uses[id] == 1; };
  auto is_one = [&](NodeId id) { return const_value(c, id) == 1; };

  bool changed = false;
  Rebuild rb(c);
  Circuit out = rb.run([&](NodeId id, const Node& n) -> NodeId {
    const Node& orig = c.nodes[id];
    auto lt = [&](NodeId p, NodeId q, const Meta& m) { return rb.out.add_node(GateKind::Lt, {p, q}, m); };
    auto eq = [&](NodeId p, NodeId q, const Meta& m) { return rb.out.add_node(GateKind::Eq, {p, q}, m); };
    if (orig.kind == GateKind::Add) {
      for (std::size_t i = 0; i < 2; ++i) {
        const NodeId x = orig.operands[i], y = orig.operands[1 - i];
        if (!single(x, GateKind::Lt)) continue;
        const auto& lx = c.nodes[x].operands;
        // Add(Lt(p,q), Eq(p,q)) with Eq operands in either order.
        if (single(y, GateKind::Eq) && leq_rewrite < leq_direct) {
          const auto& ey = c.nodes[y].operands;
          if ((ey[0] == lx[0] && ey[1] == lx[1]) || (ey[0] == lx[1] && ey[1] == lx[0])) {
            changed = true;
            NodeId flipped = lt(rb.map[lx[1]], rb.map[lx[0]], c.nodes[x].meta);
            return rb.out.add_node(GateKind::Sub, {rb.out.add_const(1), flipped}, n.meta);
          }
        }
        // Add(Lt(p,q), Lt(q,p)).
        if (i == 0 && single(y, GateKind::Lt) && neq_eq < neq_lt) {
          const auto& ly = c.nodes[y].operands;
          if (ly[0] == lx[1] && ly[1] == lx[0]) {
            changed = true;
            NodeId e = eq(rb.map[lx[0]], rb.map[lx[1]], c.nodes[x].meta);
            return rb.out.add_node(GateKind::Sub, {rb.out.add_const(1), e}, n.meta);
          }
        }
      }
    }
    if (orig.kind == GateKind::Sub && is_one(orig.operands[0])) {
      const NodeId x = orig.operands[1];
      const auto& ops = c.nodes[x].operands;
      if (single(x, GateKind::Lt) && leq_direct < leq_rewrite) {
        // 1 - Lt(q,p) is p<=q.
        changed = true;
        const NodeId p = rb.map[ops[1]], q = rb.map[ops[0]];
        const Meta& m = c.nodes[x].meta;
        return rb.out.add_node(GateKind::Add, {lt(p, q, m), eq(p, q, m)}, n.meta);
      }
      if (single(x, GateKind::Eq) && neq_lt < neq_eq) {
        changed = true;
        const NodeId p = rb.map[ops[0]], q = rb.map[ops[1]];
        const Meta& m = c.nodes[x].meta;
        return rb.out.add_node(GateKind::Add, {lt(p, q, m), lt(q, p, m)}, n.meta);
      }
    }
    return rb.emit(n, id);
  });
  return changed ? dce(out) : c;
}

std::vector<std::string> default_pass_list() {
  return {"const_fold", "peephole", "strength_reduce", "pow_rewrite", "cse", "dce", "cmp_rewrite"};
}

namespace {

bool known_pass(const std::string& name) {
  const auto all = default_pass_list();
  return std::find(all.begin(), all.end(), name) != all.end();
}

}  // namespace

std::vector<std::string> parse_pass_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    if (!known_pass(item)) throw Error("unknown pass '" + item + "'");
    out.push_back(item);
  }
  return out;
}

Circuit optimize(const Circuit& c, const OptimizeOptions& opts) {
  for (const auto& p : opts.passes)
    if (!known_pass(p)) throw Error("unknown pass '" + p + "'");
  Circuit cur = c;
  for (int round = 0; round < opts.max_rounds; ++round) {
    Circuit next = cur;
    for (const auto& p : opts.passes) {
      if (p == "const_fold") next = const_fold(next);
      else if (p == "peephole") next = peephole(next);
      else if (p == "strength_reduce") next = strength_reduce(next);
      else if (p == "pow_rewrite") next = pow_rewrite(next);
      else if (p == "cse") next = cse(next);
      else if (p == "dce") next = dce(next);
      else if (p == "cmp_rewrite") next = cmp_rewrite(next, opts.model, opts.objective);
    }
    if (next == cur) break;
    cur = std::move(next);
  }
  return cur;
}

}  // namespace hml
