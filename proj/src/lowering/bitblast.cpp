#include <map>

#include "hml/lower.hpp"

namespace hml {

namespace {

using Bits = std::vector<NodeId>;  // least significant first

class Blaster {
 public:
  explicit Blaster(const Circuit& src) : src_(src), out_(Level::Bool, src.bitwidth), w_(src.bitwidth) {}

  Circuit run() {
    words_.resize(src_.nodes.size());
    std::map<NodeId, const InputPort*> ports;
    for (const auto& in : src_.inputs) ports[in.node] = &in;
    for (NodeId id = 0; id < src_.nodes.size(); ++id) {
      const Node& n = src_.nodes[id];
      if (n.kind == GateKind::Input) {
        const InputPort* p = ports.at(id);
        Bits b;
        for (std::uint32_t k = 0; k < w_; ++k) b.push_back(out_.add_input(p->party, p->name, n.meta, k));
        words_[id] = std::move(b);
      } else {
        words_[id] = lower(n);
      }
    }
    for (const auto& o : src_.outputs) {
      const Bits& b = words_[o.node];
      for (std::uint32_t k = 0; k < w_; ++k) out_.add_output(b[k], o.name, k);
    }
    return std::move(out_);
  }

 private:
  const Circuit& src_;
  Circuit out_;
  std::uint32_t w_;
  std::vector<Bits> words_;
  std::optional<NodeId> zero_, one_;

  NodeId g(GateKind k, std::vector<NodeId> ops) {
    Meta m = Meta::plain();
    for (NodeId o : ops) m = combine_meta(m, out_.nodes[o].meta, Scheme::generic());
    return out_.add_node(k, std::move(ops), std::move(m));
  }

  NodeId bit(bool v) {
    auto& slot = v ? one_ : zero_;
    if (!slot) slot = out_.add_node(GateKind::ConstBit, {}, Meta::plain(), v ? 1 : 0);
    return *slot;
  }

  Bits constant(std::int64_t v) {
    Bits b;
    const auto u = static_cast<std::uint64_t>(v);
    for (std::uint32_t k = 0; k < w_; ++k) b.push_back(bit((u >> k) & 1));
    return b;
  }

  // Ripple carry: t=a^b, s=t^c, u=a&b, v=t&c, c'=u|v. Always full cells.
  Bits add(const Bits& a, const Bits& b, NodeId carry) {
    Bits s;
    for (std::uint32_t k = 0; k < w_; ++k) {
      NodeId t = g(GateKind::Xor, {a[k], b[k]});
      s.push_back(g(GateKind::Xor, {t, carry}));
      NodeId u = g(GateKind::And, {a[k], b[k]});
      NodeId v = g(GateKind::And, {t, carry});
      carry = g(GateKind::Or, {u, v});
    }
    return s;
  }

  Bits sub(const Bits& a, const Bits& b) {
    Bits nb;
    for (NodeId x : b) nb.push_back(g(GateKind::Not, {x}));
    return add(a, nb, bit(true));
  }

  Bits flag(NodeId b0) {
    Bits out(w_, bit(false));
    out[0] = b0;
    return out;
  }

  Bits shifted(const Bits& a, std::uint32_t by) {
    Bits out(w_, bit(false));
    for (std::uint32_t k = by; k < w_; ++k) out[k] = a[k - by];
    return out;
  }

  Bits mul(const Bits& a, const Bits& b) {
    std::optional<Bits> acc;
    for (std::uint32_t i = 0; i < w_; ++i) {
      Bits partial(w_, bit(false));
      for (std::uint32_t k = i; k < w_; ++k) partial[k] = g(GateKind::And, {a[k - i], b[i]});
      acc = acc ? add(*acc, partial, bit(false)) : partial;
    }
    return *acc;
  }

  Bits mul_plain(const Bits& a, std::int64_t scalar) {
    const auto u = static_cast<std::uint64_t>(scalar);
    std::optional<Bits> acc;
    for (std::uint32_t i = 0; i < w_; ++i) {
      if (!((u >> i) & 1)) continue;
      Bits part = shifted(a, i);
      acc = acc ? add(*acc, part, bit(false)) : part;
    }
    return acc ? *acc : constant(0);
  }

  Bits eq(const Bits& a, const Bits& b) {
    Bits same;
    for (std::uint32_t k = 0; k < w_; ++k)
      same.push_back(g(GateKind::Not, {g(GateKind::Xor, {a[k], b[k]})}));
    while (same.size() > 1) {
      Bits next;
      for (std::size_t i = 0; i + 1 < same.size(); i += 2) next.push_back(g(GateKind::And, {same[i], same[i + 1]}));
      if (same.size() % 2) next.push_back(same.back());
      same = std::move(next);
    }
    return flag(same[0]);
  }

  Bits lower(const Node& n) {
    auto op = [&](std::size_t i) -> const Bits& { return words_[n.operands[i]]; };
    switch (n.kind) {
      case GateKind::Const: return constant(*n.payload);
      case GateKind::Add: return add(op(0), op(1), bit(false));
      case GateKind::Sub: return sub(op(0), op(1));
      case GateKind::Mul: return mul(op(0), op(1));
      case GateKind::MulPlain: return mul_plain(op(0), *n.payload);
      case GateKind::Lt: return flag(sub(op(0), op(1))[w_ - 1]);
      case GateKind::Leq: return flag(g(GateKind::Not, {sub(op(1), op(0))[w_ - 1]}));
      case GateKind::Eq: return eq(op(0), op(1));
      case GateKind::Mux: {
        Bits out;
        for (std::uint32_t k = 0; k < w_; ++k) out.push_back(g(GateKind::MuxBit, {op(0)[0], op(1)[k], op(2)[k]}));
        return out;
      }
      case GateKind::Reveal: {
        Bits out;
        for (std::uint32_t k = 0; k < w_; ++k) out.push_back(out_.add_reveal(op(0)[k], n.audience));
        return out;
      }
      default: break;
    }
    throw BitblastError(std::string("bitblast: unsupported gate ") + to_string(n.kind));
  }
};

}  // namespace

Circuit bitblast(const Circuit& c) {
  if (c.level != Level::Arith) throw BitblastError("bitblast expects an arith-level circuit");
  return Blaster(c).run();
}

Circuit bool_to_arith(const Circuit& c) {
  if (c.level != Level::Bool) throw Error("bool_to_arith expects a bool-level circuit");
  Circuit out(Level::Arith, c.bitwidth);
  std::vector<NodeId> map(c.nodes.size());
  std::map<NodeId, const InputPort*> ports;
  for (const auto& in : c.inputs) ports[in.node] = &in;
  auto g = [&](GateKind k, std::vector<NodeId> ops, std::optional<std::int64_t> payload = {}) {
    Meta m = Meta::plain();
    for (NodeId o : ops) m = combine_meta(m, out.nodes[o].meta, Scheme::generic());
    return out.add_node(k, std::move(ops), std::move(m), payload);
  };
  for (NodeId id = 0; id < c.nodes.size(); ++id) {
    const Node& n = c.nodes[id];
    auto a = [&](std::size_t i) { return map[n.operands[i]]; };
    switch (n.kind) {
      case GateKind::ConstBit: map[id] = out.add_const(*n.payload); break;
      case GateKind::InputBit: {
        const InputPort* p = ports.at(id);
        map[id] = out.add_input(p->party, p->name, n.meta);
        out.inputs.back().bit = p->bit;
        break;
      }
      case GateKind::And: map[id] = g(GateKind::Mul, {a(0), a(1)}); break;
      case GateKind::Xor: {
        NodeId sum = g(GateKind::Add, {a(0), a(1)});
        NodeId twice = g(GateKind::MulPlain, {g(GateKind::Mul, {a(0), a(1)})}, 2);
        map[id] = g(GateKind::Sub, {sum, twice});
        break;
      }
      case GateKind::Or: {
        NodeId sum = g(GateKind::Add, {a(0), a(1)});
        map[id] = g(GateKind::Sub, {sum, g(GateKind::Mul, {a(0), a(1)})});
        break;
      }
      case GateKind::Not: map[id] = g(GateKind::Sub, {out.add_const(1), a(0)}); break;
      case GateKind::MuxBit: map[id] = g(GateKind::Mux, {a(0), a(1), a(2)}); break;
      case GateKind::RevealBit: map[id] = out.add_reveal(a(0), n.audience); break;
      default: throw Error(std::string("bool_to_arith: unexpected gate ") + to_string(n.kind));
    }
  }
  for (const auto& o : c.outputs) out.add_output(map[o.node], o.name, o.bit);
  return out;
}

}  // namespace hml
