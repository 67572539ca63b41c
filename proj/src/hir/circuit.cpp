#include "hml/circuit.hpp"

#include <json.hpp>

namespace hml {

namespace {

struct KindInfo {
  GateKind kind;
  const char* name;
  std::size_t arity;
};

constexpr KindInfo kKinds[] = {
    {GateKind::Const, "Const", 0},       {GateKind::Input, "Input", 0},
    {GateKind::Add, "Add", 2},           {GateKind::Sub, "Sub", 2},
    {GateKind::Mul, "Mul", 2},           {GateKind::MulPlain, "MulPlain", 1},
    {GateKind::Lt, "Lt", 2},             {GateKind::Leq, "Leq", 2},
    {GateKind::Eq, "Eq", 2},             {GateKind::Mux, "Mux", 3},
    {GateKind::Reveal, "Reveal", 1},     {GateKind::ConstBit, "ConstBit", 0},
    {GateKind::InputBit, "InputBit", 0}, {GateKind::And, "And", 2},
    {GateKind::Or, "Or", 2},             {GateKind::Xor, "Xor", 2},
    {GateKind::Not, "Not", 1},           {GateKind::MuxBit, "MuxBit", 3},
    {GateKind::RevealBit, "RevealBit", 1},
};

const KindInfo& info(GateKind k) { return kKinds[static_cast<std::size_t>(k)]; }

}  // namespace

const char* to_string(GateKind k) { return info(k).name; }

std::optional<GateKind> parse_gate_kind(std::string_view name) {
  for (const auto& i : kKinds)
    if (name == i.name) return i.kind;
  return std::nullopt;
}

bool is_bool_kind(GateKind k) { return k >= GateKind::ConstBit; }

bool is_structural(GateKind k) {
  return k == GateKind::Const || k == GateKind::Input || k == GateKind::ConstBit ||
         k == GateKind::InputBit;
}

bool is_reveal(GateKind k) { return k == GateKind::Reveal || k == GateKind::RevealBit; }

bool is_commutative(GateKind k) {
  switch (k) {
    case GateKind::Add:
    case GateKind::Mul:
    case GateKind::Eq:
    case GateKind::And:
    case GateKind::Or:
    case GateKind::Xor:
      return true;
    default:
      return false;
  }
}

std::size_t arity(GateKind k) { return info(k).arity; }

bool has_payload(GateKind k) {
  return k == GateKind::Const || k == GateKind::MulPlain || k == GateKind::ConstBit;
}

const char* to_string(Level l) {
  switch (l) {
    case Level::Arith: return "arith";
    case Level::Bool: return "bool";
    case Level::Mixed: return "mixed";
  }
  return "?";
}

Level parse_level(std::string_view name) {
  if (name == "arith") return Level::Arith;
  if (name == "bool") return Level::Bool;
  if (name == "mixed") return Level::Mixed;
  throw Error("unknown level '" + std::string(name) + "' (expected arith, bool or mixed)");
}

std::string to_string(const Meta& m) {
  switch (m.kind) {
    case Meta::Kind::Plain: return "plain";
    case Meta::Kind::Enc: return "enc" + to_string(m.provider);
    case Meta::Kind::Shared:
      return "shared(provider=" + to_string(m.provider) + ",players=" + to_string(m.players) +
             ",observers=" + to_string(m.observers) + ",t=" + std::to_string(m.threshold) + ")";
  }
  return "?";
}

Meta combine_share_meta(const Meta& a, const Meta& b, const Scheme& scheme) {
  if (a.kind != Meta::Kind::Shared || b.kind != Meta::Kind::Shared)
    throw ShareMismatchError("combine_share_meta: both operands must be shared");
  if (a.players != b.players)
    throw ShareMismatchError("x.players == y.players failed: " + to_string(a.players) + " vs " +
                             to_string(b.players));
  if (a.threshold != b.threshold)
    throw ShareMismatchError("x.threshold == y.threshold failed: " +
                             std::to_string(a.threshold) + " vs " + std::to_string(b.threshold));
  const bool additive = scheme.kind == Scheme::Kind::AdditiveShare;
  if (additive && a.players.size() != a.threshold)
    throw ShareMismatchError("x.players.size == x.threshold failed: " +
                             std::to_string(a.players.size()) + " vs " +
                             std::to_string(a.threshold));
  OwnerSet observers =
      additive ? a.observers.intersect(b.observers) : a.observers.unite(b.observers);
  return Meta::shared(a.provider.unite(b.provider), a.players, std::move(observers),
                      a.threshold);
}

Meta combine_meta(const Meta& a, const Meta& b, const Scheme& scheme) {
  if (a.kind == Meta::Kind::Plain) return b;
  if (b.kind == Meta::Kind::Plain) return a;
  if (a.kind == Meta::Kind::Enc && b.kind == Meta::Kind::Enc)
    return Meta::enc(a.provider.unite(b.provider));
  if (a.kind == Meta::Kind::Shared && b.kind == Meta::Kind::Shared)
    return combine_share_meta(a, b, scheme);
  throw ShareMismatchError("cannot combine " + to_string(a) + " with " + to_string(b));
}

Circuit::Circuit(Level lvl, std::uint32_t width) : level(lvl), bitwidth(width) {}

NodeId Circuit::add_node(GateKind kind, std::vector<NodeId> operands, Meta meta,
                         std::optional<std::int64_t> payload) {
  if (operands.size() != arity(kind))
    throw ArityError(std::string(to_string(kind)) + " takes " + std::to_string(arity(kind)) +
                     " operand(s), got " + std::to_string(operands.size()));
  if (has_payload(kind) != payload.has_value())
    throw ArityError(std::string(to_string(kind)) +
                     (payload ? " takes no payload" : " requires a payload"));
  const auto id = static_cast<NodeId>(nodes.size());
  for (NodeId op : operands)
    if (op >= id)
      throw ForwardReferenceError("operand " + std::to_string(op) + " of new node " +
                                  std::to_string(id) + " does not exist yet");
  nodes.push_back(Node{kind, std::move(operands), std::move(meta), payload, {}});
  return id;
}

NodeId Circuit::add_const(std::int64_t value) {
  return add_node(GateKind::Const, {}, Meta::plain(), value);
}

NodeId Circuit::add_input(Party party, std::string name, Meta meta,
                          std::optional<std::uint32_t> bit) {
  NodeId id = add_node(bit ? GateKind::InputBit : GateKind::Input, {}, std::move(meta));
  inputs.push_back(InputPort{id, party, std::move(name), bit});
  return id;
}

NodeId Circuit::add_reveal(NodeId value, OwnerSet audience) {
  const bool bit = is_bool_kind(nodes.at(value).kind);
  NodeId id = add_node(bit ? GateKind::RevealBit : GateKind::Reveal, {value});
  nodes[id].audience = std::move(audience);
  return id;
}

void Circuit::add_output(NodeId reveal, std::string name, std::optional<std::uint32_t> bit) {
  outputs.push_back(OutputPort{reveal, nodes.at(reveal).audience, std::move(name), bit});
}

std::size_t Circuit::count(GateKind k) const {
  std::size_t n = 0;
  for (const auto& node : nodes) n += node.kind == k;
  return n;
}

std::vector<std::string> validate(const Circuit& c, const Scheme& scheme) {
  std::vector<std::string> out;
  auto at = [](NodeId id) { return "node " + std::to_string(id) + ": "; };
  if (c.bitwidth < 2 || c.bitwidth > 64)
    out.push_back("bitwidth " + std::to_string(c.bitwidth) + " outside [2, 64]");
  std::vector<int> input_refs(c.nodes.size(), 0);
  for (NodeId id = 0; id < c.nodes.size(); ++id) {
    const Node& n = c.nodes[id];
    if (n.operands.size() != arity(n.kind)) {
      out.push_back(at(id) + "arity of " + to_string(n.kind) + " is " +
                    std::to_string(arity(n.kind)) + ", found " +
                    std::to_string(n.operands.size()));
      continue;
    }
    bool refs_ok = true;
    for (NodeId op : n.operands) {
      if (op >= id) {
        out.push_back(at(id) + "operand " + std::to_string(op) + " is not topologically earlier");
        refs_ok = false;
      }
    }
    if (has_payload(n.kind) != n.payload.has_value())
      out.push_back(at(id) + "payload mismatch for " + to_string(n.kind));
    if (n.kind == GateKind::ConstBit && n.payload && *n.payload != 0 && *n.payload != 1)
      out.push_back(at(id) + "ConstBit payload must be 0 or 1");
    if (c.level == Level::Bool && !is_bool_kind(n.kind))
      out.push_back(at(id) + "level purity: " + to_string(n.kind) + " in a bool circuit");
    if (c.level == Level::Arith && is_bool_kind(n.kind))
      out.push_back(at(id) + "level purity: " + to_string(n.kind) + " in an arith circuit");
    if ((n.kind == GateKind::Const || n.kind == GateKind::ConstBit) &&
        n.meta.kind != Meta::Kind::Plain)
      out.push_back(at(id) + "constants carry plain metadata");
    if (n.meta.kind == Meta::Kind::Shared &&
        (n.meta.threshold == 0 || n.meta.threshold > n.meta.players.size()))
      out.push_back(at(id) + "threshold exceeds player count");
    if (refs_ok && n.operands.size() >= 2 && !is_reveal(n.kind)) {
      // Selector operands are compared the same way as data operands.
      Meta acc = Meta::plain();
      try {
        for (NodeId op : n.operands) acc = combine_meta(acc, c.nodes[op].meta, scheme);
      } catch (const ShareMismatchError& e) {
        out.push_back(at(id) + "metadata: " + e.what());
      }
    }
    if (n.kind == GateKind::Input || n.kind == GateKind::InputBit) input_refs[id] = 0;
  }
  for (const auto& in : c.inputs) {
    if (in.node >= c.nodes.size()) {
      out.push_back("input '" + in.name + "' refers to missing node " + std::to_string(in.node));
      continue;
    }
    GateKind k = c.nodes[in.node].kind;
    if (k != GateKind::Input && k != GateKind::InputBit)
      out.push_back("input '" + in.name + "' refers to a " + to_string(k) + " node");
    ++input_refs[in.node];
  }
  for (NodeId id = 0; id < c.nodes.size(); ++id) {
    GateKind k = c.nodes[id].kind;
    if ((k == GateKind::Input || k == GateKind::InputBit) && input_refs[id] != 1)
      out.push_back(at(id) + "input node must be bound to exactly one input port");
  }
  for (const auto& o : c.outputs) {
    if (o.node >= c.nodes.size()) {
      out.push_back("output '" + o.name + "' refers to missing node " + std::to_string(o.node));
      continue;
    }
    if (!is_reveal(c.nodes[o.node].kind))
      out.push_back("output '" + o.name + "' is not a reveal node");
  }
  return out;
}

std::vector<NodeId> topological_eval_order(const Circuit& c) {
  std::vector<NodeId> order(c.nodes.size());
  for (NodeId i = 0; i < order.size(); ++i) order[i] = i;
  return order;
}

std::int64_t wrap(std::int64_t v, std::uint32_t bitwidth) {
  if (bitwidth >= 64) return v;
  const auto u = static_cast<std::uint64_t>(v);
  const std::uint64_t mask = (std::uint64_t{1} << bitwidth) - 1;
  const std::uint64_t sign = std::uint64_t{1} << (bitwidth - 1);
  const std::uint64_t low = u & mask;
  return static_cast<std::int64_t>((low ^ sign) - sign);
}

std::int64_t eval_gate(GateKind kind, std::span<const std::int64_t> a,
                       std::optional<std::int64_t> payload, std::uint32_t w) {
  auto u = [](std::int64_t v) { return static_cast<std::uint64_t>(v); };
  auto s = [](std::uint64_t v) { return static_cast<std::int64_t>(v); };
  switch (kind) {
    case GateKind::Const: return wrap(payload.value_or(0), w);
    case GateKind::Add: return wrap(s(u(a[0]) + u(a[1])), w);
    case GateKind::Sub: return wrap(s(u(a[0]) - u(a[1])), w);
    case GateKind::Mul: return wrap(s(u(a[0]) * u(a[1])), w);
    case GateKind::MulPlain: return wrap(s(u(a[0]) * u(payload.value_or(0))), w);
    case GateKind::Lt: return wrap(s(u(a[0]) - u(a[1])), w) < 0 ? 1 : 0;
    case GateKind::Leq: return wrap(s(u(a[1]) - u(a[0])), w) < 0 ? 0 : 1;
    case GateKind::Eq: return wrap(a[0], w) == wrap(a[1], w) ? 1 : 0;
    case GateKind::Mux:
    case GateKind::MuxBit: return (a[0] & 1) ? a[1] : a[2];
    case GateKind::Reveal:
    case GateKind::RevealBit: return a[0];
    case GateKind::ConstBit: return payload.value_or(0) & 1;
    case GateKind::And: return a[0] & a[1] & 1;
    case GateKind::Or: return (a[0] | a[1]) & 1;
    case GateKind::Xor: return (a[0] ^ a[1]) & 1;
    case GateKind::Not: return (a[0] & 1) ^ 1;
    case GateKind::Input:
    case GateKind::InputBit: break;
  }
  throw Error(std::string("eval_gate: ") + to_string(kind) + " has no gate semantics");
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

json owners_json(const OwnerSet& o) { return json(o.parties()); }

OwnerSet owners_from(const json& j) { return OwnerSet(j.get<std::vector<Party>>()); }

json meta_json(const Meta& m) {
  switch (m.kind) {
    case Meta::Kind::Plain: return {{"kind", "plain"}};
    case Meta::Kind::Enc: return {{"kind", "enc"}, {"provider", owners_json(m.provider)}};
    case Meta::Kind::Shared:
      return {{"kind", "shared"},
              {"provider", owners_json(m.provider)},
              {"players", owners_json(m.players)},
              {"observers", owners_json(m.observers)},
              {"threshold", m.threshold}};
  }
  return {};
}

Meta meta_from(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "plain") return Meta::plain();
  if (kind == "enc") return Meta::enc(owners_from(j.at("provider")));
  if (kind == "shared")
    return Meta::shared(owners_from(j.at("provider")), owners_from(j.at("players")),
                        owners_from(j.at("observers")), j.at("threshold").get<std::uint32_t>());
  throw CircuitError("unknown meta kind '" + kind + "'");
}

}  // namespace

std::string circuit_to_json(const Circuit& c, int indent) {
  json nodes = json::array();
  for (NodeId id = 0; id < c.nodes.size(); ++id) {
    const Node& n = c.nodes[id];
    json j = {{"id", id},
              {"kind", to_string(n.kind)},
              {"operands", n.operands},
              {"meta", meta_json(n.meta)},
              {"payload", n.payload ? json(*n.payload) : json(nullptr)}};
    if (is_reveal(n.kind)) j["audience"] = owners_json(n.audience);
    nodes.push_back(std::move(j));
  }
  json inputs = json::array();
  for (const auto& in : c.inputs) {
    json j = {{"node", in.node}, {"party", in.party}, {"name", in.name}};
    if (in.bit) j["bit"] = *in.bit;
    inputs.push_back(std::move(j));
  }
  json outputs = json::array();
  for (const auto& o : c.outputs) {
    json j = {{"node", o.node}, {"audience", owners_json(o.audience)}, {"name", o.name}};
    if (o.bit) j["bit"] = *o.bit;
    outputs.push_back(std::move(j));
  }
  json root = {{"level", to_string(c.level)},
               {"bitwidth", c.bitwidth},
               {"nodes", std::move(nodes)},
               {"inputs", std::move(inputs)},
               {"outputs", std::move(outputs)}};
  return root.dump(indent) + "\n";
}

Circuit circuit_from_json(std::string_view text) {
  try {
    json root = json::parse(text);
    Circuit c(parse_level(root.at("level").get<std::string>()),
              root.at("bitwidth").get<std::uint32_t>());
    const json& nodes = root.at("nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const json& j = nodes[i];
      if (j.at("id").get<std::size_t>() != i)
        throw CircuitError("node id " + j.at("id").dump() + " at position " + std::to_string(i));
      const std::string kname = j.at("kind").get<std::string>();
      auto kind = parse_gate_kind(kname);
      if (!kind) throw CircuitError("unknown gate kind '" + kname + "'");
      std::optional<std::int64_t> payload;
      if (j.contains("payload") && !j["payload"].is_null())
        payload = j["payload"].get<std::int64_t>();
      NodeId id = c.add_node(*kind, j.at("operands").get<std::vector<NodeId>>(),
                             meta_from(j.at("meta")), payload);
      if (j.contains("audience")) c.nodes[id].audience = owners_from(j["audience"]);
    }
    for (const json& j : root.at("inputs")) {
      InputPort p{j.at("node").get<NodeId>(), j.at("party").get<Party>(),
                  j.at("name").get<std::string>(), std::nullopt};
      if (j.contains("bit")) p.bit = j["bit"].get<std::uint32_t>();
      c.inputs.push_back(std::move(p));
    }
    for (const json& j : root.at("outputs")) {
      OutputPort p{j.at("node").get<NodeId>(), owners_from(j.at("audience")),
                   j.at("name").get<std::string>(), std::nullopt};
      if (j.contains("bit")) p.bit = j["bit"].get<std::uint32_t>();
      c.outputs.push_back(std::move(p));
    }
    return c;
  } catch (const json::exception& e) {
    throw CircuitError(std::string("malformed circuit JSON: ") + e.what());
  }
}

}  // namespace hml
