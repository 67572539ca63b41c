#include <sstream>

#include "hml/backends.hpp"

namespace hml {

namespace {

const char* op_name(GateKind k) {
  switch (k) {
    case GateKind::And: return "AND";
    case GateKind::Xor: return "XOR";
    case GateKind::Not: return "INV";
    case GateKind::Or: return "OR";
    case GateKind::MuxBit: return "MUX";
    default: return nullptr;
  }
}

std::string audience_text(const OwnerSet& s) {
  if (s.empty()) return "-";
  std::string out;
  for (Party p : s.parties()) out += (out.empty() ? "" : ",") + std::to_string(p);
  return out;
}

OwnerSet parse_audience(const std::string& text) {
  std::vector<Party> parties;
  if (text == "-") return OwnerSet{};
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parties.push_back(static_cast<Party>(std::stoul(item)));
  return OwnerSet(std::move(parties));
}

}  // namespace

std::string emit_gatelist(const Circuit& c) {
  if (c.level != Level::Bool) throw LevelError("emit_gatelist: circuit is not at Bool level");
  if (auto errs = validate(c); !errs.empty()) throw CircuitError("emit_gatelist: " + errs.front());
  std::map<NodeId, const InputPort*> port_of;
  for (const auto& in : c.inputs) port_of[in.node] = &in;

  constexpr std::uint32_t kNone = ~std::uint32_t{0};
  std::vector<std::uint32_t> wire(c.nodes.size(), kNone);
  std::uint32_t next = 0;
  std::ostringstream meta;
  for (NodeId id = 0; id < c.nodes.size(); ++id)
    if (c.nodes[id].kind == GateKind::InputBit) {
      const InputPort& p = *port_of.at(id);
      wire[id] = next++;
      meta << "in " << wire[id] << ' ' << p.party << ' ' << p.name << ' ' << p.bit.value_or(0) << '\n';
    }
  const std::uint32_t num_inputs = next;
  for (NodeId id = 0; id < c.nodes.size(); ++id)
    if (c.nodes[id].kind == GateKind::ConstBit) {
      wire[id] = next++;
      meta << "const " << wire[id] << ' ' << *c.nodes[id].payload << '\n';
    }

  std::ostringstream gates;
  std::size_t num_gates = 0;
  for (NodeId id = 0; id < c.nodes.size(); ++id) {
    const Node& n = c.nodes[id];
    if (n.kind == GateKind::RevealBit) {
      wire[id] = wire[n.operands[0]];
      continue;
    }
    const char* name = op_name(n.kind);
    if (!name) continue;
    wire[id] = next++;
    gates << n.operands.size() << " 1";
    for (NodeId o : n.operands) gates << ' ' << wire[o];
    gates << ' ' << wire[id] << ' ' << name << '\n';
    ++num_gates;
  }
  for (const auto& o : c.outputs)
    meta << "out " << wire[o.node] << ' ' << o.name << ' ' << o.bit.value_or(0) << ' '
         << audience_text(o.audience) << '\n';

  std::ostringstream out;
  out << num_gates << ' ' << next << '\n'
      << num_inputs << ' ' << c.outputs.size() << '\n'
      << gates.str() << "bitwidth " << c.bitwidth << '\n'
      << meta.str();
  return out.str();
}

GateList parse_gatelist(std::string_view text) {
  std::istringstream in{std::string(text)};
  GateList g;
  std::size_t num_gates = 0, num_inputs = 0, num_outputs = 0;
  if (!(in >> num_gates >> g.num_wires >> num_inputs >> num_outputs))
    throw Error("gate list: malformed header");
  std::string line;
  std::getline(in, line);
  std::size_t line_no = 2;
  auto fail = [&](const std::string& why) {
    throw Error("gate list line " + std::to_string(line_no) + ": " + why);
  };
  auto check_wire = [&](std::uint32_t w) {
    if (w >= g.num_wires) fail("wire " + std::to_string(w) + " out of range");
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (first == "bitwidth") {
      if (!(ls >> g.bitwidth) || g.bitwidth == 0 || g.bitwidth > 64) fail("bad bitwidth");
    } else if (first == "in") {
      GateListInput i;
      if (!(ls >> i.wire >> i.party >> i.name >> i.bit)) fail("bad input binding");
      check_wire(i.wire);
      g.inputs.push_back(i);
    } else if (first == "const") {
      std::uint32_t w;
      int v;
      if (!(ls >> w >> v) || (v != 0 && v != 1)) fail("bad constant");
      check_wire(w);
      g.constants.emplace_back(w, v);
    } else if (first == "out") {
      GateListOutput o;
      std::string aud;
      if (!(ls >> o.wire >> o.name >> o.bit >> aud)) fail("bad output binding");
      check_wire(o.wire);
      o.audience = parse_audience(aud);
      g.outputs.push_back(o);
    } else {
      GateListGate gate;
      if (first.find_first_not_of("0123456789") != std::string::npos) fail("unrecognized line");
      std::size_t arity = std::stoul(first), outs = 0;
      if (!(ls >> outs) || outs != 1) fail("gates have exactly one output");
      gate.ins.resize(arity);
      for (auto& w : gate.ins) {
        if (!(ls >> w)) fail("missing input wire");
        check_wire(w);
      }
      if (!(ls >> gate.out >> gate.op)) fail("missing output wire or op");
      check_wire(gate.out);
      const std::size_t want = gate.op == "INV" ? 1 : gate.op == "MUX" ? 3 : 2;
      if (gate.op != "AND" && gate.op != "XOR" && gate.op != "INV" && gate.op != "OR" && gate.op != "MUX")
        fail("unknown op '" + gate.op + "'");
      if (arity != want) fail("wrong arity for " + gate.op);
      g.gates.push_back(std::move(gate));
    }
  }
  if (g.gates.size() != num_gates) throw Error("gate list: gate count does not match header");
  if (g.inputs.size() != num_inputs) throw Error("gate list: input count does not match header");
  if (g.outputs.size() != num_outputs) throw Error("gate list: output count does not match header");
  if (g.bitwidth == 0) throw Error("gate list: missing bitwidth line");
  return g;
}

OutputMap evaluate_gatelist(const GateList& g, const InputMap& inputs) {
  std::vector<int> w(g.num_wires, 0);
  std::vector<bool> set(g.num_wires, false);
  for (const auto& i : g.inputs) {
    auto it = inputs.find({i.party, i.name});
    if (it == inputs.end())
      throw MissingInputError("missing input '" + i.name + "' of party " + std::to_string(i.party));
    w[i.wire] = static_cast<int>((static_cast<std::uint64_t>(it->second) >> i.bit) & 1);
    set[i.wire] = true;
  }
  for (const auto& [wire, v] : g.constants) {
    w[wire] = v;
    set[wire] = true;
  }
  for (const auto& gate : g.gates) {
    for (auto in : gate.ins)
      if (!set[in]) throw Error("gate list: wire " + std::to_string(in) + " read before it is set");
    auto a = [&](std::size_t k) { return w[gate.ins[k]]; };
    int v = 0;
    if (gate.op == "AND") v = a(0) & a(1);
    else if (gate.op == "XOR") v = a(0) ^ a(1);
    else if (gate.op == "OR") v = a(0) | a(1);
    else if (gate.op == "INV") v = 1 - a(0);
    else v = a(0) ? a(1) : a(2);
    w[gate.out] = v;
    set[gate.out] = true;
  }
  std::map<std::string, std::uint64_t> words;
  for (const auto& o : g.outputs) {
    words.try_emplace(o.name, 0);
    words[o.name] |= static_cast<std::uint64_t>(w[o.wire]) << o.bit;
  }
  OutputMap out;
  for (const auto& [name, bits] : words) out[name] = wrap(static_cast<std::int64_t>(bits), g.bitwidth);
  return out;
}

}  // namespace hml
