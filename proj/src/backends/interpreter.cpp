#include <json.hpp>

#include "hml/backends.hpp"

namespace hml {

InputMap parse_inputs_json(std::string_view text) {
  InputMap out;
  try {
    auto root = nlohmann::json::parse(text);
    for (const auto& [pid, vars] : root.at("parties").items()) {
      std::size_t used = 0;
      const unsigned long party = std::stoul(pid, &used);
      if (used != pid.size()) throw Error("inputs: party id '" + pid + "' is not a number");
      for (const auto& [name, v] : vars.items()) {
        if (v.is_array()) {
          for (std::size_t i = 0; i < v.size(); ++i)
            out[{static_cast<Party>(party), name + "[" + std::to_string(i) + "]"}] = v[i].get<std::int64_t>();
        } else {
          out[{static_cast<Party>(party), name}] = v.get<std::int64_t>();
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("inputs: malformed JSON: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw Error("inputs: party ids must be numbers");
  }
  return out;
}

std::string outputs_to_json(const OutputMap& outputs, int indent) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : outputs) j[k] = v;
  return j.dump(indent) + "\n";
}

namespace {

std::int64_t lookup_input(const InputPort& p, const InputMap& inputs, std::uint32_t w) {
  auto it = inputs.find({p.party, p.name});
  if (it == inputs.end())
    throw MissingInputError("missing input '" + p.name + "' of party " + std::to_string(p.party));
  const std::int64_t v = it->second;
  const std::int64_t limit = std::int64_t{1} << (w - 2);
  if (v >= limit || v <= -limit)
    throw OverflowContractError("input '" + p.name + "' = " + std::to_string(v) + " exceeds |v| < 2^" +
                                std::to_string(w - 2));
  return v;
}

}  // namespace

OutputMap interpret_clear(const Circuit& c, const InputMap& inputs, std::uint64_t* evaluations) {
  if (auto errs = validate(c); !errs.empty()) throw CircuitError("interpret_clear: " + errs.front());
  const std::uint32_t w = c.bitwidth;
  std::vector<std::int64_t> val(c.nodes.size(), 0);
  std::map<NodeId, const InputPort*> port_of;
  for (const auto& in : c.inputs) port_of[in.node] = &in;
  std::uint64_t count = 0;
  std::vector<std::int64_t> args;
  for (NodeId id = 0; id < c.nodes.size(); ++id) {
    const Node& n = c.nodes[id];
    switch (n.kind) {
      case GateKind::Const: val[id] = wrap(*n.payload, w); break;
      case GateKind::ConstBit: val[id] = *n.payload; break;
      case GateKind::Input:
      case GateKind::InputBit: {
        const InputPort& p = *port_of.at(id);
        const auto word = static_cast<std::uint64_t>(lookup_input(p, inputs, w));
        // A bit port reads one bit of the word, whatever the node level.
        val[id] = p.bit ? static_cast<std::int64_t>((word >> *p.bit) & 1) : wrap(static_cast<std::int64_t>(word), w);
        break;
      }
      default:
        args.clear();
        for (NodeId o : n.operands) args.push_back(val[o]);
        val[id] = eval_gate(n.kind, args, n.payload, w);
        ++count;
    }
  }
  if (evaluations) *evaluations = count;

  OutputMap out;
  std::map<std::string, std::uint64_t> words;
  for (const auto& o : c.outputs) {
    if (!o.bit) {
      out[o.name] = val[o.node];
      continue;
    }
    words.try_emplace(o.name, 0);
    words[o.name] |= static_cast<std::uint64_t>(val[o.node] & 1) << *o.bit;
  }
  for (const auto& [name, bits] : words) out[name] = wrap(static_cast<std::int64_t>(bits), w);
  return out;
}

}  // namespace hml
