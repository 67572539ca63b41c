#include "hml/cost_model.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace hml {

using nlohmann::json;

double CostModel::cost(GateKind k, const std::string& resource) const {
  auto it = gate_costs.find(k);
  if (it == gate_costs.end()) return 0;
  auto r = it->second.find(resource);
  return r == it->second.end() ? 0 : r->second;
}

double CostModel::total_cost(GateKind k) const {
  auto it = gate_costs.find(k);
  if (it == gate_costs.end()) return 0;
  double sum = 0;
  for (const auto& [_, v] : it->second) sum += v;
  return sum;
}

std::int64_t CostModel::depth_weight(GateKind k) const {
  auto it = depth_weights.find(k);
  return it == depth_weights.end() ? 0 : it->second;
}

std::set<std::string> CostModel::resources() const {
  std::set<std::string> out;
  for (const auto& [_, v] : gate_costs)
    for (const auto& [r, _2] : v) out.insert(r);
  return out;
}

namespace {

GateKind kind_from(const std::string& name) {
  auto k = parse_gate_kind(name);
  if (!k) throw CostModelError("unknown gate kind '" + name + "' in cost model");
  return *k;
}

double nonneg(const json& j, const std::string& what) {
  double v = j.get<double>();
  if (!(v >= 0)) throw CostModelError(what + " must be nonnegative");
  return v;
}

ResourceVector resources_from(const json& j, const std::string& what) {
  ResourceVector out;
  for (const auto& [r, v] : j.items()) out[r] = nonneg(v, what + "." + r);
  return out;
}

json resources_json(const ResourceVector& v) {
  json j = json::object();
  for (const auto& [r, x] : v) j[r] = x;
  return j;
}

}  // namespace

CostModel parse_cost_model(std::string_view text) {
  try {
    json root = json::parse(text);
    CostModel m;
    m.name = root.at("name").get<std::string>();
    for (const auto& [k, v] : root.at("gate_costs").items())
      m.gate_costs[kind_from(k)] = resources_from(v, "gate_costs." + k);
    if (root.contains("depth_weights"))
      for (const auto& [k, v] : root["depth_weights"].items()) {
        auto d = v.get<std::int64_t>();
        if (d < 0) throw CostModelError("depth weight of " + k + " is negative");
        m.depth_weights[kind_from(k)] = d;
      }
    if (root.contains("preprocessing")) {
      const json& p = root["preprocessing"];
      if (p.contains("triples_per_mul"))
        m.preprocessing.triples_per_mul = nonneg(p["triples_per_mul"], "triples_per_mul");
      if (p.contains("triples_per_comparison") && !p["triples_per_comparison"].is_null())
        m.preprocessing.triples_per_comparison =
            nonneg(p["triples_per_comparison"], "triples_per_comparison");
      if (p.contains("bits_per_comparison") && !p["bits_per_comparison"].is_null())
        m.preprocessing.bits_per_comparison =
            nonneg(p["bits_per_comparison"], "bits_per_comparison");
    }
    if (root.contains("prime_modulus") && !root["prime_modulus"].is_null()) {
      auto p = root["prime_modulus"].get<std::uint64_t>();
      if (p < 2) throw CostModelError("prime_modulus must be at least 2");
      m.prime_modulus = p;
    }
    if (root.contains("edge_costs"))
      for (const json& e : root["edge_costs"])
        m.edge_costs[{kind_from(e.at("from").get<std::string>()),
                      kind_from(e.at("to").get<std::string>())}] =
            resources_from(e.at("costs"), "edge_costs");
    return m;
  } catch (const json::exception& e) {
    throw CostModelError(std::string("malformed cost model: ") + e.what());
  }
}

CostModel load_cost_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CostModelError("cannot read cost model '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_cost_model(ss.str());
}

std::string cost_model_to_json(const CostModel& m, int indent) {
  json gc = json::object();
  for (const auto& [k, v] : m.gate_costs) gc[to_string(k)] = resources_json(v);
  json dw = json::object();
  for (const auto& [k, v] : m.depth_weights) dw[to_string(k)] = v;
  json pre = {{"triples_per_mul", m.preprocessing.triples_per_mul}};
  pre["triples_per_comparison"] = m.preprocessing.triples_per_comparison
                                      ? json(*m.preprocessing.triples_per_comparison)
                                      : json(nullptr);
  pre["bits_per_comparison"] = m.preprocessing.bits_per_comparison
                                   ? json(*m.preprocessing.bits_per_comparison)
                                   : json(nullptr);
  json edges = json::array();
  for (const auto& [k, v] : m.edge_costs)
    edges.push_back({{"from", to_string(k.first)}, {"to", to_string(k.second)},
                     {"costs", resources_json(v)}});
  json root = {{"name", m.name},
               {"gate_costs", gc},
               {"depth_weights", dw},
               {"preprocessing", pre},
               {"prime_modulus", m.prime_modulus ? json(*m.prime_modulus) : json(nullptr)},
               {"edge_costs", edges}};
  return root.dump(indent) + "\n";
}

CostModel secret_sharing_model(std::uint32_t /*bitwidth*/) {
  CostModel m;
  m.name = "secret_sharing";
  const ResourceVector free = {{"rounds", 0}, {"communication", 0}};
  const ResourceVector mul = {{"rounds", 1}, {"communication", 1}};
  const ResourceVector lt = {{"rounds", 7}, {"communication", 7}};
  const ResourceVector eq = {{"rounds", 10.5}, {"communication", 10.5}};
  for (GateKind k : {GateKind::Add, GateKind::Sub, GateKind::MulPlain, GateKind::Reveal,
                     GateKind::Not, GateKind::RevealBit})
    m.gate_costs[k] = free;
  for (GateKind k : {GateKind::Mul, GateKind::Mux, GateKind::And, GateKind::Or, GateKind::Xor,
                     GateKind::MuxBit})
    m.gate_costs[k] = mul;
  m.gate_costs[GateKind::Lt] = lt;
  m.gate_costs[GateKind::Leq] = lt;
  m.gate_costs[GateKind::Eq] = eq;
  for (GateKind k : {GateKind::Mul, GateKind::Mux, GateKind::And, GateKind::Or, GateKind::Xor,
                     GateKind::MuxBit})
    m.depth_weights[k] = 1;
  m.depth_weights[GateKind::Lt] = 7;
  m.depth_weights[GateKind::Leq] = 7;
  m.depth_weights[GateKind::Eq] = 11;
  m.prime_modulus = (std::uint64_t{1} << 61) - 1;
  return m;
}

CostModel mult_depth_model(std::uint32_t bitwidth) {
  CostModel m;
  m.name = "mult_depth";
  const double w = bitwidth;
  const auto log_w = static_cast<std::int64_t>(std::ceil(std::log2(w)));
  for (GateKind k : {GateKind::Add, GateKind::Sub, GateKind::MulPlain, GateKind::Reveal,
                     GateKind::Xor, GateKind::Not, GateKind::RevealBit})
    m.gate_costs[k] = {{"multiplications", 0}};
  for (GateKind k : {GateKind::Mul, GateKind::Mux, GateKind::And, GateKind::Or, GateKind::MuxBit})
    m.gate_costs[k] = {{"multiplications", 1}};
  m.gate_costs[GateKind::Lt] = {{"multiplications", w}};
  m.gate_costs[GateKind::Leq] = {{"multiplications", w}};
  m.gate_costs[GateKind::Eq] = {{"multiplications", w - 1}};
  for (GateKind k : {GateKind::Mul, GateKind::Mux, GateKind::And, GateKind::Or, GateKind::MuxBit})
    m.depth_weights[k] = 1;
  m.depth_weights[GateKind::Lt] = bitwidth;
  m.depth_weights[GateKind::Leq] = bitwidth;
  m.depth_weights[GateKind::Eq] = log_w;
  return m;
}

// Word gates are priced by the bitblaster's expansion; XOR-type gates carry
// no communication.
CostModel boolean_model(std::uint32_t bitwidth) {
  CostModel m;
  m.name = "boolean";
  const double w = bitwidth;
  auto gates = [](double total, double nonlinear) {
    return ResourceVector{{"gates", total}, {"communication", nonlinear}};
  };
  m.gate_costs[GateKind::Add] = gates(5 * w, 3 * w);
  m.gate_costs[GateKind::Sub] = gates(6 * w, 3 * w);
  m.gate_costs[GateKind::Lt] = gates(6 * w, 3 * w);
  m.gate_costs[GateKind::Leq] = gates(6 * w + 1, 3 * w);
  m.gate_costs[GateKind::Eq] = gates(3 * w - 1, w - 1);
  m.gate_costs[GateKind::Mux] = gates(w, w);
  const double pp = w * (w + 1) / 2;
  m.gate_costs[GateKind::Mul] = gates(pp + (w - 1) * 5 * w, pp + (w - 1) * 3 * w);
  m.gate_costs[GateKind::MulPlain] = gates((w / 2) * 5 * w, (w / 2) * 3 * w);
  m.gate_costs[GateKind::Reveal] = gates(0, 0);
  m.gate_costs[GateKind::And] = gates(1, 1);
  m.gate_costs[GateKind::Or] = gates(1, 1);
  m.gate_costs[GateKind::MuxBit] = gates(1, 1);
  m.gate_costs[GateKind::Xor] = gates(1, 0);
  m.gate_costs[GateKind::Not] = gates(1, 0);
  m.gate_costs[GateKind::RevealBit] = gates(0, 0);
  for (GateKind k : {GateKind::And, GateKind::Or, GateKind::MuxBit}) m.depth_weights[k] = 1;
  m.depth_weights[GateKind::Add] = bitwidth;
  m.depth_weights[GateKind::Sub] = bitwidth;
  m.depth_weights[GateKind::Lt] = bitwidth;
  m.depth_weights[GateKind::Leq] = bitwidth;
  m.depth_weights[GateKind::Eq] = static_cast<std::int64_t>(std::ceil(std::log2(w)));
  m.depth_weights[GateKind::Mux] = 1;
  m.depth_weights[GateKind::Mul] = 2 * bitwidth;
  m.depth_weights[GateKind::MulPlain] = bitwidth;
  return m;
}

CostModel resolve_cost_model(const std::string& name_or_path, std::uint32_t bitwidth) {
  if (name_or_path == "secret_sharing") return secret_sharing_model(bitwidth);
  if (name_or_path == "mult_depth") return mult_depth_model(bitwidth);
  if (name_or_path == "boolean") return boolean_model(bitwidth);
  return load_cost_model(name_or_path);
}

}  // namespace hml
