#include "hml/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

namespace hml {

ModelCoverageError::ModelCoverageError(GateKind kind)
    : Error(std::string("cost model does not price gate kind ") + to_string(kind)), kind_(kind) {}

std::int64_t critical_path(const Circuit& c, const std::map<GateKind, std::int64_t>& weights) {
  auto weight = [&](GateKind k) {
    auto it = weights.find(k);
    return it == weights.end() ? std::int64_t{0} : it->second;
  };
  auto depth = accumulate<std::int64_t>(c, [&](const Node& n, const std::vector<const std::int64_t*>& ops) {
    std::int64_t d = 0;
    for (const auto* o : ops) d = std::max(d, *o);
    return d + weight(n.kind);
  });
  return depth.empty() ? 0 : *std::max_element(depth.begin(), depth.end());
}

namespace {

bool plain(const Circuit& c, NodeId id) { return c.nodes[id].meta.kind == Meta::Kind::Plain; }

}  // namespace

bool consumes_triple(const Circuit& c, NodeId id) {
  const Node& n = c.nodes[id];
  switch (n.kind) {
    case GateKind::Mul:
    case GateKind::And:
    case GateKind::Or:
    case GateKind::Xor:
      return !plain(c, n.operands[0]) && !plain(c, n.operands[1]);
    case GateKind::Mux:
    case GateKind::MuxBit:
      return !plain(c, n.operands[0]) && !(plain(c, n.operands[1]) && plain(c, n.operands[2]));
    default: return false;
  }
}

bool is_secret_comparison(const Circuit& c, NodeId id) {
  const Node& n = c.nodes[id];
  if (n.kind != GateKind::Lt && n.kind != GateKind::Leq && n.kind != GateKind::Eq) return false;
  return !plain(c, n.operands[0]) || !plain(c, n.operands[1]);
}

PreprocessingBudget preprocessing_requirements(const Circuit& c, const CostModel& m) {
  std::uint64_t muls = 0, cmps = 0;
  for (NodeId id = 0; id < c.nodes.size(); ++id) {
    if (consumes_triple(c, id)) ++muls;
    if (is_secret_comparison(c, id)) ++cmps;
  }
  PreprocessingBudget b;
  b.triples = static_cast<std::uint64_t>(std::ceil(m.preprocessing.triples_per_mul * muls +
                                                   m.preprocessing.comparison_triples(c.bitwidth) * cmps));
  b.random_bits = static_cast<std::uint64_t>(std::ceil(m.preprocessing.comparison_bits(c.bitwidth) * cmps));
  return b;
}

ResourceReport estimate(const Circuit& c, const CostModel& m) {
  ResourceReport r;
  r.model_name = m.name;
  for (const Node& n : c.nodes) {
    if (is_structural(n.kind)) continue;
    if (!m.covers(n.kind)) throw ModelCoverageError(n.kind);
    ++r.gate_counts[n.kind];
  }
  for (const auto& res : m.resources()) r.totals[res] = 0;
  for (const auto& [k, count] : r.gate_counts)
    for (const auto& [res, v] : m.gate_costs.at(k)) r.totals[res] += v * static_cast<double>(count);
  if (!m.edge_costs.empty())
    for (const Node& n : c.nodes)
      for (NodeId o : n.operands) {
        auto it = m.edge_costs.find({c.nodes[o].kind, n.kind});
        if (it == m.edge_costs.end()) continue;
        for (const auto& [res, v] : it->second) r.totals[res] += v;
      }
  r.depth = critical_path(c, m.depth_weights);
  r.preprocessing = preprocessing_requirements(c, m);
  return r;
}

std::vector<std::pair<std::string, double>> rank_backends(const Circuit& c,
                                                          const std::vector<CostModel>& models,
                                                          const std::string& objective) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& m : models) {
    if (!m.resources().contains(objective))
      throw ObjectiveMissingError("model '" + m.name + "' has no resource '" + objective + "'");
    out.emplace_back(m.name, estimate(c, m).totals.at(objective));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second < b.second : a.first < b.first;
  });
  return out;
}

std::string report_to_json(const ResourceReport& r, int indent) {
  nlohmann::json totals = nlohmann::json::object();
  for (const auto& [k, v] : r.totals) totals[k] = v;
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [k, v] : r.gate_counts) counts[to_string(k)] = v;
  nlohmann::json j = {{"model", r.model_name},
                      {"totals", totals},
                      {"gate_counts", counts},
                      {"depth", r.depth},
                      {"preprocessing",
                       {{"triples", r.preprocessing.triples}, {"random_bits", r.preprocessing.random_bits}}}};
  return j.dump(indent) + "\n";
}

}  // namespace hml
