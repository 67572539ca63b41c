#include <algorithm>
#include <cmath>

#include "hml/backends.hpp"

namespace hml {

namespace {

// Runtime value: public iff the node's meta is Plain.
struct Value {
  bool pub = true;
  Fe clear = 0;         // public value
  ShareVector shared;   // otherwise
};

class Simulator {
 public:
  Simulator(const Circuit& c, const InputMap& inputs, const SimulateOptions& opts)
      : c_(c), inputs_(inputs), opts_(opts), rng_(opts.seed), n_(opts.parties), vals_(c.nodes.size()) {}

  SharedResult run() {
    if (n_ < 2) throw Error("simulate_shared: at least two parties are required");
    if (auto errs = validate(c_); !errs.empty()) throw CircuitError("simulate_shared: " + errs.front());
    for (const Node& n : c_.nodes)
      if (n.meta.kind == Meta::Kind::Shared && n.meta.threshold != n_)
        throw PlayerMismatchError("simulate_shared: circuit is shared among " +
                                  std::to_string(n.meta.threshold) + " players, simulation has " +
                                  std::to_string(n_));
    check_field_range();
    offline();
    for (const auto& in : c_.inputs) port_of_[in.node] = &in;
    std::vector<std::uint64_t> round_at(c_.nodes.size(), 0);
    for (NodeId id = 0; id < c_.nodes.size(); ++id) {
      const Node& n = c_.nodes[id];
      bool interactive = false;
      vals_[id] = step(id, n, interactive);
      std::uint64_t r = 0;
      for (NodeId o : n.operands) r = std::max(r, round_at[o]);
      if (interactive) r += static_cast<std::uint64_t>(opts_.model.depth_weight(n.kind));
      round_at[id] = r;
      res_.trace.rounds = std::max(res_.trace.rounds, r);
    }
    collect_outputs();
    return std::move(res_);
  }

 private:
  const Circuit& c_;
  const InputMap& inputs_;
  const SimulateOptions& opts_;
  std::mt19937_64 rng_;
  std::uint32_t n_;
  std::vector<Value> vals_;
  std::map<NodeId, const InputPort*> port_of_;
  std::vector<BeaverTriple> triples_;
  std::vector<ShareVector> bits_;
  std::size_t next_triple_ = 0, next_bit_ = 0;
  SharedResult res_;

  void offline() {
    res_.offline = preprocessing_requirements(c_, opts_.model);
    triples_.reserve(res_.offline.triples);
    for (std::uint64_t i = 0; i < res_.offline.triples; ++i) triples_.push_back(make_triple(n_, rng_));
    for (std::uint64_t i = 0; i < res_.offline.random_bits; ++i)
      bits_.push_back(share(std::uniform_int_distribution<int>(0, 1)(rng_), n_, rng_));
  }

  BeaverTriple& take_triple() {
    if (next_triple_ >= triples_.size())
      throw BudgetExceededError("simulate_shared: online phase needs more triples than were preprocessed");
    ++res_.trace.triples_consumed;
    return triples_[next_triple_++];
  }

  void take_bit() {
    if (next_bit_ >= bits_.size())
      throw BudgetExceededError("simulate_shared: online phase needs more random bits than were preprocessed");
    ++res_.trace.bits_consumed;
    ++next_bit_;
  }

  void log_local(NodeId id, const char* op) {
    if (!opts_.record_access) return;
    for (Party p = 0; p < n_; ++p) res_.access_log.push_back({id, op, {p}});
  }

  void log_all(NodeId id, const char* op) {
    if (!opts_.record_access) return;
    std::vector<Party> all;
    for (Party p = 0; p < n_; ++p) all.push_back(p);
    res_.access_log.push_back({id, op, std::move(all)});
  }

  Value pub(Fe v) { return Value{true, v, {}}; }

  Value fresh(Fe v) {
    Value out;
    out.pub = false;
    out.shared = share(v, n_, rng_);
    return out;
  }

  // Public value as a trivial sharing: the first player holds it.
  ShareVector as_shared(const Value& v) {
    if (!v.pub) return v.shared;
    ShareVector sv;
    sv.players = OwnerSet::range(n_);
    sv.observers = sv.players;
    sv.threshold = n_;
    for (Party p = 0; p < n_; ++p) sv.shares[p] = p == 0 ? v.clear : 0;
    return sv;
  }

  Value secret(ShareVector sv) {
    Value out;
    out.pub = false;
    out.shared = std::move(sv);
    return out;
  }

  // Local affine combination a*x + b*y + k over shares and public values.
  Value affine(NodeId id, Fe a, const Value& x, Fe b, const Value& y, Fe k) {
    if (x.pub && y.pub)
      return pub(field::add(field::add(field::mul(a, x.clear), field::mul(b, y.clear)), k));
    log_local(id, "local");
    ShareVector sx = as_shared(x), sy = as_shared(y);
    ShareVector z = sx;
    for (Party p = 0; p < n_; ++p) {
      Fe s = field::add(field::mul(a, sx.shares[p]), field::mul(b, sy.shares[p]));
      if (p == 0) s = field::add(s, k);
      z.shares[p] = s;
    }
    return secret(std::move(z));
  }

  Value add(NodeId id, const Value& x, const Value& y) { return affine(id, 1, x, 1, y, 0); }
  Value sub(NodeId id, const Value& x, const Value& y) {
    return affine(id, 1, x, field::kPrime - 1, y, 0);
  }
  Value scale(NodeId id, const Value& x, Fe k) { return affine(id, k, x, 0, pub(0), 0); }

  // Product; a Beaver triple exactly when `interactive`.
  Value product(NodeId id, const Value& x, const Value& y, bool interactive) {
    if (!interactive) {
      if (x.pub) return scale(id, y, x.clear);
      return scale(id, x, y.clear);
    }
    log_local(id, "beaver-open");
    BeaverStats stats;
    ShareVector z = beaver_mul(x.shared, y.shared, take_triple(), &stats);
    res_.trace.multicasts += stats.multicasts;
    return secret(std::move(z));
  }

  std::int64_t word(Fe v) const { return wrap(field::lift(v), c_.bitwidth); }

  Value step(NodeId id, const Node& n, bool& interactive) {
    auto op = [&](std::size_t i) -> const Value& { return vals_[n.operands[i]]; };
    const bool secret_node = n.meta.kind != Meta::Kind::Plain;
    switch (n.kind) {
      case GateKind::Const:
      case GateKind::ConstBit: return pub(field::embed(*n.payload));
      case GateKind::Input:
      case GateKind::InputBit: {
        const InputPort& p = *port_of_.at(id);
        std::int64_t v = input_value(p);
        if (p.bit) v = (static_cast<std::uint64_t>(v) >> *p.bit) & 1;
        return secret_node ? fresh(field::embed(v)) : pub(field::embed(v));
      }
      case GateKind::Add: return add(id, op(0), op(1));
      case GateKind::Sub: return sub(id, op(0), op(1));
      case GateKind::MulPlain: return scale(id, op(0), field::embed(*n.payload));
      case GateKind::Not: return affine(id, field::kPrime - 1, op(0), 0, pub(0), 1);
      case GateKind::Mul:
      case GateKind::And:
        interactive = consumes_triple(c_, id);
        return product(id, op(0), op(1), interactive);
      case GateKind::Xor: {
        // a + b - 2ab
        interactive = consumes_triple(c_, id);
        Value ab = product(id, op(0), op(1), interactive);
        return sub(id, add(id, op(0), op(1)), scale(id, ab, 2));
      }
      case GateKind::Or: {
        interactive = consumes_triple(c_, id);
        Value ab = product(id, op(0), op(1), interactive);
        return sub(id, add(id, op(0), op(1)), ab);
      }
      case GateKind::Mux:
      case GateKind::MuxBit: {
        if (op(0).pub) {
          const bool pick = field::lift(op(0).clear) & 1;
          const Value& v = pick ? op(1) : op(2);
          return secret_node && v.pub ? secret(as_shared(v)) : v;
        }
        // y + b * (x - y)
        interactive = consumes_triple(c_, id);
        Value diff = sub(id, op(1), op(2));
        return add(id, op(2), product(id, op(0), diff, interactive));
      }
      case GateKind::Lt:
      case GateKind::Leq:
      case GateKind::Eq: return compare(id, n, interactive);
      case GateKind::Reveal:
      case GateKind::RevealBit: {
        if (op(0).pub) return op(0);
        log_all(id, "reveal");
        return pub(field::embed(word(reconstruct(op(0).shared))));
      }
    }
    throw Error("simulate_shared: unsupported gate");
  }

  // Idealized comparison: opens its operands inside the functionality only,
  // then re-shares the result bit.
  Value compare(NodeId id, const Node& n, bool& interactive) {
    const Value& a = vals_[n.operands[0]];
    const Value& b = vals_[n.operands[1]];
    auto open = [&](const Value& v) { return v.pub ? word(v.clear) : word(reconstruct(v.shared)); };
    if (!is_secret_comparison(c_, id)) {
      const std::int64_t args[] = {open(a), open(b)};
      return pub(field::embed(eval_gate(n.kind, args, std::nullopt, c_.bitwidth)));
    }
    interactive = true;
    const auto& pre = opts_.model.preprocessing;
    const auto triples = static_cast<std::uint64_t>(std::ceil(pre.comparison_triples(c_.bitwidth)));
    const auto bits = static_cast<std::uint64_t>(std::ceil(pre.comparison_bits(c_.bitwidth)));
    for (std::uint64_t i = 0; i < triples; ++i) take_triple().consumed = true;
    for (std::uint64_t i = 0; i < bits; ++i) take_bit();
    res_.trace.multicasts += static_cast<std::uint64_t>(std::ceil(opts_.model.cost(n.kind, "communication")));
    log_all(id, "compare");
    const std::int64_t args[] = {open(a), open(b)};
    return fresh(field::embed(eval_gate(n.kind, args, std::nullopt, c_.bitwidth)));
  }

  // Field values match w-bit words only inside (-p/2, p/2). Words up to 61 bits
  // always fit. Wider words are accepted only with inputs and constants under
  // 2^31, which keeps every corpus-style value far from the field boundary.
  static constexpr std::uint32_t kFieldBits = 61;
  static constexpr std::int64_t kWideLimit = std::int64_t{1} << 31;

  void check_field_range() const {
    if (c_.bitwidth <= kFieldBits) return;
    for (const Node& n : c_.nodes)
      if (n.payload && (n.kind == GateKind::Const || n.kind == GateKind::MulPlain) &&
          (*n.payload >= kWideLimit || *n.payload <= -kWideLimit))
        throw OverflowContractError("simulate_shared: constant " + std::to_string(*n.payload) +
                                    " does not fit the field at bitwidth " + std::to_string(c_.bitwidth) +
                                    "; compile with a bitwidth of at most 61");
  }

  std::int64_t input_value(const InputPort& p) const {
    auto it = inputs_.find({p.party, p.name});
    if (it == inputs_.end())
      throw MissingInputError("missing input '" + p.name + "' of party " + std::to_string(p.party));
    const std::int64_t limit = c_.bitwidth <= kFieldBits ? std::int64_t{1} << (c_.bitwidth - 2) : kWideLimit;
    if (it->second >= limit || it->second <= -limit)
      throw OverflowContractError("input '" + p.name + "' exceeds the bitwidth contract");
    return it->second;
  }

  void collect_outputs() {
    std::map<std::string, std::uint64_t> words;
    for (const auto& o : c_.outputs) {
      const std::int64_t v = word(vals_[o.node].clear);
      if (!o.bit) {
        res_.outputs[o.name] = v;
        continue;
      }
      words.try_emplace(o.name, 0);
      words[o.name] |= static_cast<std::uint64_t>(v & 1) << *o.bit;
    }
    for (const auto& [name, bits] : words) res_.outputs[name] = wrap(static_cast<std::int64_t>(bits), c_.bitwidth);
  }
};

}  // namespace

SharedResult simulate_shared(const Circuit& c, const InputMap& inputs, const SimulateOptions& opts) {
  return Simulator(c, inputs, opts).run();
}

}  // namespace hml
